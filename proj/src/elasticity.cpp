#include "emfrac/elasticity.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <cstring>
#include <string>

namespace emfrac {

std::uint64_t hash_damage(const DamageField& v) {
    std::uint64_t h = 1469598103934665603ull;
    for (double x : v.values()) {
        std::uint64_t bits;
        std::memcpy(&bits, &x, sizeof(bits));
        for (int b = 0; b < 8; ++b) {
            h ^= (bits >> (8 * b)) & 0xffu;
            h *= 1099511628211ull;
        }
    }
    return h;
}

namespace {

// Node order within a cell: s00, s10, s01, s11.
constexpr double kDx[4] = {-1.0, 1.0, -1.0, 1.0};
constexpr double kDy[4] = {-1.0, -1.0, 1.0, 1.0};

template <typename Emit>
void for_each_cell_entry(const Grid2& g, const DamageField& v, const Material& mat,
                         Emit&& emit) {
    for (int cj = 0; cj < g.cell_ny(); ++cj) {
        for (int ci = 0; ci < g.cell_nx(); ++ci) {
            const double a = [&] {
                const double m = v.cell_mean(ci, cj);
                return m * m + mat.k_eps;
            }();
            const double w = 0.5 * a * mat.mu;
            const int n[4] = {g.node_id(ci, cj), g.node_id(ci + 1, cj),
                              g.node_id(ci, cj + 1), g.node_id(ci + 1, cj + 1)};
            for (int r = 0; r < 4; ++r)
                for (int c = 0; c < 4; ++c)
                    emit(n[r], n[c], w * (kDx[r] * kDx[c] + kDy[r] * kDy[c]));
        }
    }
}

}  // namespace

Eigen::SparseMatrix<double> assemble_neumann_matrix(const Grid2& grid,
                                                    const DamageField& v,
                                                    const Material& mat) {
    require_same_grid(grid, v.grid(), "assemble_neumann_matrix");
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<size_t>(grid.cell_count()) * 16);
    for_each_cell_entry(grid, v, mat, [&](int r, int c, double val) {
        if (val != 0.0) trips.emplace_back(r, c, val);
    });
    Eigen::SparseMatrix<double> A(grid.node_count(), grid.node_count());
    A.setFromTriplets(trips.begin(), trips.end());
    return A;
}

SparseOperator assemble_operator(const Grid2& grid, const BoundaryPartition& part,
                                 const DamageField& v, const Material& mat) {
    require_same_grid(grid, v.grid(), "assemble_operator");
    SparseOperator op;
    op.free_index.assign(grid.node_count(), -1);
    for (int n = 0; n < grid.node_count(); ++n) {
        if (!part.is_dirichlet(n)) {
            op.free_index[n] = static_cast<int>(op.free_nodes.size());
            op.free_nodes.push_back(n);
        }
    }
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<size_t>(grid.cell_count()) * 16);
    for_each_cell_entry(grid, v, mat, [&](int r, int c, double val) {
        const int fr = op.free_index[r];
        const int fc = op.free_index[c];
        if (fr >= 0 && fc >= 0 && val != 0.0) trips.emplace_back(fr, fc, val);
    });
    op.matrix.resize(static_cast<int>(op.free_nodes.size()),
                     static_cast<int>(op.free_nodes.size()));
    op.matrix.setFromTriplets(trips.begin(), trips.end());
    op.damage_hash = hash_damage(v);
    return op;
}

ScalarField solve_equilibrium(const Grid2& grid, const BoundaryPartition& part,
                              const DirichletData& bc, const DamageField& v,
                              const Material& mat, double tol,
                              const ScalarField* guess) {
    require_same_grid(grid, v.grid(), "solve_equilibrium");
    if (!(tol > 0)) throw ValidationError("solve_equilibrium: tol must be > 0");
    if (part.count_u1 + part.count_u2 == 0)
        throw SingularSystem("solve_equilibrium: no Dirichlet node in partition");

    SparseOperator op = assemble_operator(grid, part, v, mat);
    const int nfree = static_cast<int>(op.free_nodes.size());

    // rhs_f = -sum K[f, d] * bc_d over Dirichlet nodes d.
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nfree);
    for_each_cell_entry(grid, v, mat, [&](int r, int c, double val) {
        const int fr = op.free_index[r];
        if (fr >= 0 && op.free_index[c] < 0 && val != 0.0)
            rhs[fr] -= val * bc.at(c);
    });

    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>,
                             Eigen::Lower | Eigen::Upper,
                             Eigen::DiagonalPreconditioner<double>>
        cg;
    cg.setTolerance(tol);
    cg.setMaxIterations(50 * grid.node_count());
    cg.compute(op.matrix);

    Eigen::VectorXd x;
    if (guess) {
        require_same_grid(grid, guess->grid(), "solve_equilibrium guess");
        Eigen::VectorXd x0(nfree);
        for (int f = 0; f < nfree; ++f) x0[f] = (*guess)[op.free_nodes[f]];
        x = cg.solveWithGuess(rhs, x0);
    } else {
        x = cg.solve(rhs);
    }
    if (cg.info() != Eigen::Success)
        throw SolverDiverged("solve_equilibrium: CG exceeded iteration cap (" +
                             std::to_string(cg.iterations()) + " iterations, error " +
                             std::to_string(cg.error()) + ")");

    ScalarField u(grid, 0.0);
    for (int n = 0; n < grid.node_count(); ++n)
        u[n] = part.is_dirichlet(n) ? bc.at(n) : x[op.free_index[n]];
    return u;
}

double elastic_energy(const ScalarField& u, const DamageField& v,
                      const Material& mat) {
    require_same_grid(u.grid(), v.grid(), "elastic_energy");
    const Grid2& g = u.grid();
    const CellVectorField grad = cell_gradient(u);
    const double h2 = g.h * g.h;
    double total = 0.0;
    for (int cj = 0; cj < g.cell_ny(); ++cj) {
        for (int ci = 0; ci < g.cell_nx(); ++ci) {
            const double m = v.cell_mean(ci, cj);
            const int c = g.cell_id(ci, cj);
            const double g2 = grad.x[c] * grad.x[c] + grad.y[c] * grad.y[c];
            total += (m * m + mat.k_eps) * mat.mu * g2 * h2;
        }
    }
    return total;
}

CellVectorField stress_field(const ScalarField& u, const Material& mat) {
    CellVectorField s = cell_gradient(u);
    for (double& x : s.x) x *= mat.mu;
    for (double& y : s.y) y *= mat.mu;
    return s;
}

double volume_pairing(const ScalarField& u_a, const ScalarField& w,
                      const DamageField& v, const Material& mat) {
    require_same_grid(u_a.grid(), w.grid(), "volume_pairing");
    require_same_grid(u_a.grid(), v.grid(), "volume_pairing");
    const Grid2& g = u_a.grid();
    const CellVectorField ga = cell_gradient(u_a);
    const CellVectorField gw = cell_gradient(w);
    const double h2 = g.h * g.h;
    double total = 0.0;
    for (int cj = 0; cj < g.cell_ny(); ++cj) {
        for (int ci = 0; ci < g.cell_nx(); ++ci) {
            const double m = v.cell_mean(ci, cj);
            const int c = g.cell_id(ci, cj);
            const double dot = ga.x[c] * gw.x[c] + ga.y[c] * gw.y[c];
            total += 2.0 * (m * m + mat.k_eps) * mat.mu * dot * h2;
        }
    }
    return total;
}

double dtn_pairing(const Grid2& grid, const BoundaryPartition& part,
                   const DirichletData& bc_a, const DirichletData& bc_b,
                   const DamageField& v, const Material& mat, double tol) {
    const ScalarField u_a = solve_equilibrium(grid, part, bc_a, v, mat, tol);
    const ScalarField u_b = solve_equilibrium(grid, part, bc_b, v, mat, tol);
    return volume_pairing(u_a, u_b, v, mat);
}

}  // namespace emfrac
