#include "emfrac/viscous.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <string>

#include "emfrac/elasticity.hpp"

namespace emfrac {

namespace {

constexpr double kDx[4] = {-1.0, 1.0, -1.0, 1.0};
constexpr double kDy[4] = {-1.0, -1.0, 1.0, 1.0};

std::vector<double> lumped_masses(const Grid2& g) {
    std::vector<double> m(g.node_count(), 0.0);
    const double quarter = 0.25 * g.h * g.h;
    for (int cj = 0; cj < g.cell_ny(); ++cj)
        for (int ci = 0; ci < g.cell_nx(); ++ci) {
            m[g.node_id(ci, cj)] += quarter;
            m[g.node_id(ci + 1, cj)] += quarter;
            m[g.node_id(ci, cj + 1)] += quarter;
            m[g.node_id(ci + 1, cj + 1)] += quarter;
        }
    return m;
}

double u_objective(const ScalarField& u, const DamageField& v,
                   const ScalarField& anchor, double weight, const Material& mat) {
    double pen = 0.0;
    const std::vector<double> m = lumped_masses(u.grid());
    for (int n = 0; n < u.grid().node_count(); ++n) {
        const double d = u[n] - anchor[n];
        pen += m[n] * d * d;
    }
    return elastic_energy(u, v, mat) + weight * pen;
}

}  // namespace

double lumped_l2_sq(const ScalarField& a, const ScalarField& b) {
    require_same_grid(a.grid(), b.grid(), "lumped_l2_sq");
    const std::vector<double> m = lumped_masses(a.grid());
    double acc = 0.0;
    for (int n = 0; n < a.grid().node_count(); ++n) acc += m[n] * a[n] * b[n];
    return acc;
}

double lumped_l2_sq_diff(const ScalarField& a, const ScalarField& b) {
    require_same_grid(a.grid(), b.grid(), "lumped_l2_sq_diff");
    const std::vector<double> m = lumped_masses(a.grid());
    double acc = 0.0;
    for (int n = 0; n < a.grid().node_count(); ++n) {
        const double d = a[n] - b[n];
        acc += m[n] * d * d;
    }
    return acc;
}

BoundaryPartition all_dirichlet_partition(const Grid2& grid) {
    EdgeSpec spec;
    spec.bottom = spec.top = spec.left = spec.right = Label::GammaU1;
    return partition_boundary(grid, spec);
}

ViscousStepResult viscous_step(const ScalarField& u_prev, const DamageField& v_prev,
                               const BoundaryPartition& part,
                               const DirichletData& bc, double u0_sup, int s,
                               double lambda, const Material& mat,
                               const AltMinOptions& opts) {
    if (s < 1) throw ValidationError("viscous_step: s must be >= 1");
    if (!(lambda > 0)) throw ValidationError("viscous_step: lambda must be > 0");
    const Grid2& grid = u_prev.grid();
    require_same_grid(grid, v_prev.grid(), "viscous_step");
    const double weight = lambda * s;
    const std::vector<double> masses = lumped_masses(grid);
    const SurfaceDensityField g(grid, mat.G);

    auto solve_u = [&](const DamageField& v, const ScalarField& start) {
        // (K(v) + weight*M)_ff x = weight*M u_prev - K_fd bc_d
        std::vector<int> free_index(grid.node_count(), -1);
        std::vector<int> free_nodes;
        for (int n = 0; n < grid.node_count(); ++n)
            if (!part.is_dirichlet(n)) {
                free_index[n] = static_cast<int>(free_nodes.size());
                free_nodes.push_back(n);
            }
        const int nfree = static_cast<int>(free_nodes.size());
        std::vector<Eigen::Triplet<double>> trips;
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nfree);
        for (int cj = 0; cj < grid.cell_ny(); ++cj) {
            for (int ci = 0; ci < grid.cell_nx(); ++ci) {
                const double mcell = v.cell_mean(ci, cj);
                const double w = 0.5 * (mcell * mcell + mat.k_eps) * mat.mu;
                const int n[4] = {grid.node_id(ci, cj), grid.node_id(ci + 1, cj),
                                  grid.node_id(ci, cj + 1),
                                  grid.node_id(ci + 1, cj + 1)};
                for (int r = 0; r < 4; ++r) {
                    const int fr = free_index[n[r]];
                    if (fr < 0) continue;
                    for (int c = 0; c < 4; ++c) {
                        const double val = w * (kDx[r] * kDx[c] + kDy[r] * kDy[c]);
                        if (val == 0.0) continue;
                        const int fc = free_index[n[c]];
                        if (fc >= 0) trips.emplace_back(fr, fc, val);
                        else rhs[fr] -= val * bc.at(n[c]);
                    }
                }
            }
        }
        for (int f = 0; f < nfree; ++f) {
            const int n = free_nodes[f];
            trips.emplace_back(f, f, weight * masses[n]);
            rhs[f] += weight * masses[n] * u_prev[n];
        }
        Eigen::SparseMatrix<double> A(nfree, nfree);
        A.setFromTriplets(trips.begin(), trips.end());
        Eigen::ConjugateGradient<Eigen::SparseMatrix<double>,
                                 Eigen::Lower | Eigen::Upper,
                                 Eigen::DiagonalPreconditioner<double>>
            cg;
        cg.setTolerance(opts.linear_tol);
        cg.setMaxIterations(50 * grid.node_count());
        cg.compute(A);
        Eigen::VectorXd x0(nfree);
        for (int f = 0; f < nfree; ++f) x0[f] = start[free_nodes[f]];
        const Eigen::VectorXd x = cg.solveWithGuess(rhs, x0);
        if (cg.info() != Eigen::Success)
            throw SolverDiverged("viscous_step: CG exceeded iteration cap (" +
                                 std::to_string(cg.iterations()) + " iterations)");
        ScalarField u(grid, 0.0);
        for (int n = 0; n < grid.node_count(); ++n)
            u[n] = part.is_dirichlet(n) ? bc.at(n)
                                        : std::clamp(x[free_index[n]], -u0_sup, u0_sup);
        return u;
    };

    ScalarField u = u_prev;
    DamageField v = v_prev;
    double prev_total = 0.0;
    bool have_prev = false;
    int it = 0;
    double delta = 0.0;
    for (it = 1; it <= opts.max_iters; ++it) {
        ScalarField u_cand = solve_u(v, u);
        // The sup-norm projection can spoil descent of the quadratic
        // u-objective; an exact segment search restores it.
        if (u_objective(u_cand, v, u_prev, weight, mat) >
            u_objective(u, v, u_prev, weight, mat)) {
            const double e0 = u_objective(u, v, u_prev, weight, mat);
            const double e1 = u_objective(u_cand, v, u_prev, weight, mat);
            ScalarField mid = u;
            for (int n = 0; n < grid.node_count(); ++n)
                mid[n] = 0.5 * (u[n] + u_cand[n]);
            const double eh = u_objective(mid, v, u_prev, weight, mat);
            const double a = 2.0 * e0 - 4.0 * eh + 2.0 * e1;
            const double b = -3.0 * e0 + 4.0 * eh - e1;
            double theta = 0.0;
            if (a > 0.0) theta = std::clamp(-b / (2.0 * a), 0.0, 1.0);
            for (int n = 0; n < grid.node_count(); ++n)
                u_cand[n] = std::clamp((1.0 - theta) * u[n] + theta * u_cand[n],
                                       -u0_sup, u0_sup);
        }
        u = u_cand;
        v = minimize_v(u, v_prev, g, mat, opts.linear_tol, &v);
        const double total = at_energy(u, v, g, mat).total +
                             weight * lumped_l2_sq_diff(u, u_prev);
        if (have_prev) {
            delta = std::abs(total - prev_total);
            if (delta <= opts.rel_tol * std::max(std::abs(total), 1e-30)) break;
        }
        prev_total = total;
        have_prev = true;
        if (it == opts.max_iters)
            throw NoConvergence(it, delta, "viscous_step: iteration cap reached");
    }
    return {std::move(u), std::move(v), it};
}

ViscousTrace run_viscous(const ScalarField& u0, int s, double lambda, double T,
                         const Material& mat, const std::optional<DamageField>& v0,
                         const AltMinOptions& opts) {
    if (T < 0) throw ValidationError("run_viscous: T must be >= 0");
    const Grid2& grid = u0.grid();
    const BoundaryPartition part = all_dirichlet_partition(grid);
    const DirichletData bc(part, std::vector<double>(u0.values()));

    ViscousTrace trace;
    trace.lambda = lambda;
    trace.s = s;
    trace.u0_sup = u0.max_abs();

    DamageField v = v0 ? *v0 : DamageField(grid, 1.0);
    require_same_grid(grid, v.grid(), "run_viscous");
    const SurfaceDensityField g(grid, mat.G);

    ScalarField u = u0;
    ATEnergyBreakdown e0 = at_energy(u, v, g, mat);
    trace.steps.push_back({0, u, v, e0.elastic, e0.surface, e0.total, 0.0});

    const int n_steps = static_cast<int>(std::ceil(s * T));
    for (int k = 1; k <= n_steps; ++k) {
        ViscousStepResult res =
            viscous_step(u, v, part, bc, trace.u0_sup, s, lambda, mat, opts);
        const double pen = lambda * s * lumped_l2_sq_diff(res.u, u);
        u = res.u;
        v = res.v;
        ATEnergyBreakdown e = at_energy(u, v, g, mat);
        trace.steps.push_back({k, u, v, e.elastic, e.surface, e.total, pen});
    }
    return trace;
}

HolderEstimate holder_estimate_check(const ViscousTrace& trace, int s, double lambda,
                                     std::optional<double> M_user) {
    if (trace.steps.size() < 3)
        throw TraceTooShort("holder_estimate_check: need at least 3 states");
    HolderEstimate out;
    const double floor_term = 1.0 / (lambda * s);
    for (size_t i = 0; i < trace.steps.size(); ++i) {
        for (size_t j = i + 1; j < trace.steps.size(); ++j) {
            const double dt = static_cast<double>(j - i) / s;
            const double bound = std::sqrt(dt + floor_term);
            const double diff =
                std::sqrt(lumped_l2_sq_diff(trace.steps[j].u, trace.steps[i].u));
            out.M_fit = std::max(out.M_fit, diff / bound);
            if (M_user && diff > *M_user * bound)
                out.violations.emplace_back(static_cast<int>(i), static_cast<int>(j));
        }
    }
    return out;
}

}  // namespace emfrac
