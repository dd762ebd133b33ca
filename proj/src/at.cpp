#include "emfrac/at.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <deque>
#include <ostream>
#include <string>

namespace emfrac {

SurfaceDensityField::SurfaceDensityField(const Grid2& grid, double value)
    : grid_(grid), values_(static_cast<size_t>(grid.cell_count()), value) {
    if (!(value > 0) || !std::isfinite(value))
        throw ValidationError("SurfaceDensityField: density must be positive");
}

SurfaceDensityField::SurfaceDensityField(const Grid2& grid,
                                         std::vector<double> values, double G,
                                         double cap_C)
    : grid_(grid), values_(std::move(values)) {
    if (static_cast<int>(values_.size()) != grid.cell_count())
        throw ValidationError("SurfaceDensityField: value count mismatch");
    for (double& v : values_) {
        if (!std::isfinite(v))
            throw NonFiniteValue("SurfaceDensityField: non-finite entry");
        if (v < G - 1e-12 * G || v > cap_C + 1e-12 * cap_C)
            throw OutOfRange("SurfaceDensityField: density outside [G, cap_C]");
        v = std::clamp(v, G, cap_C);
    }
}

namespace {

constexpr double kDx[4] = {-1.0, 1.0, -1.0, 1.0};
constexpr double kDy[4] = {-1.0, -1.0, 1.0, 1.0};

double surface_sum(const DamageField& v, const SurfaceDensityField& g,
                   const Material& mat, bool unit_density) {
    const Grid2& grid = v.grid();
    const double h = grid.h;
    const double h2 = h * h;
    const double inv2h = 1.0 / (2.0 * h);
    double total = 0.0;
    for (int cj = 0; cj < grid.cell_ny(); ++cj) {
        for (int ci = 0; ci < grid.cell_nx(); ++ci) {
            const double v00 = v(ci, cj), v10 = v(ci + 1, cj);
            const double v01 = v(ci, cj + 1), v11 = v(ci + 1, cj + 1);
            const double gx = (v10 + v11 - v00 - v01) * inv2h;
            const double gy = (v01 + v11 - v00 - v10) * inv2h;
            const double q = 0.25 * ((1 - v00) * (1 - v00) + (1 - v10) * (1 - v10) +
                                     (1 - v01) * (1 - v01) + (1 - v11) * (1 - v11));
            const double dens = unit_density ? 1.0 : g.at(ci, cj);
            total += dens * (mat.eps * (gx * gx + gy * gy) + q / (4.0 * mat.eps)) * h2;
        }
    }
    return total;
}

}  // namespace

ATEnergyBreakdown at_energy(const ScalarField& u, const DamageField& v,
                            const SurfaceDensityField& g, const Material& mat) {
    require_same_grid(u.grid(), v.grid(), "at_energy");
    require_same_grid(u.grid(), g.grid(), "at_energy");
    ATEnergyBreakdown out;
    out.elastic = elastic_energy(u, v, mat);
    out.surface = surface_sum(v, g, mat, false);
    out.total = out.elastic + out.surface;
    out.surface_length_estimate = surface_sum(v, g, mat, true);
    return out;
}

ScalarField minimize_u(const Grid2& grid, const BoundaryPartition& part,
                       const DirichletData& bc, const DamageField& v,
                       const Material& mat, double tol, const ScalarField* guess) {
    return solve_equilibrium(grid, part, bc, v, mat, tol, guess);
}

namespace {

double at_total(const ScalarField& u, const DamageField& v,
                const SurfaceDensityField& g, const Material& mat) {
    return elastic_energy(u, v, mat) + surface_sum(v, g, mat, false);
}

DamageField blend(const DamageField& a, const DamageField& b, double theta) {
    DamageField out = a;
    for (size_t n = 0; n < out.values().size(); ++n)
        out.values()[n] = (1.0 - theta) * a.values()[n] + theta * b.values()[n];
    return out;
}

}  // namespace

DamageField minimize_v(const ScalarField& u, const DamageField& v_bound,
                       const SurfaceDensityField& g, const Material& mat,
                       double tol, const DamageField* incoming) {
    const Grid2& grid = u.grid();
    require_same_grid(grid, v_bound.grid(), "minimize_v");
    require_same_grid(grid, g.grid(), "minimize_v");

    const int N = grid.node_count();
    const CellVectorField grad_u = cell_gradient(u);
    const double h2 = grid.h * grid.h;

    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<size_t>(grid.cell_count()) * 20);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(N);

    for (int cj = 0; cj < grid.cell_ny(); ++cj) {
        for (int ci = 0; ci < grid.cell_nx(); ++ci) {
            const int c = grid.cell_id(ci, cj);
            const int n[4] = {grid.node_id(ci, cj), grid.node_id(ci + 1, cj),
                              grid.node_id(ci, cj + 1), grid.node_id(ci + 1, cj + 1)};
            const double w =
                mat.mu * (grad_u.x[c] * grad_u.x[c] + grad_u.y[c] * grad_u.y[c]) * h2;
            const double gc = g.at(ci, cj);
            // Elastic coupling through the squared cell mean: Hessian 2w/16.
            const double me = 2.0 * w / 16.0;
            for (int r = 0; r < 4; ++r)
                for (int s = 0; s < 4; ++s) trips.emplace_back(n[r], n[s], me);
            // Gradient term g_c * eps * |grad v|^2 * h^2.
            const double ge = 0.5 * gc * mat.eps;
            for (int r = 0; r < 4; ++r)
                for (int s = 0; s < 4; ++s)
                    trips.emplace_back(n[r], n[s],
                                       ge * (kDx[r] * kDx[s] + kDy[r] * kDy[s]));
            // Node-lumped reaction g_c * q_c/(4 eps) * h^2.
            const double re = gc * h2 / (8.0 * mat.eps);
            for (int r = 0; r < 4; ++r) {
                trips.emplace_back(n[r], n[r], re);
                rhs[n[r]] += re;
            }
        }
    }

    Eigen::SparseMatrix<double> A(N, N);
    A.setFromTriplets(trips.begin(), trips.end());

    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>,
                             Eigen::Lower | Eigen::Upper,
                             Eigen::DiagonalPreconditioner<double>>
        cg;
    cg.setTolerance(tol);
    cg.setMaxIterations(50 * N);
    cg.compute(A);

    Eigen::VectorXd x0(N);
    const DamageField& start = incoming ? *incoming : v_bound;
    for (int i = 0; i < N; ++i) x0[i] = start.values()[i];
    const Eigen::VectorXd x = cg.solveWithGuess(rhs, x0);
    if (cg.info() != Eigen::Success)
        throw SolverDiverged("minimize_v: CG exceeded iteration cap (" +
                             std::to_string(cg.iterations()) + " iterations)");

    DamageField v_new = v_bound;
    for (int i = 0; i < N; ++i)
        v_new.values()[i] = std::clamp(std::min(x[i], v_bound.values()[i]), 0.0, 1.0);

    if (incoming) {
        // Projection after an unconstrained solve is not the exact constrained
        // minimizer; fall back to the exact 1D minimum along the segment when
        // the projected point fails to descend. The objective is quadratic in
        // v, so three evaluations determine it.
        const double e0 = at_total(u, *incoming, g, mat);
        const double e1 = at_total(u, v_new, g, mat);
        if (e1 > e0) {
            const DamageField mid = blend(*incoming, v_new, 0.5);
            const double eh = at_total(u, mid, g, mat);
            const double a = 2.0 * e0 - 4.0 * eh + 2.0 * e1;
            const double b = -3.0 * e0 + 4.0 * eh - e1;
            double theta = 0.0;
            if (a > 0.0) theta = std::clamp(-b / (2.0 * a), 0.0, 1.0);
            DamageField out = blend(*incoming, v_new, theta);
            // re-project: the affine combination of feasible points can
            // exceed the bound by one ulp
            for (size_t n = 0; n < out.values().size(); ++n)
                out.values()[n] = std::clamp(
                    std::min(out.values()[n], v_bound.values()[n]), 0.0, 1.0);
            return out;
        }
    }
    return v_new;
}

AltMinResult alternate_minimize(const Grid2& grid, const BoundaryPartition& part,
                                const DirichletData& bc, const DamageField& v_prev,
                                const SurfaceDensityField& g, const Material& mat,
                                const AltMinOptions& opts) {
    if (!(opts.rel_tol > 0))
        throw ValidationError("alternate_minimize: rel_tol must be > 0");

    if (opts.iteration_log) *opts.iteration_log << "iter,elastic,surface,total\n";
    auto run_from = [&](const DamageField& v_start) -> AltMinResult {
        DamageField v = v_start;
        ScalarField u(grid, 0.0);
        double prev_total = 0.0;
        bool have_prev = false;
        int it = 0;
        double delta = 0.0;
        for (it = 1; it <= opts.max_iters; ++it) {
            u = solve_equilibrium(grid, part, bc, v, mat, opts.linear_tol,
                                  it > 1 ? &u : nullptr);
            v = minimize_v(u, v_prev, g, mat, opts.linear_tol, &v);
            const double total = at_total(u, v, g, mat);
            if (opts.iteration_log) {
                const ATEnergyBreakdown e = at_energy(u, v, g, mat);
                *opts.iteration_log << it << "," << e.elastic << "," << e.surface
                                    << "," << e.total << "\n";
            }
            if (have_prev) {
                delta = std::abs(total - prev_total);
                if (delta <= opts.rel_tol * std::max(std::abs(total), 1e-30)) {
                    prev_total = total;
                    break;
                }
            }
            prev_total = total;
            have_prev = true;
            if (it == opts.max_iters)
                throw NoConvergence(it, delta,
                                    "alternate_minimize: iteration cap reached");
        }
        AltMinResult res{std::move(u), std::move(v), {}, it, false};
        res.energy = at_energy(res.u, res.v, g, mat);
        return res;
    };

    AltMinResult best = run_from(v_prev);
    if (opts.multi_start) {
        if (auto seeded = seed_separating_band(grid, part, v_prev)) {
            AltMinResult alt = run_from(*seeded);
            if (alt.energy.total < best.energy.total) {
                alt.from_seed = true;
                best = std::move(alt);
            }
        }
    }
    return best;
}

namespace {

bool label_on_edge(const Grid2& g, const BoundaryPartition& part, Edge e, Label l) {
    switch (e) {
        case Edge::Bottom:
            for (int i = 0; i < g.nx; ++i)
                if (part.at(g.node_id(i, 0)) == l) return true;
            return false;
        case Edge::Top:
            for (int i = 0; i < g.nx; ++i)
                if (part.at(g.node_id(i, g.ny - 1)) == l) return true;
            return false;
        case Edge::Left:
            for (int j = 0; j < g.ny; ++j)
                if (part.at(g.node_id(0, j)) == l) return true;
            return false;
        case Edge::Right:
            for (int j = 0; j < g.ny; ++j)
                if (part.at(g.node_id(g.nx - 1, j)) == l) return true;
            return false;
    }
    return false;
}

}  // namespace

std::optional<DamageField> seed_separating_band(const Grid2& grid,
                                                const BoundaryPartition& part,
                                                const DamageField& v_prev) {
    const bool u1_bottom = label_on_edge(grid, part, Edge::Bottom, Label::GammaU1);
    const bool u1_top = label_on_edge(grid, part, Edge::Top, Label::GammaU1);
    const bool u2_bottom = label_on_edge(grid, part, Edge::Bottom, Label::GammaU2);
    const bool u2_top = label_on_edge(grid, part, Edge::Top, Label::GammaU2);
    const bool u1_left = label_on_edge(grid, part, Edge::Left, Label::GammaU1);
    const bool u1_right = label_on_edge(grid, part, Edge::Right, Label::GammaU1);
    const bool u2_left = label_on_edge(grid, part, Edge::Left, Label::GammaU2);
    const bool u2_right = label_on_edge(grid, part, Edge::Right, Label::GammaU2);

    DamageField seeded = v_prev;
    if ((u1_bottom && u2_top) || (u2_bottom && u1_top)) {
        const int j0 = (grid.ny - 1) / 2;
        for (int i = 0; i < grid.nx; ++i) {
            seeded(i, j0) = 0.0;
            seeded(i, j0 + 1) = 0.0;
        }
        return seeded;
    }
    if ((u1_left && u2_right) || (u2_left && u1_right)) {
        const int i0 = (grid.nx - 1) / 2;
        for (int j = 0; j < grid.ny; ++j) {
            seeded(i0, j) = 0.0;
            seeded(i0 + 1, j) = 0.0;
        }
        return seeded;
    }
    return std::nullopt;
}

bool damage_separates(const Grid2& grid, const BoundaryPartition& part,
                      const DamageField& v, double threshold) {
    const int cn = grid.cell_count();
    std::vector<char> passable(cn, 0);
    for (int cj = 0; cj < grid.cell_ny(); ++cj)
        for (int ci = 0; ci < grid.cell_nx(); ++ci)
            passable[grid.cell_id(ci, cj)] = v.cell_mean(ci, cj) >= threshold;

    // Cells adjacent to a labeled node.
    auto adjacent_cells = [&](Label want, std::vector<int>& out) {
        for (int j = 0; j < grid.ny; ++j) {
            for (int i = 0; i < grid.nx; ++i) {
                if (part.at(grid.node_id(i, j)) != want) continue;
                for (int dj = -1; dj <= 0; ++dj)
                    for (int di = -1; di <= 0; ++di) {
                        const int ci = i + di, cj = j + dj;
                        if (ci >= 0 && cj >= 0 && ci < grid.cell_nx() &&
                            cj < grid.cell_ny())
                            out.push_back(grid.cell_id(ci, cj));
                    }
            }
        }
    };
    std::vector<int> sources, targets;
    adjacent_cells(Label::GammaU1, sources);
    adjacent_cells(Label::GammaU2, targets);
    if (sources.empty() || targets.empty()) return false;

    std::vector<char> is_target(cn, 0);
    for (int c : targets)
        if (passable[c]) is_target[c] = 1;

    std::vector<char> seen(cn, 0);
    std::deque<int> queue;
    for (int c : sources) {
        if (passable[c] && !seen[c]) {
            seen[c] = 1;
            queue.push_back(c);
        }
    }
    while (!queue.empty()) {
        const int c = queue.front();
        queue.pop_front();
        if (is_target[c]) return false;  // intact path exists
        const int ci = c % grid.cell_nx();
        const int cj = c / grid.cell_nx();
        const int di[4] = {1, -1, 0, 0};
        const int dj[4] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
            const int ni = ci + di[k], nj = cj + dj[k];
            if (ni < 0 || nj < 0 || ni >= grid.cell_nx() || nj >= grid.cell_ny())
                continue;
            const int nc = grid.cell_id(ni, nj);
            if (passable[nc] && !seen[nc]) {
                seen[nc] = 1;
                queue.push_back(nc);
            }
        }
    }
    return true;
}

std::vector<int> crack_cells(const Grid2& grid, const DamageField& v,
                             double threshold) {
    std::vector<int> out;
    for (int cj = 0; cj < grid.cell_ny(); ++cj)
        for (int ci = 0; ci < grid.cell_nx(); ++ci)
            if (v.cell_mean(ci, cj) < threshold) out.push_back(grid.cell_id(ci, cj));
    return out;
}

double crack_set_distance(const Grid2& grid, const DamageField& a,
                          const DamageField& b, double eps, double threshold) {
    require_same_grid(grid, a.grid(), "crack_set_distance");
    require_same_grid(grid, b.grid(), "crack_set_distance");
    if (!(eps > 0)) throw ValidationError("crack_set_distance: eps must be > 0");
    int differing = 0;
    for (int cj = 0; cj < grid.cell_ny(); ++cj)
        for (int ci = 0; ci < grid.cell_nx(); ++ci) {
            const bool in_a = a.cell_mean(ci, cj) < threshold;
            const bool in_b = b.cell_mean(ci, cj) < threshold;
            if (in_a != in_b) ++differing;
        }
    return differing * grid.h * grid.h / (2.0 * eps);
}

}  // namespace emfrac
