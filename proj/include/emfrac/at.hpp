#ifndef EMFRAC_AT_HPP
#define EMFRAC_AT_HPP

#include <iosfwd>
#include <optional>
#include <vector>

#include "emfrac/elasticity.hpp"
#include "emfrac/grid.hpp"
#include "emfrac/material.hpp"

namespace emfrac {

/// Per-cell surface energy density g(x), clamped to [G, cap_C]. A constant
/// field g = G recovers the plain Griffith surface term.
class SurfaceDensityField {
  public:
    SurfaceDensityField(const Grid2& grid, double value);
    SurfaceDensityField(const Grid2& grid, std::vector<double> values, double G,
                        double cap_C);

    const Grid2& grid() const { return grid_; }
    double at(int ci, int cj) const { return values_[grid_.cell_id(ci, cj)]; }
    const std::vector<double>& values() const { return values_; }

  private:
    Grid2 grid_;
    std::vector<double> values_;
};

struct ATEnergyBreakdown {
    double elastic = 0.0;
    double surface = 0.0;
    double total = 0.0;
    double surface_length_estimate = 0.0;  // surface term with g == 1
};

/// Regularized energy: elastic part as in elastic_energy, surface part
///   sum_cells g_c [ eps |grad v|_c^2 + q_c/(4 eps) ] h^2
/// with q_c the node average of (1-v)^2 over the cell corners.
ATEnergyBreakdown at_energy(const ScalarField& u, const DamageField& v,
                            const SurfaceDensityField& g, const Material& mat);

/// u-half-step: equilibrium at fixed damage (delegates to solve_equilibrium).
ScalarField minimize_u(const Grid2& grid, const BoundaryPartition& part,
                       const DirichletData& bc, const DamageField& v,
                       const Material& mat, double tol = 1e-10,
                       const ScalarField* guess = nullptr);

/// v-half-step: unconstrained linear solve, then pointwise projection
/// v = clamp(min(v_unc, v_bound), 0, 1). `incoming` is the current iterate;
/// when the projected point does not descend (projection is not exact
/// minimization), an exact quadratic line search between `incoming` and the
/// projected point restores descent. Output <= v_bound pointwise, always.
DamageField minimize_v(const ScalarField& u, const DamageField& v_bound,
                       const SurfaceDensityField& g, const Material& mat,
                       double tol = 1e-10, const DamageField* incoming = nullptr);

struct AltMinOptions {
    double rel_tol = 1e-6;
    int max_iters = 200;
    double linear_tol = 1e-10;
    /// Also start from a band seeded along the minimal line separating
    /// GammaU1 from GammaU2 and keep the lower-energy result.
    bool multi_start = false;
    /// Optional per-iteration energy log (CSV: iter,elastic,surface,total).
    std::ostream* iteration_log = nullptr;
};

struct AltMinResult {
    ScalarField u;
    DamageField v;
    ATEnergyBreakdown energy;
    int iterations = 0;
    bool from_seed = false;  // true when the banded start won the comparison
};

/// Alternating u/v minimization at fixed boundary data with irreversibility
/// bound v <= v_prev. Stops when |dE|/max(E,1e-30) <= rel_tol.
AltMinResult alternate_minimize(const Grid2& grid, const BoundaryPartition& part,
                                const DirichletData& bc, const DamageField& v_prev,
                                const SurfaceDensityField& g, const Material& mat,
                                const AltMinOptions& opts = {});

/// Seeds v = 0 on the two node rows (or columns) along the mid separating
/// line between the GammaU1 and GammaU2 edges. Returns nothing when the
/// partition has no opposing Dirichlet edges.
std::optional<DamageField> seed_separating_band(const Grid2& grid,
                                                const BoundaryPartition& part,
                                                const DamageField& v_prev);

/// True when the cells with cell-average damage below `threshold` disconnect
/// every GammaU1-adjacent cell from every GammaU2-adjacent cell.
bool damage_separates(const Grid2& grid, const BoundaryPartition& part,
                      const DamageField& v, double threshold = 0.1);

/// Cells with cell-average damage below the crack-reporting threshold.
std::vector<int> crack_cells(const Grid2& grid, const DamageField& v,
                             double threshold = 0.1);

/// Reporting proxy for the distance between two discrete crack sets: the
/// area of the symmetric difference of the thresholded cell sets divided
/// by 2 eps (the transition width). Purely diagnostic; no energy depends
/// on it.
double crack_set_distance(const Grid2& grid, const DamageField& a,
                          const DamageField& b, double eps,
                          double threshold = 0.1);

}  // namespace emfrac

#endif
