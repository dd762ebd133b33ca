#ifndef EMFRAC_K2_HPP
#define EMFRAC_K2_HPP

#include <array>
#include <optional>
#include <vector>

#include "emfrac/grid.hpp"
#include "emfrac/material.hpp"

namespace emfrac {

/// Nodal crack-velocity field with null trace: every boundary node must be
/// exactly zero (construction rejects violations).
class VelocityField {
  public:
    VelocityField(const Grid2& grid, std::vector<double> x, std::vector<double> y);

    const Grid2& grid() const { return grid_; }
    double x(int i, int j) const { return x_[grid_.node_id(i, j)]; }
    double y(int i, int j) const { return y_[grid_.node_id(i, j)]; }
    const std::vector<double>& xs() const { return x_; }
    const std::vector<double>& ys() const { return y_; }

  private:
    Grid2 grid_;
    std::vector<double> x_, y_;
};

/// Straight crack ray used to mask cells whose bilinear gradients straddle a
/// displacement jump. `angle` is the direction of the cut ray leaving `tip`.
struct CrackRay {
    std::array<double, 2> tip{};
    double angle = 0.0;  // radians; the cut extends from tip along this direction
};

/// Cells whose closed square intersects the ray from `tip` to the domain
/// boundary. Bilinear gradients in these cells are meaningless when the
/// field jumps across the cut.
std::vector<char> crack_ray_cell_mask(const Grid2& grid, const CrackRay& ray);

/// Volume (Eshelby) form of the configurational energy-release functional
/// for the anti-plane convention w = mu |grad u|^2, sigma = 2 mu grad u:
///   K2 = sum_cells [ -w div eta + 2 mu (grad u)^T (grad eta) (grad u) ] h^2.
/// `mask`, when given, excludes cells crossed by a displacement jump; the
/// continuum contribution of a traction-free cut with tangential eta is zero,
/// so exclusion converges at O(h). Positive values mean energy release.
double k2_volume(const ScalarField& u, const VelocityField& eta,
                 const Material& mat, const std::vector<char>* mask = nullptr);

struct ContourSpec {
    std::array<double, 2> tip{};
    std::vector<double> radii;  // strictly decreasing, >= 2 entries
    int samples = 256;

    void validate(const Grid2& grid) const;
};

struct K2ContourResult {
    std::vector<double> radius;
    std::vector<double> value;
    double extrapolated = 0.0;  // least-squares linear-in-r fit at r = 0
};

/// Contour form on circles around the tip, with nu the outward normal seen
/// from the tip: integrand w (eta.nu) - 2 mu (grad u . nu)(grad u . eta).
/// Positive values mean energy release for eta along the propagation
/// direction. Gradient samples whose cell is crossed by `ray` are taken a
/// cell away from the cut, on the sample's side.
K2ContourResult k2_contour(const ScalarField& u, const std::array<double, 2>& eta_tip,
                           const ContourSpec& spec, const Material& mat,
                           const std::optional<CrackRay>& ray = std::nullopt);

struct GriffithCheck {
    bool satisfied = false;
    double margin = 0.0;  // k2_value - G * area_rate
};

/// Propagation admissibility: k2_value >= G * area_rate - slack.
GriffithCheck generalized_griffith_check(double k2_value, double area_rate,
                                         double G, double slack = 0.0);

/// Analytic anti-plane tip field u = amplitude * sqrt(r) * sin(theta/2) in
/// crack-aligned polar coordinates. `propagation_angle` is the direction the
/// crack would grow; the cut lies along the opposite ray. Nodes exactly on
/// the cut take the upper-face value.
ScalarField mode_iii_tip_field(double amplitude, const std::array<double, 2>& tip,
                               double propagation_angle, const Grid2& grid);

/// Nodal plateau velocity: eta = direction * psi(r) with psi = 1 inside
/// r_inner, cosine-tapered to 0 at r_outer. r_outer must stay strictly
/// inside the domain so the null-trace requirement holds.
VelocityField plateau_velocity(const Grid2& grid, const std::array<double, 2>& tip,
                               const std::array<double, 2>& direction,
                               double r_inner, double r_outer);

}  // namespace emfrac

#endif
