#ifndef EMFRAC_CRITERIA_HPP
#define EMFRAC_CRITERIA_HPP

#include <array>
#include <vector>

#include "emfrac/at.hpp"
#include "emfrac/grid.hpp"
#include "emfrac/material.hpp"

namespace emfrac {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

/// Pointwise state (stress, displacement gradient, candidate crack normal)
/// for the stress-gated crack-appearance criteria. 2D states occupy the
/// upper-left block; the third row/column must be zero and the normal's
/// third component zero.
struct TensorState {
    Mat3 sigma{};  // stress
    Mat3 F{};      // displacement gradient
    Vec3 n{};      // candidate crack normal (normalized on construction)
    int dim = 3;

    TensorState(const Mat3& sigma, const Mat3& F, const Vec3& n, int dim);
};

/// sup over unit tangents t (t . n = 0) of (sigma n) . (F t): the pairing
/// between the traction on a plane with normal n and tangential slip
/// directions. Closed form: |P_{n-perp}(F^T sigma n)|.
double la_sup(const TensorState& state);

/// Gated density: G when la_sup >= Sigma (inclusive), +infinity otherwise.
double f_infinity(const TensorState& state, double Sigma, double G);

/// Capped density: G on the admissible cone, linear surcharge up to cap_C
/// below the threshold: G + (cap_C - G) * (1 - la_sup/Sigma).
double f_capped(const TensorState& state, double Sigma, double G, double cap_C);

/// Critical stress for uniaxial traction: sqrt(2 E Sigma). The maximizing
/// crack normal makes the angle pi/4 with the loading axis.
double critical_uniaxial_stress(double E, double Sigma);

/// |grad u| above which some in-plane normal admits a crack in the
/// anti-plane reduction: sqrt(2 Sigma / mu) (the reduced pairing maxes out
/// at mu |grad u|^2 / 2 over normals at 45 degrees to the gradient).
double antiplane_la_threshold(double mu, double Sigma);

/// Polyline crack candidate with per-segment unit normals and tangential
/// jump magnitudes (the jump is tangential by construction, so a signed
/// scalar per segment suffices).
struct CrackCandidate {
    struct Segment {
        std::array<double, 2> a;  // endpoints
        std::array<double, 2> b;
        std::array<double, 2> normal;   // unit
        std::array<double, 2> tangent;  // unit, from a to b
        double jump = 0.0;              // tangential jump magnitude (signed)
        double length = 0.0;
    };
    std::vector<Segment> segments;
    double total_length = 0.0;

    CrackCandidate(const std::vector<std::array<double, 2>>& vertices,
                   const std::vector<double>& jumps);
};

struct DaResult {
    double lhs = 0.0;
    double rhs = 0.0;
    bool admissible = false;
    bool degenerate = false;  // zero jumps with zero bound
};

/// Curve-level criterion: integrate (sigma n).(grad-u tangent-slip) jumps
/// against the threshold Sigma times curve length. Fields are per-cell
/// 2-vectors sampled at segment midpoints by bilinear interpolation of the
/// cell-center lattice.
DaResult da_evaluate(const CrackCandidate& cand, const CellVectorField& sigma,
                     const CellVectorField& grad, double Sigma, double eta_sup);

/// Bilinear interpolation of a per-cell 2-vector field at a physical point,
/// over the lattice of cell centers (clamped at the hull boundary).
std::array<double, 2> sample_cell_field(const CellVectorField& f, double x,
                                        double y);

/// Per-cell gated density for the improved evolution model: cells with
/// cell-average damage above 0.5 get f_capped evaluated at the normal-
/// optimized anti-plane pairing mu |grad u|^2 / 2 of the raw gradient;
/// cells at or below 0.5 keep G (growing through existing damage costs G).
SurfaceDensityField surface_density_field(const ScalarField& u,
                                          const DamageField& v,
                                          const Material& mat);

}  // namespace emfrac

#endif
