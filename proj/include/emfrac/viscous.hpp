#ifndef EMFRAC_VISCOUS_HPP
#define EMFRAC_VISCOUS_HPP

#include <optional>
#include <vector>

#include "emfrac/at.hpp"
#include "emfrac/grid.hpp"
#include "emfrac/material.hpp"

namespace emfrac {

struct ViscousStep {
    int k = 0;
    ScalarField u;
    DamageField v;
    double elastic = 0.0;
    double surface = 0.0;
    double total = 0.0;
    double penalty = 0.0;  // lambda * s * ||u_k - u_{k-1}||_L2^2
};

struct ViscousTrace {
    std::vector<ViscousStep> steps;  // steps[0] is the initial state
    double u0_sup = 0.0;             // enforced sup bound |u| <= u0_sup
    double lambda = 1.0;
    int s = 1;
};

/// Lumped L2 inner product (cells spread h^2/4 onto their corners).
double lumped_l2_sq(const ScalarField& a, const ScalarField& b);

/// Lumped squared L2 norm of the difference a - b.
double lumped_l2_sq_diff(const ScalarField& a, const ScalarField& b);

/// One implicit step of the viscous movement: alternating minimization of
///   elastic(u,v) + G-surface(v) + lambda*s*||u - u_prev||_L2^2
/// at fixed boundary values (the trace of the initial datum on the whole
/// boundary), with irreversibility v <= v_prev and the sup-norm box
/// |u| <= u0_sup enforced by projection after each u-subproblem.
struct ViscousStepResult {
    ScalarField u;
    DamageField v;
    int iterations = 0;
};

ViscousStepResult viscous_step(const ScalarField& u_prev, const DamageField& v_prev,
                               const BoundaryPartition& part,
                               const DirichletData& bc, double u0_sup, int s,
                               double lambda, const Material& mat,
                               const AltMinOptions& opts = {});

/// Recursion from an initial field under constant boundary displacement
/// (the initial field's own boundary values, imposed on the full boundary).
/// ceil(s*T) steps; T = 0 yields the initial state only.
ViscousTrace run_viscous(const ScalarField& u0, int s, double lambda, double T,
                         const Material& mat,
                         const std::optional<DamageField>& v0 = std::nullopt,
                         const AltMinOptions& opts = {});

struct HolderEstimate {
    double M_fit = 0.0;
    /// Pairs (i, j) whose increment exceeds M_user * sqrt(dt + 1/(lambda s)).
    std::vector<std::pair<int, int>> violations;
};

/// Fits the smallest M with ||u(t') - u(t)||_2 <= M sqrt(t' - t + 1/(lambda s))
/// over all step pairs; lists violations of a caller-supplied M when given.
HolderEstimate holder_estimate_check(const ViscousTrace& trace, int s, double lambda,
                                     std::optional<double> M_user = std::nullopt);

/// Boundary partition for the viscous problem: the entire boundary is
/// Dirichlet (GammaU1).
BoundaryPartition all_dirichlet_partition(const Grid2& grid);

}  // namespace emfrac

#endif
