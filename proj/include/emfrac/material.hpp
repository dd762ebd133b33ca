#ifndef EMFRAC_MATERIAL_HPP
#define EMFRAC_MATERIAL_HPP

#include <vector>

#include "emfrac/errors.hpp"
#include "emfrac/grid.hpp"

namespace emfrac {

/// Material parameters. The anti-plane elastic energy density is mu*|grad u|^2
/// (no 1/2 factor); all closed-form expressions in this code base follow that
/// convention. E enters only the pointwise tensor criteria. G is the energy
/// per unit crack length, Sigma the stress-power threshold of the gated
/// surface density, cap_C its finite ceiling, eps the regularization length
/// and k_eps the residual stiffness of fully damaged cells.
struct Material {
    double mu = 1.0;
    double E = 1.0;
    double G = 1.0;
    double Sigma = 1.0;
    double cap_C = 100.0;
    double eps = 0.05;
    double k_eps = 1e-6;

    void validate() const {
        if (!(mu > 0)) throw ValidationError("Material: mu must be > 0");
        if (!(E > 0)) throw ValidationError("Material: E must be > 0");
        if (!(G > 0)) throw ValidationError("Material: G must be > 0");
        if (!(Sigma > 0)) throw ValidationError("Material: Sigma must be > 0");
        if (!(cap_C > G)) throw ValidationError("Material: cap_C must exceed G");
        if (!(eps > 0)) throw ValidationError("Material: eps must be > 0");
        if (!(k_eps > 0 && k_eps <= 1e-3))
            throw ValidationError("Material: k_eps must lie in (0, 1e-3]");
    }
};

/// Imposed displacement on the Dirichlet part of the boundary: one value per
/// GammaU1 node and one per GammaU2 node. Values are stored per node id.
class DirichletData {
  public:
    DirichletData(const BoundaryPartition& part, double value_u1, double value_u2);

    /// Per-node arbitrary values; only entries at Dirichlet nodes are used.
    DirichletData(const BoundaryPartition& part, std::vector<double> nodal);

    double at(int node) const { return values_[node]; }
    const std::vector<double>& values() const { return values_; }
    const BoundaryPartition& partition() const { return *part_; }

    DirichletData scaled(double factor) const;

  private:
    const BoundaryPartition* part_;
    std::vector<double> values_;
};

}  // namespace emfrac

#endif
