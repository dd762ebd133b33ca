#include "emfrac/material.hpp"

#include <cmath>

namespace emfrac {

DirichletData::DirichletData(const BoundaryPartition& part, double value_u1,
                             double value_u2)
    : part_(&part), values_(part.label.size(), 0.0) {
    if (!std::isfinite(value_u1) || !std::isfinite(value_u2))
        throw NonFiniteValue("DirichletData: non-finite boundary value");
    for (size_t n = 0; n < values_.size(); ++n) {
        if (part.label[n] == Label::GammaU1) values_[n] = value_u1;
        else if (part.label[n] == Label::GammaU2) values_[n] = value_u2;
    }
}

DirichletData::DirichletData(const BoundaryPartition& part, std::vector<double> nodal)
    : part_(&part), values_(std::move(nodal)) {
    if (values_.size() != part.label.size())
        throw ValidationError("DirichletData: nodal size does not match partition");
    for (size_t n = 0; n < values_.size(); ++n) {
        if (part.label[n] == Label::GammaU1 || part.label[n] == Label::GammaU2) {
            if (!std::isfinite(values_[n]))
                throw NonFiniteValue("DirichletData: non-finite boundary value");
        } else {
            values_[n] = 0.0;
        }
    }
}

DirichletData DirichletData::scaled(double factor) const {
    DirichletData out = *this;
    for (double& v : out.values_) v *= factor;
    return out;
}

}  // namespace emfrac
