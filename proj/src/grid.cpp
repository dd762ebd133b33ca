#include "emfrac/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace emfrac {

Grid2 build_grid(int nx, int ny, double lx, double ly) {
    if (nx < 3 || ny < 3)
        throw TooSmall("build_grid: need nx,ny >= 3, got " + std::to_string(nx) +
                       "x" + std::to_string(ny));
    if (!(lx > 0.0) || !(ly > 0.0))
        throw ValidationError("build_grid: extents must be positive");
    const double hx = lx / (nx - 1);
    const double hy = ly / (ny - 1);
    if (std::abs(hx - hy) > 1e-12 * hx)
        throw NonSquareCells("build_grid: cell spacings differ, hx=" +
                             std::to_string(hx) + " hy=" + std::to_string(hy));
    Grid2 g;
    g.nx = nx;
    g.ny = ny;
    g.lx = lx;
    g.ly = ly;
    g.h = hx;
    return g;
}

namespace {

int dirichlet_rank(Label l) {
    switch (l) {
        case Label::GammaU1: return 2;
        case Label::GammaU2: return 1;
        default: return 0;
    }
}

}  // namespace

BoundaryPartition partition_boundary(const Grid2& grid, const EdgeSpec& spec) {
    auto require = [](Label l, const char* edge) {
        if (l == Label::Interior)
            throw UnlabeledEdge(std::string("partition_boundary: edge '") + edge +
                                "' has no label");
    };
    require(spec.bottom, "bottom");
    require(spec.top, "top");
    require(spec.left, "left");
    require(spec.right, "right");

    BoundaryPartition part;
    part.label.assign(grid.node_count(), Label::Interior);

    auto assign = [&](int i, int j, Label l) {
        Label& cur = part.label[grid.node_id(i, j)];
        if (cur == Label::Interior) {
            cur = l;
            return;
        }
        // Corner: Dirichlet edges win over traction-free; GammaU1 over GammaU2.
        if (dirichlet_rank(l) > dirichlet_rank(cur)) cur = l;
    };

    for (int i = 0; i < grid.nx; ++i) assign(i, 0, spec.bottom);
    for (int i = 0; i < grid.nx; ++i) assign(i, grid.ny - 1, spec.top);
    for (int j = 0; j < grid.ny; ++j) assign(0, j, spec.left);
    for (int j = 0; j < grid.ny; ++j) assign(grid.nx - 1, j, spec.right);

    for (Label l : part.label) {
        if (l == Label::GammaU1) ++part.count_u1;
        else if (l == Label::GammaU2) ++part.count_u2;
        else if (l == Label::GammaF) ++part.count_f;
    }
    return part;
}

ScalarField::ScalarField(const Grid2& grid, double fill)
    : grid_(grid), values_(static_cast<size_t>(grid.node_count()), fill) {
    if (!std::isfinite(fill)) throw NonFiniteValue("ScalarField: non-finite fill");
}

ScalarField::ScalarField(const Grid2& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (static_cast<int>(values_.size()) != grid.node_count())
        throw ValidationError("ScalarField: value count does not match grid");
    check_finite();
}

void ScalarField::check_finite() const {
    for (double v : values_)
        if (!std::isfinite(v)) throw NonFiniteValue("ScalarField: non-finite entry");
}

double ScalarField::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

DamageField::DamageField(const Grid2& grid, double fill)
    : grid_(grid), values_(static_cast<size_t>(grid.node_count()), fill) {
    if (!(fill >= 0.0 && fill <= 1.0))
        throw OutOfRange("DamageField: fill outside [0,1]");
}

DamageField::DamageField(const Grid2& grid, std::vector<double> values,
                         RangePolicy policy)
    : grid_(grid), values_(std::move(values)) {
    if (static_cast<int>(values_.size()) != grid.node_count())
        throw ValidationError("DamageField: value count does not match grid");
    for (double& v : values_) {
        if (!std::isfinite(v)) throw NonFiniteValue("DamageField: non-finite entry");
        if (v < 0.0 || v > 1.0) {
            if (policy == RangePolicy::Reject)
                throw OutOfRange("DamageField: value outside [0,1]");
            v = std::clamp(v, 0.0, 1.0);
        }
    }
}

double DamageField::cell_mean(int ci, int cj) const {
    return 0.25 * (values_[grid_.node_id(ci, cj)] + values_[grid_.node_id(ci + 1, cj)] +
                   values_[grid_.node_id(ci, cj + 1)] +
                   values_[grid_.node_id(ci + 1, cj + 1)]);
}

CellVectorField cell_gradient(const ScalarField& u) {
    const Grid2& g = u.grid();
    CellVectorField grad(g);
    const double inv2h = 1.0 / (2.0 * g.h);
    for (int cj = 0; cj < g.cell_ny(); ++cj) {
        for (int ci = 0; ci < g.cell_nx(); ++ci) {
            const double u00 = u(ci, cj);
            const double u10 = u(ci + 1, cj);
            const double u01 = u(ci, cj + 1);
            const double u11 = u(ci + 1, cj + 1);
            const int c = g.cell_id(ci, cj);
            grad.x[c] = (u10 + u11 - u00 - u01) * inv2h;
            grad.y[c] = (u01 + u11 - u00 - u10) * inv2h;
        }
    }
    return grad;
}

void require_same_grid(const Grid2& a, const Grid2& b, const char* what) {
    if (!a.same_as(b))
        throw GridMismatch(std::string(what) + ": fields live on different grids");
}

}  // namespace emfrac
