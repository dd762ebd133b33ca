#include "emfrac/k2.hpp"

#include <algorithm>
#include <cmath>

namespace { constexpr double kPi = 3.14159265358979323846; }

#include "emfrac/criteria.hpp"

namespace emfrac {

VelocityField::VelocityField(const Grid2& grid, std::vector<double> x,
                             std::vector<double> y)
    : grid_(grid), x_(std::move(x)), y_(std::move(y)) {
    if (static_cast<int>(x_.size()) != grid.node_count() ||
        static_cast<int>(y_.size()) != grid.node_count())
        throw ValidationError("VelocityField: component size mismatch");
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) {
            const int n = grid.node_id(i, j);
            if (!std::isfinite(x_[n]) || !std::isfinite(y_[n]))
                throw NonFiniteValue("VelocityField: non-finite entry");
            if (grid.is_boundary(i, j) && (x_[n] != 0.0 || y_[n] != 0.0))
                throw NonZeroTrace("VelocityField: nonzero value on boundary node");
        }
}

std::vector<char> crack_ray_cell_mask(const Grid2& grid, const CrackRay& ray) {
    std::vector<char> mask(grid.cell_count(), 0);
    const double dx = std::cos(ray.angle);
    const double dy = std::sin(ray.angle);
    // Length until the ray exits the domain box.
    double t_max = std::hypot(grid.lx, grid.ly);
    auto clip = [&](double p, double d, double lo, double hi) {
        if (d > 1e-300) t_max = std::min(t_max, (hi - p) / d);
        else if (d < -1e-300) t_max = std::min(t_max, (lo - p) / d);
    };
    clip(ray.tip[0], dx, 0.0, grid.lx);
    clip(ray.tip[1], dy, 0.0, grid.ly);
    if (t_max <= 0) return mask;

    const double x1 = ray.tip[0] + t_max * dx;
    const double y1 = ray.tip[1] + t_max * dy;
    // Liang-Barsky overlap of the segment against each cell box inflated by
    // h/4: cells merely grazed by the cut carry straddled gradients too, and
    // rays riding exactly on a grid line must mask both adjacent rows.
    const double pad = 0.25 * grid.h;
    auto intersects = [&](double x0c, double y0c) {
        double t0 = 0.0, t1 = 1.0;
        const double sx = x1 - ray.tip[0];
        const double sy = y1 - ray.tip[1];
        auto clip_axis = [&](double p, double q) {
            // p * t <= q
            if (p == 0.0) return q >= 0.0;
            const double r = q / p;
            if (p < 0) {
                if (r > t1) return false;
                t0 = std::max(t0, r);
            } else {
                if (r < t0) return false;
                t1 = std::min(t1, r);
            }
            return true;
        };
        if (!clip_axis(-sx, ray.tip[0] - (x0c - pad))) return false;
        if (!clip_axis(sx, x0c + grid.h + pad - ray.tip[0])) return false;
        if (!clip_axis(-sy, ray.tip[1] - (y0c - pad))) return false;
        if (!clip_axis(sy, y0c + grid.h + pad - ray.tip[1])) return false;
        return t0 <= t1;
    };
    const int ci_lo = std::max(0, static_cast<int>(std::floor(
                                      (std::min(ray.tip[0], x1) - grid.h) / grid.h)));
    const int ci_hi = std::min(grid.cell_nx() - 1,
                               static_cast<int>(std::ceil(
                                   (std::max(ray.tip[0], x1) + grid.h) / grid.h)));
    const int cj_lo = std::max(0, static_cast<int>(std::floor(
                                      (std::min(ray.tip[1], y1) - grid.h) / grid.h)));
    const int cj_hi = std::min(grid.cell_ny() - 1,
                               static_cast<int>(std::ceil(
                                   (std::max(ray.tip[1], y1) + grid.h) / grid.h)));
    for (int cj = cj_lo; cj <= cj_hi; ++cj)
        for (int ci = ci_lo; ci <= ci_hi; ++ci)
            if (intersects(ci * grid.h, cj * grid.h))
                mask[grid.cell_id(ci, cj)] = 1;
    return mask;
}

double k2_volume(const ScalarField& u, const VelocityField& eta,
                 const Material& mat, const std::vector<char>* mask) {
    require_same_grid(u.grid(), eta.grid(), "k2_volume");
    const Grid2& g = u.grid();
    if (mask && static_cast<int>(mask->size()) != g.cell_count())
        throw ValidationError("k2_volume: mask size mismatch");

    const CellVectorField gu = cell_gradient(u);
    const ScalarField ex(g, std::vector<double>(eta.xs()));
    const ScalarField ey(g, std::vector<double>(eta.ys()));
    const CellVectorField gex = cell_gradient(ex);
    const CellVectorField gey = cell_gradient(ey);
    const double h2 = g.h * g.h;

    double total = 0.0;
    for (int c = 0; c < g.cell_count(); ++c) {
        if (mask && (*mask)[c]) continue;
        const double ux = gu.x[c], uy = gu.y[c];
        const double w = mat.mu * (ux * ux + uy * uy);
        const double div_eta = gex.x[c] + gey.y[c];
        // sum_{k,m} u_,k u_,m d(eta_m)/dx_k
        const double quad = ux * (ux * gex.x[c] + uy * gey.x[c]) +
                            uy * (ux * gex.y[c] + uy * gey.y[c]);
        total += (-w * div_eta + 2.0 * mat.mu * quad) * h2;
    }
    return total;
}

void ContourSpec::validate(const Grid2& grid) const {
    if (radii.size() < 2)
        throw ValidationError("ContourSpec: need >= 2 radii for extrapolation");
    for (size_t k = 0; k + 1 < radii.size(); ++k)
        if (!(radii[k] > radii[k + 1]))
            throw ValidationError("ContourSpec: radii must be strictly decreasing");
    if (!(radii.back() > 0)) throw ValidationError("ContourSpec: radii must be > 0");
    if (samples < 8) throw ValidationError("ContourSpec: need >= 8 samples");
    const double margin = grid.h;  // gradient samples need the cell-center hull
    const double r = radii.front();
    if (tip[0] - r < margin || tip[0] + r > grid.lx - margin ||
        tip[1] - r < margin || tip[1] + r > grid.ly - margin)
        throw ContourOutOfDomain("ContourSpec: largest circle leaves the domain");
}

K2ContourResult k2_contour(const ScalarField& u, const std::array<double, 2>& eta_tip,
                           const ContourSpec& spec, const Material& mat,
                           const std::optional<CrackRay>& ray) {
    const Grid2& g = u.grid();
    spec.validate(g);
    const CellVectorField gradients = cell_gradient(u);

    double rdx = 0.0, rdy = 0.0;
    if (ray) {
        rdx = std::cos(ray->angle);
        rdy = std::sin(ray->angle);
    }

    auto gradient_at = [&](double px, double py) {
        if (ray) {
            // Near the cut the straddling-cell gradients are meaningless;
            // sample one cell away on the same side.
            const double relx = px - ray->tip[0];
            const double rely = py - ray->tip[1];
            const double s = relx * rdx + rely * rdy;      // along the cut
            const double d = -relx * rdy + rely * rdx;     // signed offset
            // Clear the whole interpolation stencil of cut-straddling
            // cells: resample two cells away on the sample's side.
            if (s > 0.5 * g.h && std::abs(d) < 2.0 * g.h) {
                const double sgn = d >= 0.0 ? 1.0 : -1.0;
                px = ray->tip[0] + s * rdx - sgn * 2.0 * g.h * rdy;
                py = ray->tip[1] + s * rdy + sgn * 2.0 * g.h * rdx;
            }
        }
        return sample_cell_field(gradients, px, py);
    };

    K2ContourResult out;
    for (double r : spec.radii) {
        const int n = spec.samples;
        const double dth = 2.0 * kPi / n;
        double acc = 0.0;
        for (int m = 0; m < n; ++m) {
            const double th = -kPi + (m + 0.5) * dth;
            const double nux = std::cos(th);
            const double nuy = std::sin(th);
            const double px = spec.tip[0] + r * nux;
            const double py = spec.tip[1] + r * nuy;
            const auto gr = gradient_at(px, py);
            const double w = mat.mu * (gr[0] * gr[0] + gr[1] * gr[1]);
            const double gn = gr[0] * nux + gr[1] * nuy;
            const double ge = gr[0] * eta_tip[0] + gr[1] * eta_tip[1];
            const double eta_nu = eta_tip[0] * nux + eta_tip[1] * nuy;
            acc += (w * eta_nu - 2.0 * mat.mu * gn * ge) * r * dth;
        }
        out.radius.push_back(r);
        out.value.push_back(acc);
    }

    // Least-squares fit value(r) = v0 + c r; report v0.
    const size_t m = out.radius.size();
    double sr = 0, sv = 0, srr = 0, srv = 0;
    for (size_t k = 0; k < m; ++k) {
        sr += out.radius[k];
        sv += out.value[k];
        srr += out.radius[k] * out.radius[k];
        srv += out.radius[k] * out.value[k];
    }
    const double det = m * srr - sr * sr;
    out.extrapolated = (srr * sv - sr * srv) / det;
    return out;
}

GriffithCheck generalized_griffith_check(double k2_value, double area_rate,
                                         double G, double slack) {
    GriffithCheck out;
    out.margin = k2_value - G * area_rate;
    out.satisfied = out.margin >= -slack;
    return out;
}

ScalarField mode_iii_tip_field(double amplitude, const std::array<double, 2>& tip,
                               double propagation_angle, const Grid2& grid) {
    if (tip[0] < 0 || tip[0] > grid.lx || tip[1] < 0 || tip[1] > grid.ly)
        throw TipOutsideDomain("mode_iii_tip_field: tip outside the domain");
    const double cx = std::cos(propagation_angle);
    const double cy = std::sin(propagation_angle);
    ScalarField u(grid, 0.0);
    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            const double relx = grid.x(i) - tip[0];
            const double rely = grid.y(j) - tip[1];
            const double X = relx * cx + rely * cy;    // along propagation
            const double Y = -relx * cy + rely * cx;   // transverse
            const double r = std::hypot(X, Y);
            const double th = std::atan2(Y, X);        // cut at th = +/- pi
            u(i, j) = amplitude * std::sqrt(r) * std::sin(0.5 * th);
        }
    }
    return u;
}

VelocityField plateau_velocity(const Grid2& grid, const std::array<double, 2>& tip,
                               const std::array<double, 2>& direction,
                               double r_inner, double r_outer) {
    if (!(0 < r_inner && r_inner < r_outer))
        throw ValidationError("plateau_velocity: need 0 < r_inner < r_outer");
    const double dist_to_boundary =
        std::min(std::min(tip[0], grid.lx - tip[0]), std::min(tip[1], grid.ly - tip[1]));
    if (!(r_outer < dist_to_boundary))
        throw ValidationError("plateau_velocity: r_outer reaches the boundary");

    std::vector<double> x(grid.node_count(), 0.0), y(grid.node_count(), 0.0);
    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            const double r = std::hypot(grid.x(i) - tip[0], grid.y(j) - tip[1]);
            double psi = 0.0;
            if (r <= r_inner) psi = 1.0;
            else if (r < r_outer)
                psi = 0.5 * (1.0 + std::cos(kPi * (r - r_inner) / (r_outer - r_inner)));
            const int n = grid.node_id(i, j);
            x[n] = direction[0] * psi;
            y[n] = direction[1] * psi;
        }
    }
    return VelocityField(grid, std::move(x), std::move(y));
}

}  // namespace emfrac
