#include "emfrac/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace emfrac {

namespace {

Vec3 mat_vec(const Mat3& m, const Vec3& v) {
    Vec3 out{};
    for (int i = 0; i < 3; ++i)
        out[i] = m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2];
    return out;
}

Vec3 mat_t_vec(const Mat3& m, const Vec3& v) {
    Vec3 out{};
    for (int i = 0; i < 3; ++i)
        out[i] = m[0][i] * v[0] + m[1][i] * v[1] + m[2][i] * v[2];
    return out;
}

double dot(const Vec3& a, const Vec3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

}  // namespace

TensorState::TensorState(const Mat3& sigma_, const Mat3& F_, const Vec3& n_,
                         int dim_)
    : sigma(sigma_), F(F_), n(n_), dim(dim_) {
    if (dim != 2 && dim != 3) throw ValidationError("TensorState: dim must be 2 or 3");
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (!std::isfinite(sigma[i][j]) || !std::isfinite(F[i][j]))
                throw NonFiniteValue("TensorState: non-finite tensor entry");
    if (dim == 2) {
        for (int i = 0; i < 3; ++i)
            if (sigma[2][i] != 0.0 || sigma[i][2] != 0.0 || F[2][i] != 0.0 ||
                F[i][2] != 0.0)
                throw ValidationError("TensorState: 2D state has nonzero 3rd row/col");
        if (n[2] != 0.0)
            throw BadNormal("TensorState: 2D normal has nonzero 3rd component");
    }
    const double len = norm(n);
    if (!(std::abs(len - 1.0) <= 1e-12))
        throw BadNormal("TensorState: normal must be unit length");
    for (double& c : n) c /= len;
}

double la_sup(const TensorState& state) {
    // sup over unit t with t.n = 0 of (sigma n) . (F t) = |P_{n-perp}(F^T sigma n)|.
    const Vec3 traction = mat_vec(state.sigma, state.n);
    const Vec3 c = mat_t_vec(state.F, traction);
    const double along = dot(c, state.n);
    Vec3 proj{};
    for (int i = 0; i < 3; ++i) proj[i] = c[i] - along * state.n[i];
    return norm(proj);
}

double f_infinity(const TensorState& state, double Sigma, double G) {
    if (!(Sigma > 0) || !(G > 0))
        throw ValidationError("f_infinity: Sigma and G must be positive");
    return la_sup(state) >= Sigma ? G : std::numeric_limits<double>::infinity();
}

double f_capped(const TensorState& state, double Sigma, double G, double cap_C) {
    if (!(cap_C > G)) throw ValidationError("f_capped: cap_C must exceed G");
    if (!(Sigma > 0) || !(G > 0))
        throw ValidationError("f_capped: Sigma and G must be positive");
    const double la = la_sup(state);
    if (la >= Sigma) return G;
    return G + (cap_C - G) * (1.0 - la / Sigma);
}

double critical_uniaxial_stress(double E, double Sigma) {
    if (!(E > 0) || !(Sigma > 0))
        throw ValidationError("critical_uniaxial_stress: E and Sigma must be > 0");
    return std::sqrt(2.0 * E * Sigma);
}

double antiplane_la_threshold(double mu, double Sigma) {
    if (!(mu > 0) || !(Sigma > 0))
        throw ValidationError("antiplane_la_threshold: mu and Sigma must be > 0");
    return std::sqrt(2.0 * Sigma / mu);
}

CrackCandidate::CrackCandidate(const std::vector<std::array<double, 2>>& vertices,
                               const std::vector<double>& jumps) {
    if (vertices.size() < 2) throw EmptyCandidate("CrackCandidate: need >= 2 vertices");
    if (jumps.size() != vertices.size() - 1)
        throw ValidationError("CrackCandidate: one jump per segment required");
    for (size_t k = 0; k + 1 < vertices.size(); ++k) {
        Segment s;
        s.a = vertices[k];
        s.b = vertices[k + 1];
        const double dx = s.b[0] - s.a[0];
        const double dy = s.b[1] - s.a[1];
        s.length = std::hypot(dx, dy);
        if (!(s.length > 0))
            throw ValidationError("CrackCandidate: consecutive vertices coincide");
        s.tangent = {dx / s.length, dy / s.length};
        s.normal = {-s.tangent[1], s.tangent[0]};
        s.jump = jumps[k];
        segments.push_back(s);
        total_length += s.length;
    }
}

std::array<double, 2> sample_cell_field(const CellVectorField& f, double x,
                                        double y) {
    const Grid2& g = f.grid;
    const double h = g.h;
    // Cell centers live at ((i+1/2)h, (j+1/2)h), i in 0..nx-2.
    double sx = x / h - 0.5;
    double sy = y / h - 0.5;
    sx = std::clamp(sx, 0.0, static_cast<double>(g.cell_nx() - 1));
    sy = std::clamp(sy, 0.0, static_cast<double>(g.cell_ny() - 1));
    const int i0 = std::min(static_cast<int>(sx), g.cell_nx() - 2);
    const int j0 = std::min(static_cast<int>(sy), g.cell_ny() - 2);
    const double tx = sx - i0;
    const double ty = sy - j0;
    auto lerp = [&](const std::vector<double>& comp) {
        const double c00 = comp[g.cell_id(i0, j0)];
        const double c10 = comp[g.cell_id(i0 + 1, j0)];
        const double c01 = comp[g.cell_id(i0, j0 + 1)];
        const double c11 = comp[g.cell_id(i0 + 1, j0 + 1)];
        return (1 - tx) * (1 - ty) * c00 + tx * (1 - ty) * c10 +
               (1 - tx) * ty * c01 + tx * ty * c11;
    };
    return {lerp(f.x), lerp(f.y)};
}

DaResult da_evaluate(const CrackCandidate& cand, const CellVectorField& sigma,
                     const CellVectorField& grad, double Sigma, double eta_sup) {
    if (cand.segments.empty()) throw EmptyCandidate("da_evaluate: empty candidate");
    if (!sigma.grid.same_as(grad.grid))
        throw GridMismatch("da_evaluate: sigma and gradient grids differ");
    if (eta_sup < 0) throw ValidationError("da_evaluate: eta_sup must be >= 0");
    for (const auto& s : cand.segments)
        if (std::abs(s.jump) > eta_sup + 1e-12 * std::max(1.0, eta_sup))
            throw ValidationError("da_evaluate: segment jump exceeds eta_sup");

    DaResult out;
    for (const auto& s : cand.segments) {
        const double mx = 0.5 * (s.a[0] + s.b[0]);
        const double my = 0.5 * (s.a[1] + s.b[1]);
        const auto sg = sample_cell_field(sigma, mx, my);
        const auto gr = sample_cell_field(grad, mx, my);
        const double traction = sg[0] * s.normal[0] + sg[1] * s.normal[1];
        const double slip = gr[0] * s.tangent[0] + gr[1] * s.tangent[1];
        out.lhs += traction * slip * s.jump * s.length;
    }
    out.rhs = eta_sup * Sigma * cand.total_length;
    out.admissible = out.lhs >= out.rhs;
    out.degenerate = (eta_sup == 0.0);
    return out;
}

SurfaceDensityField surface_density_field(const ScalarField& u,
                                          const DamageField& v,
                                          const Material& mat) {
    require_same_grid(u.grid(), v.grid(), "surface_density_field");
    const Grid2& g = u.grid();
    const CellVectorField grad = cell_gradient(u);
    std::vector<double> dens(static_cast<size_t>(g.cell_count()), mat.G);
    for (int cj = 0; cj < g.cell_ny(); ++cj) {
        for (int ci = 0; ci < g.cell_nx(); ++ci) {
            const int c = g.cell_id(ci, cj);
            if (v.cell_mean(ci, cj) <= 0.5) {
                dens[c] = mat.G;  // existing damage: growing through costs G
                continue;
            }
            const double g2 = grad.x[c] * grad.x[c] + grad.y[c] * grad.y[c];
            const double la = 0.5 * mat.mu * g2;
            dens[c] = la >= mat.Sigma
                          ? mat.G
                          : mat.G + (mat.cap_C - mat.G) * (1.0 - la / mat.Sigma);
        }
    }
    return SurfaceDensityField(g, std::move(dens), mat.G, mat.cap_C);
}

}  // namespace emfrac
