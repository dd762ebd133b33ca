#include "emfrac/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "emfrac/field_io.hpp"

namespace emfrac {

namespace {

double interp(const std::vector<std::pair<double, double>>& pts, double t) {
    if (pts.empty()) return 0.0;
    if (t <= pts.front().first) return pts.front().second;
    if (t >= pts.back().first) return pts.back().second;
    for (size_t k = 0; k + 1 < pts.size(); ++k) {
        if (t <= pts[k + 1].first) {
            const double t0 = pts[k].first, t1 = pts[k + 1].first;
            const double v0 = pts[k].second, v1 = pts[k + 1].second;
            const double w = (t - t0) / (t1 - t0);
            return (1.0 - w) * v0 + w * v1;
        }
    }
    return pts.back().second;
}

}  // namespace

double LoadProgram::value_u1(double t) const { return interp(u1, t); }
double LoadProgram::value_u2(double t) const { return interp(u2, t); }

LoadProgram LoadProgram::ramp(double delta, double T) {
    LoadProgram p;
    p.u1 = {{0.0, 0.0}, {T, 0.0}};
    p.u2 = {{0.0, 0.0}, {T, delta * T}};
    return p;
}

void Scenario::validate() const {
    material.validate();
    if (!(T > 0)) throw ValidationError("Scenario: time horizon T must be > 0");
    if (s < 1) throw ValidationError("Scenario: steps per unit time must be >= 1");
    if (load.u1.empty() || load.u2.empty())
        throw ValidationError("Scenario: load program must cover both labels");
    if (load.u1.back().first < T || load.u2.back().first < T)
        throw ValidationError("Scenario: load program must cover [0, T]");
}

IncrementTrace run_incremental(const Scenario& scn, const EvolveOptions& opts) {
    scn.validate();
    if (scn.model == Model::Viscous)
        throw ValidationError("run_incremental: use run_viscous for the viscous model");

    IncrementTrace trace;
    trace.scenario = scn;
    trace.partition = partition_boundary(scn.grid, scn.edges);
    const Grid2& grid = scn.grid;
    const BoundaryPartition& part = trace.partition;
    const Material& mat = scn.material;

    DamageField v_prev(grid, 1.0);
    const DirichletData bc0(part, scn.load.value_u1(0.0), scn.load.value_u2(0.0));
    ScalarField u_prev =
        solve_equilibrium(grid, part, bc0, v_prev, mat, scn.altmin.linear_tol);

    StepRecord init{0, 0.0, u_prev, v_prev, elastic_energy(u_prev, v_prev, mat),
                    0.0, 0.0, 0.0, 0.0, true, false, false};
    init.separated = damage_separates(grid, part, v_prev);
    trace.steps.push_back(init);

    const int n_steps = static_cast<int>(std::lround(scn.T * scn.s));
    int separated_at = -1;
    for (int k = 1; k <= n_steps; ++k) {
        const double t = static_cast<double>(k) / scn.s;
        const DirichletData bc(part, scn.load.value_u1(t), scn.load.value_u2(t));

        SurfaceDensityField g =
            scn.model == Model::ImprovedModel
                ? surface_density_field(u_prev, v_prev, mat)
                : SurfaceDensityField(grid, mat.G);

        // Equilibrium at the new load on the old damage: the no-growth
        // competitor, and the boundary-work increment of this step.
        const ScalarField u_star = solve_equilibrium(grid, part, bc, v_prev, mat,
                                                     scn.altmin.linear_tol, &u_prev);
        const double elastic_old = elastic_energy(u_star, v_prev, mat);
        const double work_inc = elastic_old - trace.steps.back().elastic;

        AltMinResult res = alternate_minimize(grid, part, bc, v_prev, g, mat,
                                              scn.altmin);

        const double surface_prev = at_energy(res.u, v_prev, g, mat).surface;
        const double surface_inc = res.energy.surface - surface_prev;

        StepRecord rec{k,
                       t,
                       res.u,
                       res.v,
                       res.energy.elastic,
                       surface_inc,
                       trace.steps.back().surface_cumulative + surface_inc,
                       work_inc,
                       work_inc * scn.s,
                       true,
                       false,
                       res.from_seed};
        const double slack =
            1e-6 * (rec.elastic + rec.surface_cumulative + mat.G * grid.lx);
        rec.griffith_ok = elastic_old >= rec.elastic + surface_inc - slack;
        rec.separated = damage_separates(grid, part, rec.v);

        u_prev = rec.u;
        v_prev = rec.v;
        if (opts.observer) opts.observer(rec);
        trace.steps.push_back(std::move(rec));

        if (opts.stop_on_separation && trace.steps.back().separated) {
            if (separated_at < 0) separated_at = k;
            if (k - separated_at >= opts.extra_steps_after_separation) break;
        }
    }
    return trace;
}

double IncrementTrace::ledger_slack(int k) const {
    const StepRecord& r = steps.at(k);
    return 1e-6 * (r.elastic + r.surface_cumulative +
                   scenario.material.G * scenario.grid.lx);
}

namespace {

template <typename SlackAt>
std::vector<LedgerVerdict> ledger_audit(const IncrementTrace& trace,
                                        SlackAt&& slack_at) {
    std::vector<LedgerVerdict> out;
    const Grid2& grid = trace.scenario.grid;
    const BoundaryPartition& part = trace.partition;
    const Material& mat = trace.scenario.material;
    for (size_t k = 1; k < trace.steps.size(); ++k) {
        const StepRecord& prev = trace.steps[k - 1];
        const StepRecord& cur = trace.steps[k];
        const DirichletData bc(part, trace.scenario.load.value_u1(cur.t),
                               trace.scenario.load.value_u2(cur.t));
        const ScalarField u_star =
            solve_equilibrium(grid, part, bc, prev.v, mat, 1e-10, &prev.u);
        LedgerVerdict v;
        v.k = cur.k;
        v.lhs = elastic_energy(u_star, prev.v, mat);
        v.rhs = cur.elastic + cur.surface_increment - slack_at(k);
        v.ok = v.lhs >= v.rhs;
        v.power = v.lhs - prev.elastic;
        out.push_back(v);
    }
    return out;
}

}  // namespace

std::vector<LedgerVerdict> griffith_ledger_check(const IncrementTrace& trace,
                                                 double slack) {
    return ledger_audit(trace, [&](size_t) { return slack; });
}

std::vector<LedgerVerdict> griffith_ledger_check(const IncrementTrace& trace) {
    return ledger_audit(trace, [&](size_t k) {
        return trace.ledger_slack(static_cast<int>(k));
    });
}

PowerBound power_bound_check(const IncrementTrace& trace, int s, double slack) {
    PowerBound out;
    double max_work = 0.0;
    for (size_t k = 1; k < trace.steps.size(); ++k)
        max_work = std::max(max_work, trace.steps[k].work_increment);
    out.P_est = s * max_work;
    out.bound_ok = true;
    for (const StepRecord& r : trace.steps) {
        const double total = r.elastic + r.surface_cumulative;
        out.totals.push_back(total);
        if (total > out.P_est * r.t + slack) out.bound_ok = false;
    }
    return out;
}

double critical_time_prediction(double a, double L, const Material& mat) {
    (void)a;
    if (!(L > 0)) throw ValidationError("critical_time_prediction: L must be > 0");
    return std::sqrt(mat.G * L / mat.mu);
}

int first_separated_step(const IncrementTrace& trace, double threshold) {
    for (const StepRecord& r : trace.steps) {
        if (damage_separates(trace.scenario.grid, trace.partition, r.v, threshold))
            return r.k;
    }
    return -1;
}

void write_trace_csv(const std::string& path, const IncrementTrace& trace) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open " + path + " for writing");
    os << "k,t,elastic,surface,total,work,griffith_ok\n";
    double work_cum = 0.0;
    for (const StepRecord& r : trace.steps) {
        work_cum += r.work_increment;
        os << r.k << "," << format_double(r.t) << "," << format_double(r.elastic)
           << "," << format_double(r.surface_cumulative) << ","
           << format_double(r.elastic + r.surface_cumulative) << ","
           << format_double(work_cum) << "," << (r.griffith_ok ? 1 : 0) << "\n";
    }
}

}  // namespace emfrac
