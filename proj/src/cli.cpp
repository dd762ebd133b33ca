#include "emfrac/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "emfrac/config.hpp"
#include "emfrac/criteria.hpp"
#include "emfrac/evolution.hpp"
#include "emfrac/field_io.hpp"
#include "emfrac/k2.hpp"
#include "emfrac/viscous.hpp"

namespace emfrac {

namespace {

std::vector<double> parse_number_list(const std::string& s, const char* what) {
    std::vector<double> out;
    std::istringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw ValidationError(std::string(what) + ": bad number '" + item + "'");
        }
    }
    if (out.empty()) throw ValidationError(std::string(what) + ": empty list");
    return out;
}

Mat3 mat_from_list(const std::vector<double>& v, const char* what) {
    if (v.size() != 9)
        throw ValidationError(std::string(what) + ": expected 9 comma-separated values");
    Mat3 m{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m[i][j] = v[3 * i + j];
    return m;
}

void emit_snapshots(const IncrementTrace& trace, const std::string& dir, int stride) {
    if (stride <= 0) return;
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    for (const StepRecord& r : trace.steps) {
        if (r.k % stride != 0) continue;
        write_field_csv(dir + "/u_" + std::to_string(r.k) + ".csv", r.u);
        write_field_csv(dir + "/v_" + std::to_string(r.k) + ".csv", r.v);
        write_field_vtk(dir + "/v_" + std::to_string(r.k) + ".vtk", r.v, "damage");
    }
}

int cmd_run(const std::string& config_path, const std::string& out_override) {
    ScenarioConfig cfg = parse_scenario(config_path);
    if (!out_override.empty()) cfg.out_dir = out_override;
    if (cfg.model == "viscous") {
        std::cerr << "model.type = viscous: use the `viscous` subcommand\n";
        return 1;
    }
    Scenario scn = scenario_from_config(cfg);
    IncrementTrace trace = run_incremental(scn);

    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    write_trace_csv(cfg.out_dir + "/trace.csv", trace);
    emit_snapshots(trace, cfg.out_dir, cfg.snapshot_stride);

    const int onset = first_separated_step(trace);
    std::cout << "steps " << trace.steps.size() - 1 << "\n";
    std::cout << "final_elastic " << format_double(trace.steps.back().elastic) << "\n";
    std::cout << "final_surface "
              << format_double(trace.steps.back().surface_cumulative) << "\n";
    std::cout << "onset_step " << onset << "\n";
    if (onset >= 0)
        std::cout << "onset_time " << format_double(trace.steps[onset].t) << "\n";
    std::cout << "trace " << cfg.out_dir << "/trace.csv\n";
    return 0;
}

int cmd_strip_test(double a, double L, double mu, double G, double delta, int s,
                   int nx, double T_factor) {
    Material mat;
    mat.mu = mu;
    mat.G = G;
    const double h = a / (nx - 1);
    const int ny = static_cast<int>(std::lround(L / h)) + 1;
    mat.eps = 2.0 * h;
    mat.validate();

    const double t_pred = critical_time_prediction(a, L, mat);

    Scenario scn;
    scn.grid = build_grid(nx, ny, a, L);
    scn.edges = {Label::GammaU1, Label::GammaU2, Label::GammaF, Label::GammaF};
    scn.material = mat;
    scn.T = T_factor * t_pred / delta;
    scn.s = s;
    scn.load = LoadProgram::ramp(delta, scn.T);
    scn.altmin.multi_start = true;

    EvolveOptions opts;
    opts.stop_on_separation = true;
    IncrementTrace trace = run_incremental(scn, opts);
    const int onset = first_separated_step(trace);

    std::cout << "predicted_tc " << format_double(t_pred) << "\n";
    if (onset < 0) {
        std::cout << "measured_onset none (horizon " << format_double(scn.T) << ")\n";
        return 0;
    }
    const double t_onset = trace.steps[onset].t;
    std::cout << "measured_onset_step " << onset << "\n";
    std::cout << "measured_onset_time " << format_double(t_onset) << "\n";
    std::cout << "relative_error " << format_double(t_onset / t_pred - 1.0) << "\n";
    return 0;
}

int cmd_k2(const std::string& field_path, const std::string& tip_str,
           const std::string& radii_str, int samples, double mu,
           const std::string& eta_str, double crack_angle, bool has_crack) {
    ScalarField u = read_field_csv(field_path);
    const auto tip = parse_number_list(tip_str, "--tip");
    if (tip.size() != 2) throw ValidationError("--tip: expected x,y");
    const auto eta = parse_number_list(eta_str, "--eta");
    if (eta.size() != 2) throw ValidationError("--eta: expected x,y");

    ContourSpec spec;
    spec.tip = {tip[0], tip[1]};
    spec.radii = parse_number_list(radii_str, "--radii");
    spec.samples = samples;

    Material mat;
    mat.mu = mu;

    std::optional<CrackRay> ray;
    if (has_crack) ray = CrackRay{{tip[0], tip[1]}, crack_angle};

    const K2ContourResult res = k2_contour(u, {eta[0], eta[1]}, spec, mat, ray);
    std::cout << "r,value\n";
    for (size_t i = 0; i < res.radius.size(); ++i)
        std::cout << format_double(res.radius[i]) << ","
                  << format_double(res.value[i]) << "\n";
    std::cout << "extrapolated," << format_double(res.extrapolated) << "\n";
    return 0;
}

int cmd_criteria(const std::string& sigma_str, const std::string& F_str,
                 const std::string& n_str, int dim, double E, double Sigma, double G,
                 double cap_C, double mu, const std::string& field_path,
                 const std::string& cell_str) {
    if (!field_path.empty()) {
        // Anti-plane state sampled from a displacement field: report the
        // normal-optimized pairing mu |grad u|^2 / 2 of the chosen cell.
        const ScalarField u = read_field_csv(field_path);
        const auto cell = parse_number_list(cell_str.empty() ? "0,0" : cell_str,
                                            "--cell");
        if (cell.size() != 2) throw ValidationError("--cell: expected i,j");
        const int ci = static_cast<int>(cell[0]);
        const int cj = static_cast<int>(cell[1]);
        const Grid2& g = u.grid();
        if (ci < 0 || cj < 0 || ci >= g.cell_nx() || cj >= g.cell_ny())
            throw ValidationError("--cell: outside the cell lattice");
        const CellVectorField grad = cell_gradient(u);
        const int c = g.cell_id(ci, cj);
        const double g2 = grad.x[c] * grad.x[c] + grad.y[c] * grad.y[c];
        const double la = 0.5 * mu * g2;
        std::cout << "la_sup " << format_double(la) << "\n";
        std::cout << "f_inf " << (la >= Sigma ? format_double(G) : "inf") << "\n";
        const double fc =
            la >= Sigma ? G : G + (cap_C - G) * (1.0 - la / Sigma);
        std::cout << "f_C " << format_double(fc) << "\n";
        std::cout << "sigma_cr " << format_double(critical_uniaxial_stress(E, Sigma))
                  << "\n";
        std::cout << "antiplane_threshold "
                  << format_double(antiplane_la_threshold(mu, Sigma)) << "\n";
        return 0;
    }
    const Mat3 sigma = mat_from_list(parse_number_list(sigma_str, "--sigma"), "--sigma");
    const Mat3 F = mat_from_list(parse_number_list(F_str, "--F"), "--F");
    const auto nv = parse_number_list(n_str, "--n");
    if (nv.size() != 3) throw ValidationError("--n: expected 3 components");
    const TensorState state(sigma, F, {nv[0], nv[1], nv[2]}, dim);

    std::cout << "la_sup " << format_double(la_sup(state)) << "\n";
    const double finf = f_infinity(state, Sigma, G);
    std::cout << "f_inf " << (std::isinf(finf) ? "inf" : format_double(finf)) << "\n";
    std::cout << "f_C " << format_double(f_capped(state, Sigma, G, cap_C)) << "\n";
    std::cout << "sigma_cr " << format_double(critical_uniaxial_stress(E, Sigma))
              << "\n";
    std::cout << "antiplane_threshold "
              << format_double(antiplane_la_threshold(mu, Sigma)) << "\n";
    return 0;
}

int cmd_viscous(const std::string& config_path, const std::string& out_override) {
    ScenarioConfig cfg = parse_scenario(config_path);
    if (!out_override.empty()) cfg.out_dir = out_override;
    if (cfg.model != "viscous") {
        std::cerr << "viscous subcommand requires model.type = viscous\n";
        return 1;
    }
    Scenario scn = scenario_from_config(cfg);
    const BoundaryPartition part = partition_boundary(scn.grid, scn.edges);
    const DirichletData bc(part, scn.load.value_u1(1.0), scn.load.value_u2(1.0));

    ScalarField u0(scn.grid, 0.0);
    if (cfg.viscous_init == "equilibrium") {
        const DamageField intact(scn.grid, 1.0);
        u0 = solve_equilibrium(scn.grid, part, bc, intact, scn.material);
    } else {
        for (int n = 0; n < scn.grid.node_count(); ++n)
            if (part.is_dirichlet(n)) u0[n] = bc.at(n);
    }

    ViscousTrace trace = run_viscous(u0, scn.s, scn.lambda, scn.T, scn.material);

    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    std::ofstream os(cfg.out_dir + "/trace.csv");
    if (!os) throw IoError("cannot open trace output");
    os << "k,t,elastic,surface,total,work,griffith_ok,penalty\n";
    for (const ViscousStep& st : trace.steps)
        os << st.k << "," << format_double(static_cast<double>(st.k) / scn.s) << ","
           << format_double(st.elastic) << "," << format_double(st.surface) << ","
           << format_double(st.total) << ",0,1," << format_double(st.penalty) << "\n";

    const HolderEstimate he = holder_estimate_check(trace, scn.s, scn.lambda);
    std::cout << "steps " << trace.steps.size() - 1 << "\n";
    std::cout << "M_fit " << format_double(he.M_fit) << "\n";
    std::cout << "trace " << cfg.out_dir << "/trace.csv\n";
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"quasi-static brittle fracture simulator"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    auto* run = app.add_subcommand("run", "run an incremental evolution scenario");
    run->add_option("--config", config_path, "scenario config file")->required();
    run->add_option("--out", out_dir, "output directory override");

    double a = 1.0, L = 1.0, mu = 1.0, G = 1.0, delta = 1.0, T_factor = 1.6;
    int s = 50, nx = 65;
    auto* strip = app.add_subcommand(
        "strip-test", "homogeneous strip ramp: predicted vs measured onset");
    strip->add_option("--a", a, "strip width");
    strip->add_option("--L", L, "strip height");
    strip->add_option("--mu", mu, "shear modulus");
    strip->add_option("--G", G, "surface energy per unit length");
    strip->add_option("--delta", delta, "loading rate");
    strip->add_option("--s", s, "steps per unit time");
    strip->add_option("--nx", nx, "nodes across the width");
    strip->add_option("--T-factor", T_factor, "horizon as multiple of predicted tc");

    std::string field_path, tip_str, radii_str, eta_str = "1,0";
    int samples = 256;
    double k2_mu = 1.0, crack_angle = 0.0;
    bool has_crack = false;
    auto* k2cmd = app.add_subcommand("k2", "contour energy-release integral");
    k2cmd->add_option("--field", field_path, "displacement field CSV")->required();
    k2cmd->add_option("--tip", tip_str, "tip position x,y")->required();
    k2cmd->add_option("--radii", radii_str, "decreasing radii r1,r2,...")->required();
    k2cmd->add_option("--samples", samples, "samples per circle");
    k2cmd->add_option("--mu", k2_mu, "shear modulus");
    k2cmd->add_option("--eta", eta_str, "tip velocity direction x,y");
    auto* ca = k2cmd->add_option("--crack-angle", crack_angle,
                                 "direction of the cut ray leaving the tip (rad)");
    k2cmd->callback([&] { has_crack = ca->count() > 0; });

    std::string sigma_str, F_str, n_str, crit_field, crit_cell;
    int dim = 3;
    double E = 1.0, Sigma = 1.0, crit_G = 1.0, cap_C = 100.0, crit_mu = 1.0;
    auto* crit = app.add_subcommand("criteria", "pointwise crack-appearance values");
    crit->add_option("--sigma", sigma_str, "stress, 9 values row-major");
    crit->add_option("--F", F_str, "displacement gradient, 9 values");
    crit->add_option("--n", n_str, "candidate normal, 3 values");
    crit->add_option("--field", crit_field, "displacement field CSV (anti-plane mode)");
    crit->add_option("--cell", crit_cell, "cell index i,j for --field");
    crit->add_option("--dim", dim, "2 or 3");
    crit->add_option("--E", E, "Young modulus");
    crit->add_option("--Sigma", Sigma, "threshold");
    crit->add_option("--G", crit_G, "surface energy constant");
    crit->add_option("--cap-C", cap_C, "finite density cap");
    crit->add_option("--mu", crit_mu, "shear modulus");

    std::string vis_config, vis_out;
    auto* vis = app.add_subcommand("viscous", "penalized movement from an initial field");
    vis->add_option("--config", vis_config, "scenario config file")->required();
    vis->add_option("--out", vis_out, "output directory override");

    auto* ver = app.add_subcommand("version", "print version");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (ver->parsed()) {
            std::cout << kVersion << "\n";
            return 0;
        }
        if (run->parsed()) return cmd_run(config_path, out_dir);
        if (strip->parsed())
            return cmd_strip_test(a, L, mu, G, delta, s, nx, T_factor);
        if (k2cmd->parsed())
            return cmd_k2(field_path, tip_str, radii_str, samples, k2_mu, eta_str,
                          crack_angle, has_crack);
        if (crit->parsed()) {
            if (crit_field.empty() &&
                (sigma_str.empty() || F_str.empty() || n_str.empty())) {
                std::cerr << "criteria: provide --sigma/--F/--n or --field\n";
                return 1;
            }
            return cmd_criteria(sigma_str, F_str, n_str, dim, E, Sigma, crit_G, cap_C,
                                crit_mu, crit_field, crit_cell);
        }
        if (vis->parsed()) return cmd_viscous(vis_config, vis_out);
    } catch (const SolverError& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace emfrac
