#include "emfrac/config.hpp"

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "emfrac/field_io.hpp"

namespace emfrac {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

struct KeyMap {
    std::map<std::string, std::string> kv;

    bool has(const std::string& k) const { return kv.count(k) != 0; }

    std::string str(const std::string& k) {
        auto it = kv.find(k);
        if (it == kv.end()) throw MissingKey(k);
        return it->second;
    }
    std::string str_or(const std::string& k, const std::string& d) {
        auto it = kv.find(k);
        return it == kv.end() ? d : it->second;
    }
    double num(const std::string& k) {
        const std::string v = str(k);
        try {
            size_t pos = 0;
            const double x = std::stod(v, &pos);
            if (pos != v.size()) throw std::invalid_argument(v);
            return x;
        } catch (const std::exception&) {
            throw BadValue(k, "not a number: '" + v + "'");
        }
    }
    double num_or(const std::string& k, double d) { return has(k) ? num(k) : d; }
    int integer(const std::string& k) {
        const double x = num(k);
        const int i = static_cast<int>(x);
        if (static_cast<double>(i) != x) throw BadValue(k, "not an integer");
        return i;
    }
    int integer_or(const std::string& k, int d) { return has(k) ? integer(k) : d; }
    bool flag_or(const std::string& k, bool d) {
        if (!has(k)) return d;
        const std::string v = str(k);
        if (v == "true" || v == "1" || v == "on") return true;
        if (v == "false" || v == "0" || v == "off") return false;
        throw BadValue(k, "expected true/false");
    }
};

}  // namespace

Label label_from_string(const std::string& s, const std::string& key) {
    if (s == "u1") return Label::GammaU1;
    if (s == "u2") return Label::GammaU2;
    if (s == "free" || s == "f") return Label::GammaF;
    throw BadValue(key, "expected u1, u2 or free; got '" + s + "'");
}

ScenarioConfig parse_scenario_stream(std::istream& is) {
    KeyMap m;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw BadValue("line " + std::to_string(lineno), "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty()) throw BadValue("line " + std::to_string(lineno), "empty key");
        m.kv[key] = val;
    }

    ScenarioConfig cfg;
    cfg.nx = m.integer("grid.nx");
    cfg.ny = m.integer("grid.ny");
    cfg.lx = m.num("grid.lx");
    cfg.ly = m.num("grid.ly");
    cfg.bottom = m.str_or("boundary.bottom", "u1");
    cfg.top = m.str_or("boundary.top", "u2");
    cfg.left = m.str_or("boundary.left", "free");
    cfg.right = m.str_or("boundary.right", "free");
    cfg.mu = m.num("material.mu");
    cfg.G = m.num("material.G");
    cfg.E = m.num_or("material.E", 1.0);
    cfg.model = m.str_or("model.type", "first");
    if (cfg.model != "first" && cfg.model != "improved" && cfg.model != "viscous")
        throw BadValue("model.type", "expected first, improved or viscous");
    if (cfg.model == "improved") cfg.Sigma = m.num("material.Sigma");
    else cfg.Sigma = m.num_or("material.Sigma", 1.0);
    cfg.cap_C = m.num_or("material.cap_C", 100.0 * cfg.G);
    const double h = cfg.nx > 1 ? cfg.lx / (cfg.nx - 1) : 0.0;
    cfg.eps = m.num_or("material.eps", 2.0 * h);
    cfg.k_eps = m.num_or("material.k_eps", 1e-6);
    cfg.delta = m.num("load.delta");
    cfg.T = m.num("load.T");
    cfg.s = m.integer("load.s");
    cfg.lambda = m.num_or("model.lambda", 1.0);
    cfg.multi_start = m.flag_or("model.multi_start", true);
    cfg.out_dir = m.str_or("output.dir", "out");
    cfg.snapshot_stride = m.integer_or("output.snapshot_stride", 0);
    cfg.viscous_init = m.str_or("viscous.init", "zero-interior");
    if (cfg.viscous_init != "zero-interior" && cfg.viscous_init != "equilibrium")
        throw BadValue("viscous.init", "expected zero-interior or equilibrium");

    // Value-level validation with key-path diagnostics.
    if (cfg.nx < 3) throw BadValue("grid.nx", "must be >= 3");
    if (cfg.ny < 3) throw BadValue("grid.ny", "must be >= 3");
    if (!(cfg.lx > 0)) throw BadValue("grid.lx", "must be > 0");
    if (!(cfg.ly > 0)) throw BadValue("grid.ly", "must be > 0");
    if (!(cfg.mu > 0)) throw BadValue("material.mu", "must be > 0");
    if (!(cfg.E > 0)) throw BadValue("material.E", "must be > 0");
    if (!(cfg.G > 0)) throw BadValue("material.G", "must be > 0");
    if (!(cfg.Sigma > 0)) throw BadValue("material.Sigma", "must be > 0");
    if (!(cfg.cap_C > cfg.G)) throw BadValue("material.cap_C", "must exceed G");
    if (!(cfg.eps > 0)) throw BadValue("material.eps", "must be > 0");
    if (!(cfg.k_eps > 0 && cfg.k_eps <= 1e-3))
        throw BadValue("material.k_eps", "must lie in (0, 1e-3]");
    if (!(cfg.T > 0)) throw BadValue("load.T", "must be > 0");
    if (cfg.s < 1) throw BadValue("load.s", "must be >= 1");
    if (!(cfg.lambda > 0)) throw BadValue("model.lambda", "must be > 0");
    if (cfg.snapshot_stride < 0) throw BadValue("output.snapshot_stride", "must be >= 0");

    if (cfg.eps < h)
        std::cerr << "warning: material.eps (" << cfg.eps
                  << ") is below the grid spacing (" << h
                  << "); the transition profile cannot be resolved\n";

    // Parse edge labels eagerly so bad labels surface here.
    label_from_string(cfg.bottom, "boundary.bottom");
    label_from_string(cfg.top, "boundary.top");
    label_from_string(cfg.left, "boundary.left");
    label_from_string(cfg.right, "boundary.right");
    return cfg;
}

ScenarioConfig parse_scenario(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open " + path);
    return parse_scenario_stream(is);
}

std::string serialize_scenario(const ScenarioConfig& cfg) {
    std::ostringstream os;
    os << "grid.nx = " << cfg.nx << "\n";
    os << "grid.ny = " << cfg.ny << "\n";
    os << "grid.lx = " << format_double(cfg.lx) << "\n";
    os << "grid.ly = " << format_double(cfg.ly) << "\n";
    os << "boundary.bottom = " << cfg.bottom << "\n";
    os << "boundary.top = " << cfg.top << "\n";
    os << "boundary.left = " << cfg.left << "\n";
    os << "boundary.right = " << cfg.right << "\n";
    os << "material.mu = " << format_double(cfg.mu) << "\n";
    os << "material.E = " << format_double(cfg.E) << "\n";
    os << "material.G = " << format_double(cfg.G) << "\n";
    os << "material.Sigma = " << format_double(cfg.Sigma) << "\n";
    os << "material.cap_C = " << format_double(cfg.cap_C) << "\n";
    os << "material.eps = " << format_double(cfg.eps) << "\n";
    os << "material.k_eps = " << format_double(cfg.k_eps) << "\n";
    os << "load.delta = " << format_double(cfg.delta) << "\n";
    os << "load.T = " << format_double(cfg.T) << "\n";
    os << "load.s = " << cfg.s << "\n";
    os << "model.type = " << cfg.model << "\n";
    os << "model.lambda = " << format_double(cfg.lambda) << "\n";
    os << "model.multi_start = " << (cfg.multi_start ? "true" : "false") << "\n";
    os << "output.dir = " << cfg.out_dir << "\n";
    os << "output.snapshot_stride = " << cfg.snapshot_stride << "\n";
    os << "viscous.init = " << cfg.viscous_init << "\n";
    return os.str();
}

Scenario scenario_from_config(const ScenarioConfig& cfg) {
    Scenario scn;
    scn.grid = build_grid(cfg.nx, cfg.ny, cfg.lx, cfg.ly);
    scn.edges.bottom = label_from_string(cfg.bottom, "boundary.bottom");
    scn.edges.top = label_from_string(cfg.top, "boundary.top");
    scn.edges.left = label_from_string(cfg.left, "boundary.left");
    scn.edges.right = label_from_string(cfg.right, "boundary.right");
    scn.material.mu = cfg.mu;
    scn.material.E = cfg.E;
    scn.material.G = cfg.G;
    scn.material.Sigma = cfg.Sigma;
    scn.material.cap_C = cfg.cap_C;
    scn.material.eps = cfg.eps;
    scn.material.k_eps = cfg.k_eps;
    scn.load = LoadProgram::ramp(cfg.delta, cfg.T);
    scn.T = cfg.T;
    scn.s = cfg.s;
    scn.altmin.multi_start = cfg.multi_start;
    scn.lambda = cfg.lambda;
    if (cfg.model == "first") scn.model = Model::FirstModel;
    else if (cfg.model == "improved") scn.model = Model::ImprovedModel;
    else scn.model = Model::Viscous;
    return scn;
}

}  // namespace emfrac
