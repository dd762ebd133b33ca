#ifndef EMFRAC_CONFIG_HPP
#define EMFRAC_CONFIG_HPP

#include <iosfwd>
#include <string>

#include "emfrac/evolution.hpp"

namespace emfrac {

/// Flat key-value scenario description (INI-like: `section.key = value`,
/// '#' comments). Defaults: strip boundary labels, eps = 2h, k_eps = 1e-6,
/// cap_C = 100 G, lambda = 1, multi_start on, no snapshots.
struct ScenarioConfig {
    int nx = 0, ny = 0;
    double lx = 0, ly = 0;
    std::string bottom = "u1", top = "u2", left = "free", right = "free";
    double mu = 0, E = 1.0, G = 0, Sigma = 1.0, cap_C = 0, eps = 0, k_eps = 1e-6;
    double delta = 0, T = 0;
    int s = 0;
    std::string model = "first";
    double lambda = 1.0;
    bool multi_start = true;
    std::string out_dir = "out";
    int snapshot_stride = 0;
    std::string viscous_init = "zero-interior";  // or "equilibrium"

    bool operator==(const ScenarioConfig&) const = default;
};

ScenarioConfig parse_scenario(const std::string& path);
ScenarioConfig parse_scenario_stream(std::istream& is);

std::string serialize_scenario(const ScenarioConfig& cfg);

/// Lowers a validated config to the solver-facing scenario.
Scenario scenario_from_config(const ScenarioConfig& cfg);

Label label_from_string(const std::string& s, const std::string& key);

}  // namespace emfrac

#endif
