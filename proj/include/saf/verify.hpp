#pragma once

// Named numerical checks covering Green's identity, the spectra of the
// extension, compression to the generalized resolvent, self-adjointness,
// minimality and the Herglotz machinery, run as one reproducible suite.

#include "saf/herglotz.hpp"
#include "saf/ode_models.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace saf::verify {

struct Config {
    std::uint64_t seed = 20240917;
    std::vector<ode::ModelDescriptor> models;
    std::vector<HerglotzData> herglotz;
    std::map<std::string, double> tolerances;  // overrides of the defaults
    std::vector<std::string> checks;           // empty: all
    std::string inject_defect;                 // "" or "nonhermitian"
    bool parallel = true;
};

struct CheckResult {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string context;
    double seconds = 0.0;
};

struct Report {
    std::vector<CheckResult> checks;
    bool pass = false;
    std::uint64_t seed = 0;
    double seconds = 0.0;
};

// Two models (first order, n = 64; Sturm–Liouville, q = 0, n = 200) and three
// Herglotz datasets: f(λ) = λ, f(λ) = −1/λ, and a two-atom function with h0 > 0.
Config default_config();

// Parses the JSON config; throws ConfigError listing every bad field.
Config parse_config(const std::string& json_text);

// Check names available for the given config, in report order.
std::vector<std::string> check_names(const Config& config);
double default_tolerance(const std::string& check_name);

Report run_suite(const Config& config);

std::string report_text(const Report& report);
std::string report_json(const Report& report);
// name,residual,tolerance,verdict; free of timings, so it is bitwise
// reproducible for a fixed seed and config.
std::string report_csv(const Report& report);

} // namespace saf::verify
