// config.hpp — flat, typed key-value run configuration
//
// Sections [model], [run], [output]; `key = value` lines; `#` comments.
// Unknown keys and sections are errors, not warnings.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "unravel/engine.hpp"
#include "unravel/model.hpp"

namespace unravel {

struct RunConfig {
    // [model]
    std::string model_kind;  // squeezed | waveguide
    double gamma = 1.0;
    double zeta = -1.0;
    int n = 0;
    std::vector<double> phases;  // waveguide k0 z_j, sorted ascending on parse
    double phase_step = 0.0;     // shorthand: phases_j = j * phase_step, j = 1..n

    // [run]
    std::string backend;  // dicke | dense | mps | meanfield | analytic
    double dt = 0.0;      // 0: backend default
    double t_max = 0.0;
    long n_traj = 1;
    int bond_dim = 0;
    std::uint64_t seed = 12345;
    int workers = 0;  // 0: UNRAVEL_WORKERS env or hardware concurrency
    int sample_every = 0;
    std::vector<std::string> observables;  // sz implied; rate, entropy, pair, squeezing
    int pair_j = 1, pair_l = 2;            // 1-based site indices
    int cut = 0;                           // 0: n/2
    long mc_samples = 0;                   // analytic: Monte Carlo self-check size
    double step_trunc_warn = 1e-4;

    // [output]
    std::string series_path = "series.csv";
    std::string summary_path = "summary.txt";
};

RunConfig parse_config_text(const std::string& text, const std::string& origin);
RunConfig parse_config_file(const std::string& path);

// Canonical re-parseable echo of a validated config.
std::string normalized_config(const RunConfig& cfg);

// Derived, validated run parameters.
struct ResolvedRun {
    AnyModel model;
    Backend backend = Backend::Dicke;
    double dt = 0.0;
    long n_steps = 0;
    int sample_every = 1;
    ObservableRequest req;
    int workers = 1;
    bool want_squeezing = false;  // dicke column selection
};

// Validates cross-field constraints (backend/model compatibility, pair
// indices, dt defaults, ...) and materializes the model.  Throws
// ConfigError with a field diagnostic on violation.
ResolvedRun resolve(const RunConfig& cfg);

}  // namespace unravel
