// runner.hpp — simulation driver, summaries, cross-backend comparison
#pragma once

#include <string>

#include "unravel/config.hpp"
#include "unravel/series.hpp"

namespace unravel {

struct RunOutput {
    ObservableSeries series;       // empty for the analytic backend
    std::string summary_text;
    bool peak_found = false;
    double t_star = 0.0, r_star = 0.0, s_z_star = 0.0;
};

// Runs the configured simulation without touching the filesystem.
RunOutput run_series(const RunConfig& cfg);

// run_series plus the CSV/summary files named in [output].
RunOutput run_simulation(const RunConfig& cfg);

// Closed-form predictions (analytic module) as summary text; optional
// Monte Carlo self-check when cfg.mc_samples > 0.
std::string predict_text(const RunConfig& cfg);

struct CompareReport {
    bool pass = false;
    double max_abs = 0.0;    // max_t |a - b|
    double max_sigma = 0.0;  // max_t |a - b| / combined standard error
    std::size_t n_points = 0;
    std::string text;
};

// Runs both configs (identical model and time grid required) and
// compares one observable pointwise.  With absolute = false the
// tolerance is in units of the combined standard error.
CompareReport compare_backends(const RunConfig& a, const RunConfig& b,
                               const std::string& observable, double tol, bool absolute = false);

// Extracts the config block embedded in a summary file (between
// [config-begin] and [config-end]) so a run can be reconstructed from
// its summary alone.
RunConfig config_from_summary(const std::string& summary_path);

}  // namespace unravel
