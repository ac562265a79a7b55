// series.hpp — time-indexed observable records and peak extraction
#pragma once

#include <optional>
#include <string>
#include <vector>

namespace unravel {

struct SeriesColumn {
    std::string name;
    std::vector<double> value;
    std::vector<double> error;  // empty when the column is exact
};

// Uniform time grid plus named columns; ensemble-derived columns carry a
// standard error per sample.  Metadata keys echo the run parameters
// (backend, seed, n_traj, dt, bond dimension, ...).
struct ObservableSeries {
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<double> t;
    std::vector<SeriesColumn> cols;

    SeriesColumn& add(const std::string& name, bool with_error);
    const SeriesColumn* find(const std::string& name) const;
    SeriesColumn* find(const std::string& name);
    void set_meta(const std::string& key, const std::string& value);
    std::string meta_value(const std::string& key) const;

    void write_csv(const std::string& path) const;
    static ObservableSeries read_csv(const std::string& path);
};

inline constexpr const char* kSeriesSchemaVersion = "unravel-series v1";

struct Peak {
    double t_star = 0.0;
    double value = 0.0;
    std::size_t grid_index = 0;  // discrete argmax used for interpolation
};

// Quadratic interpolation through the three samples bracketing the
// discrete maximum of y(t).  Throws DomainError when the maximum sits on
// the grid boundary (grid too short to bracket the peak).
Peak find_peak(const std::vector<double>& t, const std::vector<double>& y);

// Same parabola-through-three-points rule, evaluating a second series at
// an off-grid time (used to read off companion observables at t*).
double quad_interp_at(const std::vector<double>& t, const std::vector<double>& y, double t_query);

}  // namespace unravel
