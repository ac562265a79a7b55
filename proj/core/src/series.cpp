#include "unravel/series.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "unravel/errors.hpp"

namespace unravel {

SeriesColumn& ObservableSeries::add(const std::string& name, bool with_error) {
    cols.push_back(SeriesColumn{name, {}, {}});
    auto& c = cols.back();
    c.value.reserve(t.capacity());
    if (with_error) c.error.reserve(t.capacity());
    return c;
}

const SeriesColumn* ObservableSeries::find(const std::string& name) const {
    for (const auto& c : cols)
        if (c.name == name) return &c;
    return nullptr;
}

SeriesColumn* ObservableSeries::find(const std::string& name) {
    for (auto& c : cols)
        if (c.name == name) return &c;
    return nullptr;
}

void ObservableSeries::set_meta(const std::string& key, const std::string& value) {
    for (auto& kv : meta)
        if (kv.first == key) {
            kv.second = value;
            return;
        }
    meta.emplace_back(key, value);
}

std::string ObservableSeries::meta_value(const std::string& key) const {
    for (const auto& kv : meta)
        if (kv.first == key) return kv.second;
    return {};
}

namespace {

std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace

void ObservableSeries::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open series output file: " + path);

    out << "# " << kSeriesSchemaVersion;
    for (const auto& [k, v] : meta) out << " " << k << "=" << v;
    out << "\n";

    out << "t";
    for (const auto& c : cols) {
        out << "," << c.name;
        if (!c.error.empty()) out << "," << c.name << "_err";
    }
    out << "\n";

    for (std::size_t i = 0; i < t.size(); ++i) {
        out << fmt_double(t[i]);
        for (const auto& c : cols) {
            out << "," << fmt_double(c.value[i]);
            if (!c.error.empty()) out << "," << fmt_double(c.error[i]);
        }
        out << "\n";
    }
    if (!out) throw ConfigError("failed writing series file: " + path);
}

ObservableSeries ObservableSeries::read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open series file: " + path);

    ObservableSeries s;
    std::string line;
    if (!std::getline(in, line)) throw ConfigError(path + ": empty series file");
    const std::string tag = std::string("# ") + kSeriesSchemaVersion;
    if (line.rfind(tag, 0) != 0)
        throw ConfigError(path + ": missing or unsupported series schema line");
    {
        std::istringstream ms(line.substr(tag.size()));
        std::string tok;
        while (ms >> tok) {
            const auto eq = tok.find('=');
            if (eq != std::string::npos) s.meta.emplace_back(tok.substr(0, eq), tok.substr(eq + 1));
        }
    }

    if (!std::getline(in, line)) throw ConfigError(path + ": missing header row");
    std::vector<std::string> headers;
    {
        std::istringstream hs(line);
        std::string h;
        while (std::getline(hs, h, ',')) headers.push_back(h);
    }
    if (headers.empty() || headers[0] != "t") throw ConfigError(path + ": first column must be t");

    struct Slot {
        int col = -1;  // index into s.cols
        bool is_error = false;
    };
    std::vector<Slot> slots(headers.size());
    for (std::size_t i = 1; i < headers.size(); ++i) {
        const std::string& h = headers[i];
        if (h.size() > 4 && h.substr(h.size() - 4) == "_err") {
            const std::string base = h.substr(0, h.size() - 4);
            auto* c = s.find(base);
            if (!c) throw ConfigError(path + ": error column without value column: " + h);
            slots[i] = {static_cast<int>(c - s.cols.data()), true};
        } else {
            s.cols.push_back(SeriesColumn{h, {}, {}});
            slots[i] = {static_cast<int>(s.cols.size()) - 1, false};
        }
    }

    std::size_t row = 2;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string cell;
        std::size_t i = 0;
        while (std::getline(ls, cell, ',')) {
            double v = 0.0;
            try {
                v = std::stod(cell);
            } catch (...) {
                throw ConfigError(path + ":" + std::to_string(row) + ": bad numeric cell '" + cell + "'");
            }
            if (i == 0) {
                s.t.push_back(v);
            } else if (i < slots.size()) {
                auto& c = s.cols[slots[i].col];
                (slots[i].is_error ? c.error : c.value).push_back(v);
            } else {
                throw ConfigError(path + ":" + std::to_string(row) + ": too many columns");
            }
            ++i;
        }
    }
    return s;
}

namespace {

// Vertex of the parabola through (t[i-1],y[i-1]), (t[i],y[i]), (t[i+1],y[i+1]).
// Uniform grids assumed (the toolkit only emits those).
std::pair<double, double> parabola_vertex(const std::vector<double>& t, const std::vector<double>& y,
                                          std::size_t i) {
    const double h = t[i + 1] - t[i];
    const double ym = y[i - 1], y0 = y[i], yp = y[i + 1];
    const double denom = ym - 2.0 * y0 + yp;
    if (denom == 0.0) return {t[i], y0};  // flat top; grid point is the vertex
    const double delta = 0.5 * (ym - yp) / denom;  // in units of h
    const double ts = t[i] + delta * h;
    const double ys = y0 - 0.25 * (ym - yp) * delta;
    return {ts, ys};
}

}  // namespace

Peak find_peak(const std::vector<double>& t, const std::vector<double>& y) {
    if (t.size() != y.size() || t.size() < 3)
        throw DomainError("find_peak: need at least three samples");
    std::size_t imax = 0;
    for (std::size_t i = 1; i < y.size(); ++i)
        if (y[i] > y[imax]) imax = i;
    if (imax == 0 || imax + 1 == y.size())
        throw DomainError("find_peak: maximum at grid boundary (grid too short)");
    const auto [ts, ys] = parabola_vertex(t, y, imax);
    return {ts, ys, imax};
}

double quad_interp_at(const std::vector<double>& t, const std::vector<double>& y, double t_query) {
    if (t.size() != y.size() || t.size() < 3)
        throw DomainError("quad_interp_at: need at least three samples");
    // nearest interior grid index
    std::size_t i = std::min_element(t.begin(), t.end(),
                                     [&](double a, double b) {
                                         return std::abs(a - t_query) < std::abs(b - t_query);
                                     }) -
                    t.begin();
    i = std::clamp<std::size_t>(i, 1, t.size() - 2);
    const double h = t[i + 1] - t[i];
    const double x = (t_query - t[i]) / h;
    const double ym = y[i - 1], y0 = y[i], yp = y[i + 1];
    // Lagrange on {-1, 0, +1}
    return 0.5 * x * (x - 1.0) * ym + (1.0 - x * x) * y0 + 0.5 * x * (x + 1.0) * yp;
}

}  // namespace unravel
