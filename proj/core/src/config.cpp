#include "unravel/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "unravel/dicke.hpp"
#include "unravel/errors.hpp"

namespace unravel {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

struct Parser {
    std::string origin;
    int line_no = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ConfigError(origin + ":" + std::to_string(line_no) + ": " + msg);
    }

    double to_double(const std::string& v) const {
        try {
            std::size_t pos = 0;
            const double x = std::stod(v, &pos);
            if (pos != v.size()) fail("trailing characters in numeric value '" + v + "'");
            return x;
        } catch (const ConfigError&) {
            throw;
        } catch (...) {
            fail("expected a number, got '" + v + "'");
        }
    }

    long to_long(const std::string& v) const {
        try {
            std::size_t pos = 0;
            const long x = std::stol(v, &pos);
            if (pos != v.size()) fail("trailing characters in integer value '" + v + "'");
            return x;
        } catch (const ConfigError&) {
            throw;
        } catch (...) {
            fail("expected an integer, got '" + v + "'");
        }
    }

    std::uint64_t to_u64(const std::string& v) const {
        try {
            std::size_t pos = 0;
            const unsigned long long x = std::stoull(v, &pos);
            if (pos != v.size()) fail("trailing characters in integer value '" + v + "'");
            return x;
        } catch (const ConfigError&) {
            throw;
        } catch (...) {
            fail("expected a non-negative integer, got '" + v + "'");
        }
    }

    std::vector<std::string> to_list(const std::string& v) const {
        std::vector<std::string> out;
        std::istringstream ss(v);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            tok = trim(tok);
            if (!tok.empty()) out.push_back(tok);
        }
        return out;
    }
};

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    RunConfig cfg;
    Parser p{origin, 0};
    std::istringstream in(text);
    std::string raw;
    std::string section;
    bool saw_pair = false;

    while (std::getline(in, raw)) {
        ++p.line_no;
        std::string line = raw;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') p.fail("malformed section header");
            section = line.substr(1, line.size() - 2);
            if (section != "model" && section != "run" && section != "output")
                p.fail("unknown section [" + section + "]");
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos) p.fail("expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty()) p.fail("empty key");
        if (val.empty()) p.fail("empty value for key '" + key + "'");
        if (section.empty()) p.fail("key '" + key + "' outside any section");

        if (section == "model") {
            if (key == "kind") cfg.model_kind = val;
            else if (key == "gamma") cfg.gamma = p.to_double(val);
            else if (key == "zeta") cfg.zeta = p.to_double(val);
            else if (key == "n") cfg.n = static_cast<int>(p.to_long(val));
            else if (key == "phases") {
                for (const auto& tok : p.to_list(val)) cfg.phases.push_back(p.to_double(tok));
            } else if (key == "phase_step") cfg.phase_step = p.to_double(val);
            else p.fail("unknown key '" + key + "' in [model]");
        } else if (section == "run") {
            if (key == "backend") cfg.backend = val;
            else if (key == "dt") cfg.dt = p.to_double(val);
            else if (key == "t_max") cfg.t_max = p.to_double(val);
            else if (key == "n_traj") cfg.n_traj = p.to_long(val);
            else if (key == "bond_dim") cfg.bond_dim = static_cast<int>(p.to_long(val));
            else if (key == "seed") cfg.seed = p.to_u64(val);
            else if (key == "workers") cfg.workers = static_cast<int>(p.to_long(val));
            else if (key == "sample_every") cfg.sample_every = static_cast<int>(p.to_long(val));
            else if (key == "observables") cfg.observables = p.to_list(val);
            else if (key == "pair") {
                const auto toks = p.to_list(val);
                if (toks.size() != 2) p.fail("pair expects two site indices, e.g. 'pair = 1, 2'");
                cfg.pair_j = static_cast<int>(p.to_long(toks[0]));
                cfg.pair_l = static_cast<int>(p.to_long(toks[1]));
                saw_pair = true;
            } else if (key == "cut") cfg.cut = static_cast<int>(p.to_long(val));
            else if (key == "mc_samples") cfg.mc_samples = p.to_long(val);
            else if (key == "step_trunc_warn") cfg.step_trunc_warn = p.to_double(val);
            else p.fail("unknown key '" + key + "' in [run]");
        } else {  // output
            if (key == "series") cfg.series_path = val;
            else if (key == "summary") cfg.summary_path = val;
            else p.fail("unknown key '" + key + "' in [output]");
        }
    }
    (void)saw_pair;

    // normalize waveguide site order to ascending position (global
    // relabeling; pair indices refer to the sorted chain)
    if (!cfg.phases.empty()) std::sort(cfg.phases.begin(), cfg.phases.end());
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path);
}

namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace

std::string normalized_config(const RunConfig& cfg) {
    std::ostringstream o;
    o << "[model]\n";
    o << "kind = " << cfg.model_kind << "\n";
    o << "gamma = " << fmt(cfg.gamma) << "\n";
    if (cfg.model_kind == "squeezed") o << "zeta = " << fmt(cfg.zeta) << "\n";
    o << "n = " << cfg.n << "\n";
    if (cfg.model_kind == "waveguide") {
        o << "phases = ";
        std::vector<double> ph = cfg.phases;
        if (ph.empty())
            for (int j = 1; j <= cfg.n; ++j) ph.push_back(cfg.phase_step * j);
        for (std::size_t i = 0; i < ph.size(); ++i) o << (i ? ", " : "") << fmt(ph[i]);
        o << "\n";
    }
    o << "\n[run]\n";
    o << "backend = " << cfg.backend << "\n";
    if (cfg.dt > 0) o << "dt = " << fmt(cfg.dt) << "\n";
    if (cfg.t_max > 0) o << "t_max = " << fmt(cfg.t_max) << "\n";
    o << "n_traj = " << cfg.n_traj << "\n";
    if (cfg.bond_dim > 0) o << "bond_dim = " << cfg.bond_dim << "\n";
    o << "seed = " << cfg.seed << "\n";
    if (cfg.workers > 0) o << "workers = " << cfg.workers << "\n";
    if (cfg.sample_every > 0) o << "sample_every = " << cfg.sample_every << "\n";
    if (!cfg.observables.empty()) {
        o << "observables = ";
        for (std::size_t i = 0; i < cfg.observables.size(); ++i)
            o << (i ? ", " : "") << cfg.observables[i];
        o << "\n";
    }
    o << "pair = " << cfg.pair_j << ", " << cfg.pair_l << "\n";
    if (cfg.cut > 0) o << "cut = " << cfg.cut << "\n";
    if (cfg.mc_samples > 0) o << "mc_samples = " << cfg.mc_samples << "\n";
    o << "step_trunc_warn = " << fmt(cfg.step_trunc_warn) << "\n";
    o << "\n[output]\n";
    o << "series = " << cfg.series_path << "\n";
    o << "summary = " << cfg.summary_path << "\n";
    return o.str();
}

namespace {

int default_workers() {
    if (const char* env = std::getenv("UNRAVEL_WORKERS")) {
        const int w = std::atoi(env);
        if (w >= 1) return w;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

}  // namespace

ResolvedRun resolve(const RunConfig& cfg) {
    ResolvedRun r;

    // model
    if (cfg.model_kind == "squeezed") {
        if (cfg.zeta < 0) throw ConfigError("[model] zeta is required for kind = squeezed");
        SqueezedModel m{cfg.gamma, cfg.zeta, cfg.n};
        try {
            m.validate();
        } catch (const DomainError& e) {
            throw ConfigError(std::string("[model] ") + e.what());
        }
        r.model = m;
    } else if (cfg.model_kind == "waveguide") {
        WaveguideModel m;
        m.gamma = cfg.gamma;
        m.n = cfg.n;
        if (!cfg.phases.empty() && cfg.phase_step != 0.0)
            throw ConfigError("[model] give either phases or phase_step, not both");
        if (!cfg.phases.empty()) {
            m.phases = cfg.phases;
        } else if (cfg.phase_step != 0.0) {
            for (int j = 1; j <= cfg.n; ++j) m.phases.push_back(cfg.phase_step * j);
        } else {
            throw ConfigError("[model] waveguide needs phases or phase_step");
        }
        try {
            m.validate();
        } catch (const DomainError& e) {
            throw ConfigError(std::string("[model] ") + e.what());
        }
        r.model = m;
    } else if (cfg.model_kind.empty()) {
        throw ConfigError("[model] kind is required (squeezed or waveguide)");
    } else {
        throw ConfigError("[model] unknown kind '" + cfg.model_kind + "'");
    }

    // backend
    if (cfg.backend == "dicke") r.backend = Backend::Dicke;
    else if (cfg.backend == "dense") r.backend = Backend::Dense;
    else if (cfg.backend == "mps") r.backend = Backend::Mps;
    else if (cfg.backend == "meanfield") r.backend = Backend::MeanField;
    else if (cfg.backend == "analytic") r.backend = Backend::Analytic;
    else if (cfg.backend.empty()) throw ConfigError("[run] backend is required");
    else throw ConfigError("[run] unknown backend '" + cfg.backend + "'");

    const bool squeezed = cfg.model_kind == "squeezed";
    if ((r.backend == Backend::Dicke || r.backend == Backend::Analytic) && !squeezed)
        throw ConfigError("[run] backend '" + cfg.backend +
                          "' requires the squeezed model (no symmetric sector for waveguide)");

    const bool trajectory = r.backend == Backend::Dense || r.backend == Backend::Mps ||
                            r.backend == Backend::MeanField;
    if (trajectory && cfg.n_traj < 1) throw ConfigError("[run] n_traj must be >= 1");
    if (r.backend == Backend::MeanField && cfg.n_traj < 2)
        throw ConfigError("[run] meanfield needs n_traj >= 2 for a variance estimate");
    if (r.backend == Backend::Mps && cfg.bond_dim < 1)
        throw ConfigError("[run] mps backend requires bond_dim >= 1");

    // observables
    r.req = ObservableRequest{};
    r.req.rate = false;
    std::vector<std::string> names = cfg.observables;
    if (names.empty()) {
        names = {"rate"};
        if (r.backend == Backend::Dicke) names.push_back("squeezing");
    }
    for (const auto& name : names) {
        if (name == "sz") continue;  // always recorded
        if (name == "rate") r.req.rate = true;
        else if (name == "entropy") r.req.entropy_cut = true;
        else if (name == "pair") r.req.pair_info = true;
        else if (name == "squeezing") r.req.moments = true;
        else throw ConfigError("[run] unknown observable '" + name + "'");
    }
    if (r.backend == Backend::Dicke && (r.req.entropy_cut || r.req.pair_info))
        throw ConfigError("[run] entropy/pair are trajectory observables; the dicke backend "
                          "evolves the averaged state only");
    if (r.backend == Backend::MeanField && r.req.moments)
        throw ConfigError("[run] squeezing cannot be estimated from factorized (meanfield) "
                          "correlators; use the dicke, dense or mps backend");
    if (r.backend == Backend::MeanField && r.req.entropy_cut)
        r.req.entropy_cut = true;  // identically zero for product states, still well defined
    r.want_squeezing = r.req.moments;

    if (r.req.pair_info) {
        if (cfg.pair_j < 1 || cfg.pair_j > cfg.n || cfg.pair_l < 1 || cfg.pair_l > cfg.n ||
            cfg.pair_j == cfg.pair_l)
            throw ConfigError("[run] pair must name two distinct sites in 1.." +
                              std::to_string(cfg.n));
        r.req.pair_j = std::min(cfg.pair_j, cfg.pair_l) - 1;
        r.req.pair_l = std::max(cfg.pair_j, cfg.pair_l) - 1;
    }
    if (r.req.entropy_cut) {
        const int cut = cfg.cut > 0 ? cfg.cut : cfg.n / 2;
        if (cut < 1 || cut >= cfg.n)
            throw ConfigError("[run] cut must lie in 1..n-1");
        r.req.cut = cut;
    }

    // time stepping
    if (r.backend != Backend::Analytic) {
        if (!(cfg.t_max > 0.0)) throw ConfigError("[run] t_max must be positive");
        double dt = cfg.dt;
        if (dt <= 0.0) {
            if (r.backend == Backend::Dicke) {
                dt = dicke::default_dt(std::get<SqueezedModel>(r.model));
            } else if (squeezed) {
                if (cfg.zeta <= 0.0)
                    throw ConfigError("[run] dt is required for zeta = 0 trajectory runs "
                                      "(no collective timescale to set a default)");
                dt = 2e-4 / (cfg.gamma * cfg.zeta);
            } else {
                dt = 2e-4 / cfg.gamma;
            }
        }
        r.dt = dt;
        long n_steps = static_cast<long>(std::ceil(cfg.t_max / dt - 1e-9));
        int sample_every = cfg.sample_every;
        if (sample_every <= 0)
            sample_every = std::max<long>(1, n_steps / (r.backend == Backend::Dicke ? 4000 : 600));
        n_steps = ((n_steps + sample_every - 1) / sample_every) * sample_every;
        r.n_steps = n_steps;
        r.sample_every = sample_every;
    }

    r.workers = cfg.workers > 0 ? cfg.workers : default_workers();
    return r;
}

}  // namespace unravel
