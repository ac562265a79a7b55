#include "unravel/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "unravel/analytic.hpp"
#include "unravel/dicke.hpp"
#include "unravel/errors.hpp"

namespace unravel {

namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", x);
    return buf;
}

void set_common_meta(ObservableSeries& s, const RunConfig& cfg) {
    s.set_meta("backend", cfg.backend);
    s.set_meta("model", cfg.model_kind);
    s.set_meta("n", std::to_string(cfg.n));
    s.set_meta("gamma", fmt(cfg.gamma));
    if (cfg.model_kind == "squeezed") s.set_meta("zeta", fmt(cfg.zeta));
    s.set_meta("seed", std::to_string(cfg.seed));
    s.set_meta("n_traj", std::to_string(cfg.n_traj));
    if (cfg.bond_dim > 0) s.set_meta("bond_dim", std::to_string(cfg.bond_dim));
}

struct PeakFacts {
    bool found = false;
    double t_star = 0.0, r_star_over_n = 0.0, s_z_star = 0.0;
};

PeakFacts extract_peak(const ObservableSeries& s, int n) {
    PeakFacts f;
    const auto* rate = s.find("rate_over_n");
    const auto* sz = s.find("sz_over_n");
    if (!rate || rate->value.size() < 3) return f;
    try {
        const Peak p = find_peak(s.t, rate->value);
        f.found = true;
        f.t_star = p.t_star;
        f.r_star_over_n = p.value;
        if (sz) f.s_z_star = 2.0 * quad_interp_at(s.t, sz->value, p.t_star);
    } catch (const DomainError&) {
        // monotone rate or boundary maximum: no peak to report
    }
    (void)n;
    return f;
}

std::string analytic_summary_body(const RunConfig& cfg) {
    SqueezedModel model{cfg.gamma, cfg.zeta, cfg.n};
    const analytic::PeakPrediction p = analytic::peak_predictions(model);
    std::ostringstream o;
    o << "t_star = " << fmt(p.t_star) << "\n";
    o << "r_star = " << fmt(p.r_star) << "\n";
    o << "r_star_over_gn2 = " << fmt(p.r_star / (cfg.gamma * double(cfg.n) * cfg.n)) << "\n";
    o << "s_z_star = " << fmt(p.s_z_star) << "\n";
    o << "delta_t = " << fmt(p.delta_t) << "\n";
    o << "t_star_refined = " << fmt(p.t_star_refined) << "\n";
    o << "steady_residual_excitation = " << fmt(analytic::steady_excitation(cfg.zeta)) << "\n";
    if (p.below_validity) o << "warning = zeta*N below 10; large-N theory is marginal here\n";

    if (cfg.mc_samples > 1) {
        analytic::ThreeStageOptions opt;
        const int nt = opt.n_times;
        std::vector<double> sin2(nt, 0.0), cos1(nt, 0.0);
        NoiseStream stream = make_trajectory_stream(cfg.seed, 0);
        for (long s = 0; s < cfg.mc_samples; ++s) {
            const auto theta = analytic::three_stage_sample(model, opt, stream);
            for (int k = 0; k < nt; ++k) {
                const double sn = std::sin(theta[k]);
                sin2[k] += sn * sn;
                cos1[k] += std::cos(theta[k]);
            }
        }
        int kmax = 0;
        for (int k = 1; k < nt; ++k)
            if (sin2[k] > sin2[kmax]) kmax = k;
        const double r_mc =
            0.25 * cfg.gamma * double(cfg.n) * cfg.n * cfg.zeta * sin2[kmax] / cfg.mc_samples;
        o << "mc_samples = " << cfg.mc_samples << "\n";
        o << "mc_r_star = " << fmt(r_mc) << "\n";
        o << "mc_s_z_star = " << fmt(cos1[kmax] / cfg.mc_samples) << "\n";
    }
    return o.str();
}

}  // namespace

RunOutput run_series(const RunConfig& cfg) {
    const ResolvedRun rr = resolve(cfg);
    const auto wall_start = std::chrono::steady_clock::now();

    RunOutput out;
    std::ostringstream diag;

    if (rr.backend == Backend::Analytic) {
        out.summary_text = analytic_summary_body(cfg);
    } else if (rr.backend == Backend::Dicke) {
        dicke::EvolveOptions opt;
        opt.t_max = cfg.t_max;
        opt.dt = rr.dt;
        opt.sample_every = rr.sample_every;
        opt.want_squeezing = rr.want_squeezing;
        auto result = dicke::evolve_master(std::get<SqueezedModel>(rr.model), opt);
        out.series = std::move(result.series);
        diag << "max_trace_dev = " << fmt(result.max_trace_dev) << "\n";
        diag << "max_herm_dev = " << fmt(result.max_herm_dev) << "\n";
    } else {
        EnsembleSpec spec;
        spec.model = rr.model;
        spec.backend = rr.backend;
        spec.dt = rr.dt;
        spec.n_steps = rr.n_steps;
        spec.sample_every = rr.sample_every;
        spec.n_traj = static_cast<std::size_t>(cfg.n_traj);
        spec.workers = rr.workers;
        spec.bond_dim = cfg.bond_dim;
        spec.step_trunc_warn = cfg.step_trunc_warn;
        spec.seed = cfg.seed;
        spec.req = rr.req;
        auto result = run_ensemble(spec);
        out.series = std::move(result.series);
        diag << "max_norm_dev = " << fmt(result.diagnostics.max_norm_dev) << "\n";
        if (rr.backend == Backend::Mps) {
            diag << "max_cum_discarded_weight = " << fmt(result.diagnostics.max_cum_discarded)
                 << "\n";
            diag << "flagged_trajectories = " << result.diagnostics.flagged_trajectories << "\n";
            diag << "truncation_warnings = " << result.diagnostics.truncation_warnings << "\n";
        }
    }

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();

    std::ostringstream sum;
    sum << "# unravel-summary v1\n";
    sum << "[config-begin]\n" << normalized_config(cfg) << "[config-end]\n\n";
    sum << "[result]\n";
    sum << "backend = " << cfg.backend << "\n";
    sum << "wall_seconds = " << fmt(wall) << "\n";

    if (rr.backend == Backend::Analytic) {
        sum << out.summary_text;
        out.summary_text = sum.str();
        return out;
    }

    set_common_meta(out.series, cfg);
    out.series.set_meta("dt", fmt(rr.dt));
    out.series.set_meta("sample_every", std::to_string(rr.sample_every));

    const PeakFacts pf = extract_peak(out.series, cfg.n);
    out.peak_found = pf.found;
    sum << "peak_found = " << (pf.found ? "true" : "false") << "\n";
    if (pf.found) {
        out.t_star = pf.t_star;
        out.r_star = pf.r_star_over_n * cfg.n;
        out.s_z_star = pf.s_z_star;
        sum << "t_star = " << fmt(pf.t_star) << "\n";
        sum << "r_star = " << fmt(out.r_star) << "\n";
        sum << "r_star_over_gn2 = " << fmt(out.r_star / (cfg.gamma * double(cfg.n) * cfg.n))
            << "\n";
        sum << "s_z_star = " << fmt(pf.s_z_star) << "\n";
    }
    if (const auto* sz = out.series.find("sz_over_n"); sz && !sz->value.empty()) {
        sum << "final_sz_over_n = " << fmt(sz->value.back()) << "\n";
        sum << "final_residual_excitation = " << fmt(cfg.n * (2.0 * sz->value.back() + 1.0))
            << "\n";
    }
    if (const auto* xi = out.series.find("xi_r2"); xi && !xi->value.empty())
        sum << "final_xi_r2 = " << fmt(xi->value.back()) << "\n";

    sum << "\n[diagnostics]\n";
    sum << "n_traj = " << cfg.n_traj << "\n";
    sum << diag.str();
    std::size_t max_err_cols = 0;
    for (const auto& c : out.series.cols)
        if (!c.error.empty()) {
            double m = 0.0;
            for (double e : c.error) m = std::max(m, e);
            sum << "max_se_" << c.name << " = " << fmt(m) << "\n";
            ++max_err_cols;
        }
    (void)max_err_cols;

    out.summary_text = sum.str();
    return out;
}

RunOutput run_simulation(const RunConfig& cfg) {
    RunOutput out = run_series(cfg);
    if (!out.series.t.empty()) out.series.write_csv(cfg.series_path);
    std::ofstream sf(cfg.summary_path);
    if (!sf) throw ConfigError("cannot open summary output file: " + cfg.summary_path);
    sf << out.summary_text;
    return out;
}

std::string predict_text(const RunConfig& cfg) {
    if (cfg.model_kind != "squeezed")
        throw ConfigError("predictions exist for the squeezed model only");
    SqueezedModel model{cfg.gamma, cfg.zeta, cfg.n};
    model.validate();
    std::ostringstream o;
    o << "# unravel-predict v1\n";
    o << "n = " << cfg.n << "\ngamma = " << fmt(cfg.gamma) << "\nzeta = " << fmt(cfg.zeta) << "\n";
    o << analytic_summary_body(cfg);
    return o.str();
}

CompareReport compare_backends(const RunConfig& a, const RunConfig& b,
                               const std::string& observable, double tol, bool absolute) {
    // identical model required
    RunConfig ma = a, mb = b;
    ma.backend = mb.backend = "";
    ma.series_path = mb.series_path = "";
    ma.summary_path = mb.summary_path = "";
    {
        RunConfig just_model_a = a, just_model_b = b;
        just_model_a.backend = just_model_b.backend = "x";
        std::ostringstream oa, ob;
        oa << just_model_a.model_kind << just_model_a.gamma << just_model_a.zeta << just_model_a.n;
        for (double p : just_model_a.phases) oa << "," << p;
        oa << just_model_a.phase_step;
        ob << just_model_b.model_kind << just_model_b.gamma << just_model_b.zeta << just_model_b.n;
        for (double p : just_model_b.phases) ob << "," << p;
        ob << just_model_b.phase_step;
        if (oa.str() != ob.str())
            throw ConfigError("compare: the two configs describe different models");
    }

    const RunOutput ra = run_series(a);
    const RunOutput rb = run_series(b);
    if (ra.series.t.size() != rb.series.t.size())
        throw ConfigError("compare: time grids differ in length");
    for (std::size_t i = 0; i < ra.series.t.size(); ++i)
        if (std::abs(ra.series.t[i] - rb.series.t[i]) >
            1e-12 * std::max(1.0, std::abs(ra.series.t[i])))
            throw ConfigError("compare: time grids differ");

    const auto* ca = ra.series.find(observable);
    const auto* cb = rb.series.find(observable);
    if (!ca || !cb)
        throw ConfigError("compare: observable '" + observable + "' missing from a run");

    CompareReport rep;
    rep.n_points = ca->value.size();
    double worst_t_abs = 0.0, worst_t_sig = 0.0;
    for (std::size_t i = 0; i < ca->value.size(); ++i) {
        const double d = std::abs(ca->value[i] - cb->value[i]);
        const double ea = ca->error.empty() ? 0.0 : ca->error[i];
        const double eb = cb->error.empty() ? 0.0 : cb->error[i];
        const double se = std::sqrt(ea * ea + eb * eb);
        if (d > rep.max_abs) {
            rep.max_abs = d;
            worst_t_abs = ra.series.t[i];
        }
        const double sig = d == 0.0 ? 0.0
                           : se > 0.0 ? d / se
                                      : std::numeric_limits<double>::infinity();
        if (sig > rep.max_sigma) {
            rep.max_sigma = sig;
            worst_t_sig = ra.series.t[i];
        }
    }
    rep.pass = absolute ? rep.max_abs <= tol : rep.max_sigma <= tol;

    std::ostringstream o;
    o << "# unravel-compare v1\n";
    o << "observable = " << observable << "\n";
    o << "points = " << rep.n_points << "\n";
    o << "max_abs_deviation = " << fmt(rep.max_abs) << " at t = " << fmt(worst_t_abs) << "\n";
    o << "max_sigma_deviation = " << fmt(rep.max_sigma) << " at t = " << fmt(worst_t_sig) << "\n";
    o << "tolerance = " << fmt(tol) << (absolute ? " (absolute)" : " (combined standard errors)")
      << "\n";
    o << "result = " << (rep.pass ? "PASS" : "FAIL") << "\n";
    rep.text = o.str();
    return rep;
}

RunConfig config_from_summary(const std::string& summary_path) {
    std::ifstream in(summary_path);
    if (!in) throw ConfigError("cannot open summary file: " + summary_path);
    std::string line;
    std::ostringstream cfg;
    bool inside = false;
    while (std::getline(in, line)) {
        if (line == "[config-begin]") {
            inside = true;
            continue;
        }
        if (line == "[config-end]") {
            inside = false;
            break;
        }
        if (inside) cfg << line << "\n";
    }
    const std::string text = cfg.str();
    if (text.empty()) throw ConfigError(summary_path + ": no embedded config block");
    return parse_config_text(text, summary_path + "(embedded config)");
}

}  // namespace unravel
