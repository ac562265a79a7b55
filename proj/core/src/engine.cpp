#include "unravel/engine.hpp"

#include <atomic>
#include <exception>
#include <thread>

#include "unravel/dense.hpp"
#include "unravel/errors.hpp"
#include "unravel/meanfield.hpp"
#include "unravel/mps.hpp"
#include "unravel/noise.hpp"

namespace unravel {

namespace {

TrajectorySamples run_one(const EnsembleSpec& spec, std::size_t index) {
    NoiseStream stream = make_trajectory_stream(spec.seed, index);
    switch (spec.backend) {
        case Backend::Dense: {
            dense::TrajectoryOptions opt;
            opt.dt = spec.dt;
            opt.n_steps = spec.n_steps;
            opt.sample_every = spec.sample_every;
            opt.req = spec.req;
            return dense::run_trajectory(spec.model, opt, stream);
        }
        case Backend::Mps: {
            mps::MpsTrajectoryOptions opt;
            opt.dt = spec.dt;
            opt.n_steps = spec.n_steps;
            opt.sample_every = spec.sample_every;
            opt.bond_dim = spec.bond_dim;
            opt.step_trunc_warn = spec.step_trunc_warn;
            opt.req = spec.req;
            return mps::run_trajectory(spec.model, opt, stream);
        }
        case Backend::MeanField: {
            mf::MfTrajectoryOptions opt;
            opt.dt = spec.dt;
            opt.n_steps = spec.n_steps;
            opt.sample_every = spec.sample_every;
            opt.req = spec.req;
            return mf::run_trajectory(spec.model, opt, stream);
        }
        default:
            throw DomainError("run_ensemble: not a trajectory backend");
    }
}

}  // namespace

EnsembleResult run_ensemble(const EnsembleSpec& spec) {
    if (spec.n_traj < 1) throw DomainError("run_ensemble: n_traj must be >= 1");
    if (spec.n_steps < 1) throw DomainError("run_ensemble: n_steps must be >= 1");
    if (spec.n_steps % spec.sample_every != 0)
        throw DomainError("run_ensemble: n_steps must be a multiple of sample_every");

    const std::size_t n_times = static_cast<std::size_t>(spec.n_steps / spec.sample_every) + 1;
    EnsembleAccumulator acc(spec.req, n_sites(spec.model), n_times, spec.n_traj);

    const int workers = std::max(1, spec.workers);
    const std::size_t batch = std::max<std::size_t>(static_cast<std::size_t>(4) * workers, 32);

    std::vector<TrajectorySamples> slots;
    for (std::size_t lo = 0; lo < spec.n_traj; lo += batch) {
        const std::size_t hi = std::min(spec.n_traj, lo + batch);
        const std::size_t count = hi - lo;
        slots.assign(count, TrajectorySamples{});

        if (workers == 1) {
            for (std::size_t i = 0; i < count; ++i) slots[i] = run_one(spec, lo + i);
        } else {
            std::atomic<std::size_t> next{0};
            std::exception_ptr error;
            std::mutex error_mutex;
            std::vector<std::thread> pool;
            pool.reserve(workers);
            for (int w = 0; w < workers; ++w)
                pool.emplace_back([&] {
                    for (;;) {
                        const std::size_t i = next.fetch_add(1);
                        if (i >= count) return;
                        try {
                            slots[i] = run_one(spec, lo + i);
                        } catch (...) {
                            std::lock_guard<std::mutex> lock(error_mutex);
                            if (!error) error = std::current_exception();
                            return;
                        }
                    }
                });
            for (auto& t : pool) t.join();
            if (error) std::rethrow_exception(error);
        }

        for (std::size_t i = 0; i < count; ++i) acc.add(lo + i, slots[i]);
    }

    EnsembleResult result;
    result.series.t.resize(n_times);
    for (std::size_t k = 0; k < n_times; ++k)
        result.series.t[k] = static_cast<double>(k) * spec.dt * spec.sample_every;
    acc.finalize(result.series);
    result.diagnostics = acc.diagnostics();
    return result;
}

}  // namespace unravel
