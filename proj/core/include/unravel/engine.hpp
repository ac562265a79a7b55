// engine.hpp — trajectory-parallel ensemble execution
//
// Trajectories are independent units of work keyed by (master seed,
// trajectory index).  Workers fill per-index slots; the accumulator then
// merges in index order, so every emitted number is independent of the
// worker count.
#pragma once

#include <cstdint>

#include "unravel/accumulator.hpp"
#include "unravel/model.hpp"
#include "unravel/series.hpp"

namespace unravel {

enum class Backend { Dicke, Dense, Mps, MeanField, Analytic };

struct EnsembleSpec {
    AnyModel model;
    Backend backend = Backend::Dense;
    double dt = 0.0;
    long n_steps = 0;
    int sample_every = 1;
    std::size_t n_traj = 1;
    int workers = 1;
    int bond_dim = 1;              // mps only
    double step_trunc_warn = 1e-4;  // mps only
    std::uint64_t seed = 0;
    ObservableRequest req;
};

struct EnsembleResult {
    ObservableSeries series;
    EnsembleDiagnostics diagnostics;
};

EnsembleResult run_ensemble(const EnsembleSpec& spec);

}  // namespace unravel
