// dense.hpp — dense state-vector integrator for the nonlinear QSD equation
//
// Exact per-trajectory reference for small site counts.  Operators are
// applied term-by-term from their SiteSumOperator / PairCouplingOperator
// descriptions; no 2^n x 2^n matrix is ever materialized.
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "unravel/accumulator.hpp"
#include "unravel/model.hpp"
#include "unravel/noise.hpp"

namespace unravel::dense {

inline constexpr int kMaxSites = 14;

using State = Eigen::VectorXcd;

// |1>^n, amplitude index bit j = state of site j
State inverted_state(int n);

// out += sum_j (lower_j sigma_j^- + raise_j sigma_j^+) |psi>
void apply_site_sum(const SiteSumOperator& op, const State& psi, State& out, int n);
// out += (sum_j ...)^dag |psi>
void apply_site_sum_dagger(const SiteSumOperator& op, const State& psi, State& out, int n);
// out += sum_{j<l} h_jl (sigma_j^+ sigma_l^- + sigma_j^- sigma_l^+) |psi>
void apply_pair_coupling(const PairCouplingOperator& op, const State& psi, State& out, int n);

struct Workspace {
    State jpsi, jdjpsi, dpsi;
    void resize(Eigen::Index dim) {
        jpsi.resize(dim);
        jdjpsi.resize(dim);
        dpsi.resize(dim);
    }
};

// One Euler-Maruyama step of
//   d|psi> = sum_k [ -1/2 (Jk^dag Jk + <Jk>*<Jk> - 2 <Jk>* Jk) |psi> dt
//                    + (Jk - <Jk>) |psi> dWk ] - i H |psi> dt,
// followed by explicit renormalization.  noises holds one complex dW per
// channel.  Returns the pre-renormalization |norm - 1|.
double qsd_step(State& psi, const std::vector<SiteSumOperator>& jumps,
                const PairCouplingOperator* hamiltonian, double dt,
                const std::vector<std::complex<double>>& noises, int n, Workspace& ws);

// Reduced density matrix over `keep` (ascending site indices); the first
// kept site is the most significant bit of the reduced index.
Eigen::MatrixXcd partial_trace(const State& psi, const std::vector<int>& keep, int n);

struct TrajectoryOptions {
    double dt = 0.0;
    long n_steps = 0;
    int sample_every = 1;
    ObservableRequest req;
};

// Runs a single trajectory from the fully inverted state; samples at
// step 0, sample_every, 2*sample_every, ...
TrajectorySamples run_trajectory(const AnyModel& model, const TrajectoryOptions& opt,
                                 NoiseStream stream);

}  // namespace unravel::dense
