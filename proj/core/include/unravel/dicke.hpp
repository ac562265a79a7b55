// dicke.hpp — exact master-equation solver in the symmetric j = n/2 sector
//
// The squeezed collective decay preserves the (n+1)-dimensional Dicke
// sector when started from the fully inverted state, so the full density
// matrix fits in an (n+1) x (n+1) block.  This backend is the ground
// truth the trajectory engines are checked against.
#pragma once

#include <Eigen/Dense>
#include <optional>

#include "unravel/model.hpp"
#include "unravel/series.hpp"

namespace unravel::dicke {

struct CollectiveMatrices {
    Eigen::MatrixXcd sx, sy, sz, sp, sm;
};

// Spin matrices in the j = n/2 sector, basis |j, m> with m = j ... -j
// (row 0 is the fully inverted state).
CollectiveMatrices collective_matrices(int n);

struct DickeState {
    Eigen::MatrixXcd rho;
    int n = 0;

    // Hermiticity to 1e-10, trace 1 +- 1e-10, eigenvalues >= -1e-8.
    void check_invariants() const;
};

DickeState initial_inverted(int n);

// -i[H, rho] + J rho J^dag - {rho, J^dag J}/2.  H may be null.
Eigen::MatrixXcd lindblad_rhs(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& jump,
                              const Eigen::MatrixXcd* hamiltonian = nullptr);

// Fixed step chosen so the fastest collective rate gamma*zeta*n^2 is
// resolved; halving it must change <Sz>(t) by < 1e-6.
double default_dt(const SqueezedModel& model);

struct EvolveOptions {
    double t_max = 1.0;
    double dt = 0.0;          // <= 0: use default_dt(model)
    int sample_every = 0;     // <= 0: choose ~4000 samples
    bool want_squeezing = false;  // adds the xi_R^2 column
    bool want_purity = true;
};

struct EvolveResult {
    ObservableSeries series;   // sz_over_n, rate_over_n, [xi_r2], [purity], trace_dev
    DickeState final_state;
    double max_trace_dev = 0.0;
    double max_herm_dev = 0.0;
};

// RK4 integration of d rho/dt = gamma D[Sx - i zeta Sy] rho from the
// fully inverted state, with re-symmetrization every step.  Throws
// NumericsError (with the offending time) if an invariant drifts beyond
// tolerance mid-run.
EvolveResult evolve_master(const SqueezedModel& model, const EvolveOptions& opts);

}  // namespace unravel::dicke
