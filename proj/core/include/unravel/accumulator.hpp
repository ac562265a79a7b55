// accumulator.hpp — fixed-order ensemble reduction over trajectories
//
// Trajectory engines emit one TrajectorySamples record per trajectory;
// the accumulator merges them strictly in trajectory-index order, so the
// final numbers are bit-identical for any worker count.
#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <string>
#include <vector>

#include "unravel/observables.hpp"
#include "unravel/series.hpp"

namespace unravel {

// Which observables a trajectory engine must record.
struct ObservableRequest {
    bool rate = true;
    bool entropy_cut = false;  // per-trajectory bipartite entropy at `cut`
    bool pair_info = false;    // pair MI + RDMs for I-tilde / I / residual
    bool moments = false;      // collective moments for the squeezing parameter
    int cut = 1;               // left block size of the bipartition
    int pair_j = 0;            // 0-based site indices of the monitored pair
    int pair_l = 1;
};

// Scalar packing order per sample:
//   sz, [rate], [entropy_cut], [mi_pair],
//   [mx, my, mz, xx, yy, zz, xy, xz, yz]
struct ScalarLayout {
    int n_scalars = 1;
    int rate = -1;
    int entropy = -1;
    int mi_pair = -1;
    int moments = -1;

    explicit ScalarLayout(const ObservableRequest& req);
};

struct TrajectorySamples {
    std::vector<double> scalars;  // n_times * n_scalars
    std::vector<Eigen::Matrix2cd> rho_j, rho_l;
    std::vector<Eigen::Matrix4cd> rho_jl, rho_prod;

    // whole-trajectory diagnostics
    double max_norm_dev = 0.0;       // pre-renormalization |norm - 1|
    double cum_discarded = 0.0;      // cumulative truncation weight (MPS)
    int truncation_warnings = 0;     // steps whose discarded weight broke the threshold
};

struct EnsembleDiagnostics {
    double max_norm_dev = 0.0;
    double max_cum_discarded = 0.0;
    std::size_t flagged_trajectories = 0;  // cum. discarded weight > 1e-3
    std::size_t truncation_warnings = 0;
};

class EnsembleAccumulator {
  public:
    EnsembleAccumulator(const ObservableRequest& req, int n_sites, std::size_t n_times,
                        std::size_t n_traj);

    // Must be called with traj_index = 0, 1, 2, ... in order.
    void add(std::size_t traj_index, const TrajectorySamples& s);

    // Appends the ensemble columns (means + standard errors) to `out`.
    void finalize(ObservableSeries& out) const;

    const EnsembleDiagnostics& diagnostics() const { return diag_; }
    std::size_t n_added() const { return added_; }
    const ScalarLayout& layout() const { return layout_; }

  private:
    std::size_t block_of(std::size_t traj_index) const { return traj_index * n_blocks_ / n_traj_; }

    ObservableRequest req_;
    ScalarLayout layout_;
    int n_sites_;
    std::size_t n_times_;
    std::size_t n_traj_;
    std::size_t n_blocks_;
    std::size_t added_ = 0;

    std::vector<double> sum_, sumsq_;          // n_times * n_scalars
    std::vector<Eigen::Matrix4cd> sum_rho_jl_, sum_rho_prod_;
    std::vector<Eigen::Matrix2cd> sum_rho_j_, sum_rho_l_;
    // per-block partial sums for functional (nonlinear) observables
    std::vector<Eigen::Matrix4cd> blk_rho_jl_, blk_rho_prod_;
    std::vector<double> blk_moments_;  // n_blocks * n_times * 9
    std::vector<std::size_t> blk_count_;
    EnsembleDiagnostics diag_;
};

}  // namespace unravel
