#include "unravel/accumulator.hpp"

#include <cmath>
#include <limits>

#include "unravel/errors.hpp"

namespace unravel {

ScalarLayout::ScalarLayout(const ObservableRequest& req) {
    int k = 1;  // sz first
    if (req.rate) rate = k++;
    if (req.entropy_cut) entropy = k++;
    if (req.pair_info) mi_pair = k++;
    if (req.moments) {
        moments = k;
        k += 9;
    }
    n_scalars = k;
}

EnsembleAccumulator::EnsembleAccumulator(const ObservableRequest& req, int n_sites,
                                         std::size_t n_times, std::size_t n_traj)
    : req_(req),
      layout_(req),
      n_sites_(n_sites),
      n_times_(n_times),
      n_traj_(n_traj),
      n_blocks_(std::min<std::size_t>(20, n_traj)) {
    if (n_traj_ == 0) throw DomainError("EnsembleAccumulator: need at least one trajectory");
    sum_.assign(n_times_ * layout_.n_scalars, 0.0);
    sumsq_.assign(n_times_ * layout_.n_scalars, 0.0);
    if (req_.pair_info) {
        sum_rho_jl_.assign(n_times_, Eigen::Matrix4cd::Zero());
        sum_rho_prod_.assign(n_times_, Eigen::Matrix4cd::Zero());
        sum_rho_j_.assign(n_times_, Eigen::Matrix2cd::Zero());
        sum_rho_l_.assign(n_times_, Eigen::Matrix2cd::Zero());
        blk_rho_jl_.assign(n_blocks_ * n_times_, Eigen::Matrix4cd::Zero());
        blk_rho_prod_.assign(n_blocks_ * n_times_, Eigen::Matrix4cd::Zero());
    }
    if (req_.moments) blk_moments_.assign(n_blocks_ * n_times_ * 9, 0.0);
    blk_count_.assign(n_blocks_, 0);
}

void EnsembleAccumulator::add(std::size_t traj_index, const TrajectorySamples& s) {
    if (traj_index != added_)
        throw NumericsError("EnsembleAccumulator: trajectories must be merged in index order");
    if (s.scalars.size() != n_times_ * layout_.n_scalars)
        throw NumericsError("EnsembleAccumulator: trajectory record has wrong shape");
    ++added_;

    const std::size_t blk = block_of(traj_index);
    ++blk_count_[blk];
    for (std::size_t i = 0; i < s.scalars.size(); ++i) {
        sum_[i] += s.scalars[i];
        sumsq_[i] += s.scalars[i] * s.scalars[i];
    }
    if (req_.pair_info) {
        for (std::size_t k = 0; k < n_times_; ++k) {
            sum_rho_jl_[k] += s.rho_jl[k];
            sum_rho_prod_[k] += s.rho_prod[k];
            sum_rho_j_[k] += s.rho_j[k];
            sum_rho_l_[k] += s.rho_l[k];
            blk_rho_jl_[blk * n_times_ + k] += s.rho_jl[k];
            blk_rho_prod_[blk * n_times_ + k] += s.rho_prod[k];
        }
    }
    if (req_.moments) {
        const int b = layout_.moments;
        for (std::size_t k = 0; k < n_times_; ++k)
            for (int m = 0; m < 9; ++m)
                blk_moments_[(blk * n_times_ + k) * 9 + m] +=
                    s.scalars[k * layout_.n_scalars + b + m];
    }

    diag_.max_norm_dev = std::max(diag_.max_norm_dev, s.max_norm_dev);
    diag_.max_cum_discarded = std::max(diag_.max_cum_discarded, s.cum_discarded);
    diag_.truncation_warnings += s.truncation_warnings;
    if (s.cum_discarded > 1e-3) ++diag_.flagged_trajectories;
}

namespace {

double std_error(double sum, double sumsq, std::size_t n) {
    if (n < 2) return 0.0;
    const double mean = sum / n;
    const double var = std::max(0.0, sumsq / n - mean * mean) * (double(n) / double(n - 1));
    return std::sqrt(var / n);
}

// standard error of the full-ensemble estimate from per-block estimates
double block_error(const std::vector<double>& blocks) {
    const std::size_t k = blocks.size();
    if (k < 2) return 0.0;
    double m = 0.0;
    for (double b : blocks) m += b;
    m /= k;
    double v = 0.0;
    for (double b : blocks) v += (b - m) * (b - m);
    v /= (k - 1);
    return std::sqrt(v / k);
}

}  // namespace

void EnsembleAccumulator::finalize(ObservableSeries& out) const {
    if (added_ != n_traj_) throw NumericsError("EnsembleAccumulator: not all trajectories merged");
    const std::size_t n = n_traj_;
    const int ns = layout_.n_scalars;
    const double dn = static_cast<double>(n);

    auto scalar_col = [&](int slot, const std::string& name, double scale) {
        auto& c = out.add(name, true);
        for (std::size_t k = 0; k < n_times_; ++k) {
            c.value.push_back(scale * sum_[k * ns + slot] / dn);
            c.error.push_back(scale * std_error(sum_[k * ns + slot], sumsq_[k * ns + slot], n));
        }
    };

    scalar_col(0, "sz_over_n", 1.0 / n_sites_);
    if (req_.rate) scalar_col(layout_.rate, "rate_over_n", 1.0 / n_sites_);
    if (req_.entropy_cut) scalar_col(layout_.entropy, "s_tilde", 1.0);
    if (req_.pair_info) {
        scalar_col(layout_.mi_pair, "i_tilde", 1.0);

        auto& ia = out.add("i_avg", true);
        auto& fr = out.add("fact_resid", true);
        for (std::size_t k = 0; k < n_times_; ++k) {
            const Eigen::Matrix4cd mean_jl = sum_rho_jl_[k] / dn;
            const Eigen::Matrix4cd mean_prod = sum_rho_prod_[k] / dn;
            ia.value.push_back(obs::mutual_information(mean_jl, 2, 2));
            fr.value.push_back(obs::trace_norm_hermitian(mean_jl - mean_prod));

            std::vector<double> bi, bf;
            for (std::size_t blk = 0; blk < n_blocks_; ++blk) {
                if (blk_count_[blk] == 0) continue;
                const double bc = static_cast<double>(blk_count_[blk]);
                const Eigen::Matrix4cd bjl = blk_rho_jl_[blk * n_times_ + k] / bc;
                const Eigen::Matrix4cd bpr = blk_rho_prod_[blk * n_times_ + k] / bc;
                bi.push_back(obs::mutual_information(bjl, 2, 2));
                bf.push_back(obs::trace_norm_hermitian(bjl - bpr));
            }
            ia.error.push_back(block_error(bi));
            fr.error.push_back(block_error(bf));
        }
    }

    if (req_.moments) {
        auto& c = out.add("xi_r2", true);
        for (std::size_t k = 0; k < n_times_; ++k) {
            obs::CollectiveMoments m;
            m.n = n_sites_;
            const int b = layout_.moments;
            m.mean << sum_[k * ns + b] / dn, sum_[k * ns + b + 1] / dn, sum_[k * ns + b + 2] / dn;
            const double xx = sum_[k * ns + b + 3] / dn, yy = sum_[k * ns + b + 4] / dn,
                         zz = sum_[k * ns + b + 5] / dn, xy = sum_[k * ns + b + 6] / dn,
                         xz = sum_[k * ns + b + 7] / dn, yz = sum_[k * ns + b + 8] / dn;
            m.second_sym << xx, xy, xz, xy, yy, yz, xz, yz, zz;
            double xi = std::numeric_limits<double>::quiet_NaN();
            try {
                xi = obs::spin_squeezing(m);
            } catch (const DomainError&) {
                // mean spin vanished at this sample; leave NaN
            }
            c.value.push_back(xi);

            std::vector<double> bx;
            for (std::size_t blk = 0; blk < n_blocks_; ++blk) {
                if (blk_count_[blk] == 0) continue;
                const double bc = static_cast<double>(blk_count_[blk]);
                obs::CollectiveMoments bm;
                bm.n = n_sites_;
                const double* p = &blk_moments_[(blk * n_times_ + k) * 9];
                bm.mean << p[0] / bc, p[1] / bc, p[2] / bc;
                bm.second_sym << p[3] / bc, p[6] / bc, p[7] / bc, p[6] / bc, p[4] / bc, p[8] / bc,
                    p[7] / bc, p[8] / bc, p[5] / bc;
                try {
                    bx.push_back(obs::spin_squeezing(bm));
                } catch (const DomainError&) {
                }
            }
            c.error.push_back(block_error(bx));
        }
    }
}

}  // namespace unravel
