// mps.hpp — matrix-product-state trajectories with bond truncation
#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <vector>

#include "unravel/accumulator.hpp"
#include "unravel/model.hpp"
#include "unravel/mpo.hpp"
#include "unravel/noise.hpp"

namespace unravel::mps {

// Site tensors a[site][s] of shape (bond_left x bond_right), physical
// dimension 2.  Site j of the chain is bit j of the dense amplitude
// index.
class Mps {
  public:
    Mps() = default;

    static Mps product_state(int n, const std::vector<int>& bits);
    static Mps inverted(int n);
    // exact successive-SVD factorization (test / small-n use)
    static Mps from_dense(const Eigen::VectorXcd& psi, int n);

    int sites() const { return static_cast<int>(a_.size()); }
    int bond_right(int site) const { return static_cast<int>(a_[site][0].cols()); }
    int max_bond() const;

    const Eigen::MatrixXcd& tensor(int site, int s) const { return a_[site][s]; }
    Eigen::MatrixXcd& tensor(int site, int s) { return a_[site][s]; }

    double norm() const;
    void scale(std::complex<double> c);
    void normalize();

    // |psi> <- op |psi>, exact (bond multiplies by the MPO bond)
    void apply_mpo(const Mpo& op);

    // Direct-sum addition of MPSs (coefficients folded into the terms).
    static Mps sum(const std::vector<Mps>& terms);

    // One left-to-right orthogonalization sweep (QR, no truncation)
    // followed by one right-to-left SVD sweep truncating every bond to
    // max_bond, keeping the largest singular values.  Leaves the state
    // right-canonical.  Returns the discarded weight (sum over bonds of
    // dropped lambda^2 / total); if norm_before is non-null it receives
    // the exact pre-truncation norm.
    double compress(int max_bond, double* norm_before = nullptr);

    std::complex<double> expectation(const Mpo& op) const;  // <psi|O|psi>
    std::complex<double> overlap(const Mps& other) const;   // <psi|other>

    // Schmidt values across bond `cut` (left block = sites 0..cut-1).
    std::vector<double> schmidt_values(int cut) const;
    // von Neumann entropy of the cut, in bits
    double entropy_at_cut(int cut) const;

    Eigen::Matrix2cd one_site_rdm(int j) const;
    // 4x4 reduced density matrix of sites (j, l), j < l; site j is the
    // most significant bit of the reduced index
    Eigen::Matrix4cd two_site_rdm(int j, int l) const;
    // <sigma_j^z> for every site in one sweep
    std::vector<double> site_z_expectations() const;

    Eigen::VectorXcd to_dense() const;  // small n only

  private:
    void right_canonicalize();  // QR sweep from the right, no truncation

    std::vector<std::array<Eigen::MatrixXcd, 2>> a_;
};

double schmidt_entropy(const Mps& psi, int cut);  // = psi.entropy_at_cut(cut)

// sum_j (lower_j sigma_j^- + raise_j sigma_j^+) as a bond-2 MPO
Mpo mpo_from_sitesum(const SiteSumOperator& op);
// coherent photon-mediated pair couplings as a bond-<=6 MPO
Mpo mpo_waveguide_hamiltonian(const WaveguideModel& model);

// The full Euler-Maruyama step operator
//   c_id * 1 + sum_k [(e_k^* dt + dW_k) J_k - dt/2 J_k^dag J_k] - i dt H,
//   c_id = 1 - sum_k (|e_k|^2 dt / 2 + e_k dW_k),
// assembled as one finite-state-machine MPO (bond 4) whose scalar
// coefficients are refreshed in place every step.
class StepOperator {
  public:
    explicit StepOperator(const AnyModel& model);

    // e[k] = <J_k>; dw[k] the channel noises for this step
    void refresh(const std::vector<std::complex<double>>& e,
                 const std::vector<std::complex<double>>& dw, double dt);

    const Mpo& mpo() const { return mpo_; }
    int channels() const { return static_cast<int>(jump_mpos_.size()); }
    const Mpo& jump_mpo(int k) const { return jump_mpos_[k]; }

  private:
    int n_ = 0;
    bool squeezed_ = true;
    // squeezed: per-site op O and O^dag O; waveguide: per-site weights
    Eigen::Matrix2cd op_, opdag_, opdagop_;
    std::vector<std::vector<std::complex<double>>> w_;  // [channel][site]
    std::vector<double> wsq_sum_;                       // sum_k |w_kj|^2 per site
    double gamma_ = 0.0;
    std::vector<double> phases_;
    Mpo mpo_;
    std::vector<Mpo> jump_mpos_;
};

struct MpsTrajectoryOptions {
    double dt = 0.0;
    long n_steps = 0;
    int sample_every = 1;
    int bond_dim = 1;
    double step_trunc_warn = 1e-4;  // per-step discarded-weight warning threshold
    ObservableRequest req;
};

TrajectorySamples run_trajectory(const AnyModel& model, const MpsTrajectoryOptions& opt,
                                 NoiseStream stream);

}  // namespace unravel::mps
