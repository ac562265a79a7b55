// mpo.hpp — matrix product operators realizing the model descriptions
#pragma once

#include <Eigen/Dense>
#include <array>
#include <tuple>
#include <vector>

#include "unravel/model.hpp"

namespace unravel::mps {

// Site tensor stored as the four bond-space blocks W[s_out][s_in]
// (D_left x D_right); site 0 has D_left = 1, site n-1 has D_right = 1.
class Mpo {
  public:
    Mpo() = default;

    int sites() const { return static_cast<int>(w_.size()); }
    int bond_left(int site) const { return static_cast<int>(w_[site][0][0].rows()); }
    int bond_right(int site) const { return static_cast<int>(w_[site][0][0].cols()); }
    int max_bond() const;

    const Eigen::MatrixXcd& block(int site, int s_out, int s_in) const {
        return w_[site][s_out][s_in];
    }
    Eigen::MatrixXcd& block(int site, int s_out, int s_in) { return w_[site][s_out][s_in]; }

    // Identity on n sites (bond 1).
    static Mpo identity(int n);

    // sum_j (lower_j sigma_j^- + raise_j sigma_j^+), bond 2.
    static Mpo site_sum(const SiteSumOperator& op);

    // Hermitian adjoint (swaps s_out/s_in with conjugation).
    Mpo dagger() const;

    // a applied after b (operator product a*b); bond = Da*Db.
    static Mpo product(const Mpo& a, const Mpo& b);

    // sum_{j<l} (gamma/2) sin(k0 |z_j - z_l|) (sigma_j^+ sigma_l^- + h.c.)
    // via the decomposition sin(k0 (z_l - z_j)) = Im[e^{i k0 (z_l - z_j)}]
    // for ascending positions, carrying phase factors along the bond;
    // bond <= 6.  Unsorted positions are sorted internally (the MPO then
    // acts on the position-ordered chain); ties are fine, sin(0) = 0.
    static Mpo waveguide_hamiltonian(const WaveguideModel& model);

    // Dense 2^n x 2^n realization, for small-n verification.
    Eigen::MatrixXcd to_dense() const;

    // Generic finite-state-machine assembly.  transitions[j] holds
    // (from_state, to_state, 2x2 op) for site j; the left boundary
    // selects `start`, the right boundary `end`.
    static Mpo from_automaton(int n, int n_states, int start, int end,
        const std::vector<std::vector<std::tuple<int, int, Eigen::Matrix2cd>>>& transitions);

  private:
    std::vector<std::array<std::array<Eigen::MatrixXcd, 2>, 2>> w_;
};

}  // namespace unravel::mps
