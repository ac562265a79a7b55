#include "unravel/mpo.hpp"

#include <algorithm>
#include <cmath>

#include "unravel/errors.hpp"
#include "unravel/pauli.hpp"

namespace unravel::mps {

int Mpo::max_bond() const {
    int b = 1;
    for (int j = 0; j < sites(); ++j) b = std::max(b, bond_right(j));
    return b;
}

Mpo Mpo::from_automaton(int n, int n_states, int start, int end,
    const std::vector<std::vector<std::tuple<int, int, Eigen::Matrix2cd>>>& transitions) {
    if (static_cast<int>(transitions.size()) != n)
        throw DomainError("Mpo::from_automaton: one transition list per site required");
    Mpo out;
    out.w_.resize(n);
    for (int j = 0; j < n; ++j) {
        const int dl = (j == 0) ? 1 : n_states;
        const int dr = (j == n - 1) ? 1 : n_states;
        for (int s = 0; s < 2; ++s)
            for (int sp = 0; sp < 2; ++sp) out.w_[j][s][sp] = Eigen::MatrixXcd::Zero(dl, dr);
        for (const auto& [from, to, op] : transitions[j]) {
            if (j == 0 && from != start) continue;
            if (j == n - 1 && to != end) continue;
            const int r = (j == 0) ? 0 : from;
            const int c = (j == n - 1) ? 0 : to;
            for (int s = 0; s < 2; ++s)
                for (int sp = 0; sp < 2; ++sp) out.w_[j][s][sp](r, c) += op(s, sp);
        }
    }
    return out;
}

Mpo Mpo::identity(int n) {
    std::vector<std::vector<std::tuple<int, int, Eigen::Matrix2cd>>> tr(n);
    for (int j = 0; j < n; ++j) tr[j].emplace_back(0, 0, pauli::id2());
    return from_automaton(n, 1, 0, 0, tr);
}

Mpo Mpo::site_sum(const SiteSumOperator& op) {
    const int n = op.sites();
    if (n == 1) {
        std::vector<std::vector<std::tuple<int, int, Eigen::Matrix2cd>>> tr(1);
        tr[0].emplace_back(0, 0,
                           Eigen::Matrix2cd(op.lower(0) * pauli::minus() + op.raise(0) * pauli::plus()));
        return from_automaton(1, 1, 0, 0, tr);
    }
    std::vector<std::vector<std::tuple<int, int, Eigen::Matrix2cd>>> tr(n);
    for (int j = 0; j < n; ++j) {
        const Eigen::Matrix2cd oj = op.lower(j) * pauli::minus() + op.raise(j) * pauli::plus();
        tr[j].emplace_back(0, 0, pauli::id2());
        tr[j].emplace_back(1, 1, pauli::id2());
        tr[j].emplace_back(0, 1, oj);
    }
    return from_automaton(n, 2, 0, 1, tr);
}

Mpo Mpo::dagger() const {
    Mpo out;
    out.w_.resize(sites());
    for (int j = 0; j < sites(); ++j)
        for (int s = 0; s < 2; ++s)
            for (int sp = 0; sp < 2; ++sp) out.w_[j][s][sp] = w_[j][sp][s].conjugate();
    return out;
}

Mpo Mpo::product(const Mpo& a, const Mpo& b) {
    if (a.sites() != b.sites()) throw DomainError("Mpo::product: site count mismatch");
    const int n = a.sites();
    Mpo out;
    out.w_.resize(n);
    for (int j = 0; j < n; ++j) {
        const int dl = a.bond_left(j) * b.bond_left(j);
        const int dr = a.bond_right(j) * b.bond_right(j);
        for (int s = 0; s < 2; ++s)
            for (int sp = 0; sp < 2; ++sp) {
                Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dl, dr);
                for (int t = 0; t < 2; ++t) {
                    const auto& wa = a.w_[j][s][t];
                    const auto& wb = b.w_[j][t][sp];
                    for (int ra = 0; ra < wa.rows(); ++ra)
                        for (int ca = 0; ca < wa.cols(); ++ca) {
                            if (wa(ra, ca) == std::complex<double>(0.0, 0.0)) continue;
                            m.block(ra * wb.rows(), ca * wb.cols(), wb.rows(), wb.cols()) +=
                                wa(ra, ca) * wb;
                        }
                }
                out.w_[j][s][sp] = std::move(m);
            }
    }
    return out;
}

Mpo Mpo::waveguide_hamiltonian(const WaveguideModel& model) {
    model.validate();
    const int n = model.n;
    std::vector<double> phi = model.phases;
    std::sort(phi.begin(), phi.end());

    using namespace std::complex_literals;
    const std::complex<double> g4i = model.gamma / (4.0 * 1i);

    if (n == 1) {
        // no pair terms
        std::vector<std::vector<std::tuple<int, int, Eigen::Matrix2cd>>> tr(1);
        tr[0].emplace_back(0, 0, Eigen::Matrix2cd(Eigen::Matrix2cd::Zero()));
        return from_automaton(1, 1, 0, 0, tr);
    }
    // states: 0 idle; 1..4 in-flight phase channels; 5 done
    std::vector<std::vector<std::tuple<int, int, Eigen::Matrix2cd>>> tr(n);
    const Eigen::Matrix2cd sp = pauli::plus(), sm = pauli::minus(), id = pauli::id2();
    for (int j = 0; j < n; ++j) {
        const std::complex<double> em = std::exp(-1i * phi[j]);
        const std::complex<double> ep = std::exp(+1i * phi[j]);
        auto& t = tr[j];
        t.emplace_back(0, 0, id);
        t.emplace_back(5, 5, id);
        for (int c = 1; c <= 4; ++c) t.emplace_back(c, c, id);
        // open legs
        t.emplace_back(0, 1, Eigen::Matrix2cd(em * sp));
        t.emplace_back(0, 2, Eigen::Matrix2cd(ep * sp));
        t.emplace_back(0, 3, Eigen::Matrix2cd(em * sm));
        t.emplace_back(0, 4, Eigen::Matrix2cd(ep * sm));
        // close legs: sin(phi_l - phi_j) = [e^{i(phi_l-phi_j)} - c.c.]/(2i)
        t.emplace_back(1, 5, Eigen::Matrix2cd(2.0 * g4i * ep * sm));
        t.emplace_back(2, 5, Eigen::Matrix2cd(-2.0 * g4i * em * sm));
        t.emplace_back(3, 5, Eigen::Matrix2cd(2.0 * g4i * ep * sp));
        t.emplace_back(4, 5, Eigen::Matrix2cd(-2.0 * g4i * em * sp));
    }
    return from_automaton(n, 6, 0, 5, tr);
}

Eigen::MatrixXcd Mpo::to_dense() const {
    const int n = sites();
    if (n > 12) throw DomainError("Mpo::to_dense: too many sites");
    const long dim = 1L << n;
    // grow left to right; rows indexed by (out_bits, in_bits), cols by bond
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Ones(1, 1);
    long d_part = 1;
    for (int j = 0; j < n; ++j) {
        const int dr = bond_right(j);
        Eigen::MatrixXcd next = Eigen::MatrixXcd::Zero(d_part * d_part * 4, dr);
        for (int s = 0; s < 2; ++s)
            for (int sp = 0; sp < 2; ++sp) {
                const auto& w = w_[j][s][sp];
                for (long o = 0; o < d_part; ++o)
                    for (long i = 0; i < d_part; ++i) {
                        // site j contributes bit j of the dense index
                        const long row_old = o * d_part + i;
                        const long row_new = (o + (static_cast<long>(s) << j)) * (d_part * 2) +
                                             (i + (static_cast<long>(sp) << j));
                        next.row(row_new) += acc.row(row_old) * w;
                    }
            }
        acc = std::move(next);
        d_part *= 2;
    }
    Eigen::MatrixXcd out(dim, dim);
    for (long o = 0; o < dim; ++o)
        for (long i = 0; i < dim; ++i) out(o, i) = acc(o * dim + i, 0);
    return out;
}

}  // namespace unravel::mps
