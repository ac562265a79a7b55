#include "unravel/mps.hpp"

#include <algorithm>
#include <cmath>

#include "unravel/errors.hpp"
#include "unravel/linalg.hpp"
#include "unravel/observables.hpp"
#include "unravel/pauli.hpp"

namespace unravel::mps {

using Eigen::MatrixXcd;
using Eigen::VectorXd;
using std::complex;

Mps Mps::product_state(int n, const std::vector<int>& bits) {
    if (static_cast<int>(bits.size()) != n)
        throw DomainError("Mps::product_state: one basis bit per site required");
    Mps psi;
    psi.a_.resize(n);
    for (int j = 0; j < n; ++j)
        for (int s = 0; s < 2; ++s)
            psi.a_[j][s] = MatrixXcd::Constant(1, 1, s == bits[j] ? 1.0 : 0.0);
    return psi;
}

Mps Mps::inverted(int n) { return product_state(n, std::vector<int>(n, 1)); }

Mps Mps::from_dense(const Eigen::VectorXcd& psi, int n) {
    if (psi.size() != (1L << n)) throw DomainError("Mps::from_dense: dimension mismatch");
    Mps out;
    out.a_.resize(n);
    // carry(c, rest): bond index c against the not-yet-factorized bits
    MatrixXcd carry = psi.transpose();  // 1 x 2^n, rest = full index
    long rest_dim = 1L << n;
    int chi = 1;
    for (int j = 0; j < n - 1; ++j) {
        rest_dim /= 2;
        // rows (c, b), cols rest
        MatrixXcd m(chi * 2, rest_dim);
        for (int b = 0; b < 2; ++b)
            for (long r = 0; r < rest_dim; ++r)
                m.block(b * chi, r, chi, 1) = carry.col(b + 2 * r);
        MatrixXcd u, vd;
        VectorXd s;
        linalg::svd_thin(m, u, s, vd);
        const int k = static_cast<int>(s.size());
        for (int b = 0; b < 2; ++b) out.a_[j][b] = u.middleRows(b * chi, chi);
        carry = s.asDiagonal() * vd;
        chi = k;
    }
    for (int b = 0; b < 2; ++b) out.a_[n - 1][b] = carry.col(b);
    return out;
}

int Mps::max_bond() const {
    int b = 1;
    for (int j = 0; j + 1 < sites(); ++j) b = std::max(b, bond_right(j));
    return b;
}

double Mps::norm() const {
    MatrixXcd e = MatrixXcd::Ones(1, 1);
    for (int j = 0; j < sites(); ++j) {
        MatrixXcd next = MatrixXcd::Zero(a_[j][0].cols(), a_[j][0].cols());
        for (int s = 0; s < 2; ++s) next += a_[j][s].adjoint() * e * a_[j][s];
        e = std::move(next);
    }
    return std::sqrt(std::abs(e(0, 0).real()));
}

void Mps::scale(complex<double> c) {
    for (int s = 0; s < 2; ++s) a_[0][s] *= c;
}

void Mps::normalize() {
    const double nrm = norm();
    if (nrm < 1e-300) throw NumericsError("Mps::normalize: zero state");
    scale(1.0 / nrm);
}

void Mps::apply_mpo(const Mpo& op) {
    if (op.sites() != sites()) throw DomainError("Mps::apply_mpo: site count mismatch");
    for (int j = 0; j < sites(); ++j) {
        const int dl = op.bond_left(j), dr = op.bond_right(j);
        const long cl = a_[j][0].rows(), cr = a_[j][0].cols();
        std::array<MatrixXcd, 2> out;
        for (int s = 0; s < 2; ++s) {
            out[s] = MatrixXcd::Zero(dl * cl, dr * cr);
            for (int sp = 0; sp < 2; ++sp) {
                const MatrixXcd& w = op.block(j, s, sp);
                for (int r = 0; r < dl; ++r)
                    for (int c = 0; c < dr; ++c) {
                        const complex<double> val = w(r, c);
                        if (val == complex<double>(0.0, 0.0)) continue;
                        out[s].block(r * cl, c * cr, cl, cr) += val * a_[j][sp];
                    }
            }
        }
        a_[j] = std::move(out);
    }
}

Mps Mps::sum(const std::vector<Mps>& terms) {
    if (terms.empty()) throw DomainError("Mps::sum: no terms");
    const int n = terms[0].sites();
    for (const auto& t : terms)
        if (t.sites() != n) throw DomainError("Mps::sum: site count mismatch");
    if (terms.size() == 1) return terms[0];

    Mps out;
    out.a_.resize(n);
    for (int j = 0; j < n; ++j) {
        long rl = 0, rc = 0;
        for (const auto& t : terms) {
            rl += t.a_[j][0].rows();
            rc += t.a_[j][0].cols();
        }
        for (int s = 0; s < 2; ++s) {
            if (n == 1) {
                out.a_[j][s] = MatrixXcd::Zero(1, 1);
                for (const auto& t : terms) out.a_[j][s] += t.a_[j][s];
            } else if (j == 0) {
                out.a_[j][s] = MatrixXcd::Zero(1, rc);
                long c0 = 0;
                for (const auto& t : terms) {
                    out.a_[j][s].block(0, c0, 1, t.a_[j][s].cols()) = t.a_[j][s];
                    c0 += t.a_[j][s].cols();
                }
            } else if (j == n - 1) {
                out.a_[j][s] = MatrixXcd::Zero(rl, 1);
                long r0 = 0;
                for (const auto& t : terms) {
                    out.a_[j][s].block(r0, 0, t.a_[j][s].rows(), 1) = t.a_[j][s];
                    r0 += t.a_[j][s].rows();
                }
            } else {
                out.a_[j][s] = MatrixXcd::Zero(rl, rc);
                long r0 = 0, c0 = 0;
                for (const auto& t : terms) {
                    out.a_[j][s].block(r0, c0, t.a_[j][s].rows(), t.a_[j][s].cols()) = t.a_[j][s];
                    r0 += t.a_[j][s].rows();
                    c0 += t.a_[j][s].cols();
                }
            }
        }
    }
    return out;
}

double Mps::compress(int max_bond, double* norm_before) {
    if (max_bond < 1) throw DomainError("Mps::compress: bond must be >= 1");
    const int n = sites();

    // left-to-right orthogonalization (no truncation)
    for (int j = 0; j + 1 < n; ++j) {
        const long cl = a_[j][0].rows(), cr = a_[j][0].cols();
        MatrixXcd stacked(2 * cl, cr);
        stacked.topRows(cl) = a_[j][0];
        stacked.bottomRows(cl) = a_[j][1];
        MatrixXcd q, r;
        linalg::qr_thin(stacked, q, r);
        const long k = q.cols();
        a_[j][0] = q.topRows(cl);
        a_[j][1] = q.bottomRows(cl);
        for (int s = 0; s < 2; ++s) a_[j + 1][s] = (r * a_[j + 1][s]).eval();
        (void)k;
    }
    {
        const double nb = std::sqrt(a_[n - 1][0].squaredNorm() + a_[n - 1][1].squaredNorm());
        if (norm_before) *norm_before = nb;
    }

    // right-to-left SVD truncation
    double discarded = 0.0;
    for (int j = n - 1; j >= 1; --j) {
        const long cl = a_[j][0].rows(), cr = a_[j][0].cols();
        MatrixXcd side(cl, 2 * cr);
        side.leftCols(cr) = a_[j][0];
        side.rightCols(cr) = a_[j][1];
        MatrixXcd u, vd;
        VectorXd s;
        linalg::svd_thin(side, u, s, vd);
        int keep = std::min<int>(max_bond, static_cast<int>(s.size()));
        while (keep > 1 && s(keep - 1) <= 0.0) --keep;
        const double total = s.squaredNorm();
        if (total > 0.0) discarded += 1.0 - s.head(keep).squaredNorm() / total;
        a_[j][0] = vd.block(0, 0, keep, cr);
        a_[j][1] = vd.block(0, cr, keep, cr);
        const MatrixXcd carry = u.leftCols(keep) * s.head(keep).asDiagonal();
        for (int sp = 0; sp < 2; ++sp) a_[j - 1][sp] = (a_[j - 1][sp] * carry).eval();
    }
    return discarded;
}

void Mps::right_canonicalize() {
    const int n = sites();
    for (int j = n - 1; j >= 1; --j) {
        const long cl = a_[j][0].rows(), cr = a_[j][0].cols();
        MatrixXcd side(cl, 2 * cr);
        side.leftCols(cr) = a_[j][0];
        side.rightCols(cr) = a_[j][1];
        MatrixXcd q, r;
        linalg::qr_thin(side.adjoint(), q, r);  // side = r^dag q^dag
        const long k = q.cols();
        const MatrixXcd qd = q.adjoint();  // k x 2cr
        a_[j][0] = qd.leftCols(cr);
        a_[j][1] = qd.rightCols(cr);
        const MatrixXcd carry = r.adjoint();  // cl x k
        for (int s = 0; s < 2; ++s) a_[j - 1][s] = (a_[j - 1][s] * carry).eval();
        (void)k;
    }
}

std::complex<double> Mps::expectation(const Mpo& op) const {
    if (op.sites() != sites()) throw DomainError("Mps::expectation: site count mismatch");
    const int n = sites();
    // l[w](bra, ket)
    std::vector<MatrixXcd> l(1, MatrixXcd::Ones(1, 1));
    for (int j = 0; j < n; ++j) {
        const int dr = op.bond_right(j);
        const long cr = a_[j][0].cols();
        std::vector<MatrixXcd> lnext(dr, MatrixXcd::Zero(cr, cr));
        for (int sp = 0; sp < 2; ++sp) {
            std::vector<MatrixXcd> la(l.size());
            for (std::size_t w = 0; w < l.size(); ++w) la[w] = l[w] * a_[j][sp];
            for (int s = 0; s < 2; ++s) {
                const MatrixXcd& wm = op.block(j, s, sp);
                const MatrixXcd ad = a_[j][s].adjoint();
                for (int w = 0; w < wm.rows(); ++w)
                    for (int wp = 0; wp < wm.cols(); ++wp) {
                        const complex<double> val = wm(w, wp);
                        if (val == complex<double>(0.0, 0.0)) continue;
                        lnext[wp] += val * (ad * la[w]);
                    }
            }
        }
        l = std::move(lnext);
    }
    return l[0](0, 0);
}

std::complex<double> Mps::overlap(const Mps& other) const {
    if (other.sites() != sites()) throw DomainError("Mps::overlap: site count mismatch");
    MatrixXcd e = MatrixXcd::Ones(1, 1);
    for (int j = 0; j < sites(); ++j) {
        MatrixXcd next = MatrixXcd::Zero(a_[j][0].cols(), other.a_[j][0].cols());
        for (int s = 0; s < 2; ++s) next += a_[j][s].adjoint() * e * other.a_[j][s];
        e = std::move(next);
    }
    return e(0, 0);
}

std::vector<double> Mps::schmidt_values(int cut) const {
    if (cut < 1 || cut >= sites())
        throw DomainError("Mps::schmidt_values: cut must split the chain");
    Mps tmp = *this;
    tmp.right_canonicalize();
    MatrixXcd carry;  // R factor flowing right
    for (int j = 0; j < cut; ++j) {
        const long cl = tmp.a_[j][0].rows(), cr = tmp.a_[j][0].cols();
        MatrixXcd stacked(2 * cl, cr);
        stacked.topRows(cl) = tmp.a_[j][0];
        stacked.bottomRows(cl) = tmp.a_[j][1];
        MatrixXcd q, r;
        linalg::qr_thin(stacked, q, r);
        tmp.a_[j][0] = q.topRows(cl);
        tmp.a_[j][1] = q.bottomRows(cl);
        if (j + 1 < sites())
            for (int s = 0; s < 2; ++s) tmp.a_[j + 1][s] = (r * tmp.a_[j + 1][s]).eval();
        carry = r;
    }
    Eigen::JacobiSVD<MatrixXcd> svd(carry);
    VectorXd s = svd.singularValues();
    const double nrm = s.norm();
    std::vector<double> out(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i) out[i] = nrm > 0 ? s(i) / nrm : 0.0;
    return out;
}

double Mps::entropy_at_cut(int cut) const { return obs::entropy_from_schmidt(schmidt_values(cut)); }

double schmidt_entropy(const Mps& psi, int cut) { return psi.entropy_at_cut(cut); }

namespace {

// environment caches: e[j] closes sites 0..j-1 (bra, ket);
// f[j] closes sites j..n-1 (ket, bra)
std::vector<MatrixXcd> left_envs(const std::vector<std::array<MatrixXcd, 2>>& a) {
    const int n = static_cast<int>(a.size());
    std::vector<MatrixXcd> e(n + 1);
    e[0] = MatrixXcd::Ones(1, 1);
    for (int j = 0; j < n; ++j) {
        e[j + 1] = MatrixXcd::Zero(a[j][0].cols(), a[j][0].cols());
        for (int s = 0; s < 2; ++s) e[j + 1] += a[j][s].adjoint() * e[j] * a[j][s];
    }
    return e;
}

std::vector<MatrixXcd> right_envs(const std::vector<std::array<MatrixXcd, 2>>& a) {
    const int n = static_cast<int>(a.size());
    std::vector<MatrixXcd> f(n + 1);
    f[n] = MatrixXcd::Ones(1, 1);
    for (int j = n - 1; j >= 0; --j) {
        f[j] = MatrixXcd::Zero(a[j][0].rows(), a[j][0].rows());
        for (int s = 0; s < 2; ++s) f[j] += a[j][s] * f[j + 1] * a[j][s].adjoint();
    }
    return f;
}

}  // namespace

Eigen::Matrix2cd Mps::one_site_rdm(int j) const {
    const auto e = left_envs(a_);
    const auto f = right_envs(a_);
    const double nrm2 = std::abs(e[sites()](0, 0).real());
    Eigen::Matrix2cd rho;
    for (int s = 0; s < 2; ++s)
        for (int sp = 0; sp < 2; ++sp)
            rho(s, sp) = (a_[j][sp].adjoint() * e[j] * a_[j][s] * f[j + 1]).trace() / nrm2;
    return rho;
}

Eigen::Matrix4cd Mps::two_site_rdm(int j, int l) const {
    if (!(j < l)) throw DomainError("Mps::two_site_rdm: need j < l");
    const auto e = left_envs(a_);
    const auto f = right_envs(a_);
    const double nrm2 = std::abs(e[sites()](0, 0).real());

    // m[s][sp] carries the open physical indices of site j rightward
    std::array<std::array<MatrixXcd, 2>, 2> m;
    for (int s = 0; s < 2; ++s)
        for (int sp = 0; sp < 2; ++sp) m[s][sp] = a_[j][sp].adjoint() * e[j] * a_[j][s];
    for (int mid = j + 1; mid < l; ++mid)
        for (int s = 0; s < 2; ++s)
            for (int sp = 0; sp < 2; ++sp) {
                MatrixXcd next = MatrixXcd::Zero(a_[mid][0].cols(), a_[mid][0].cols());
                for (int t = 0; t < 2; ++t) next += a_[mid][t].adjoint() * m[s][sp] * a_[mid][t];
                m[s][sp] = std::move(next);
            }

    Eigen::Matrix4cd rho;
    for (int s = 0; s < 2; ++s)
        for (int t = 0; t < 2; ++t)
            for (int sp = 0; sp < 2; ++sp)
                for (int tp = 0; tp < 2; ++tp)
                    rho(2 * s + t, 2 * sp + tp) =
                        (a_[l][tp].adjoint() * m[s][sp] * a_[l][t] * f[l + 1]).trace() / nrm2;
    return rho;
}

std::vector<double> Mps::site_z_expectations() const {
    const int n = sites();
    const auto e = left_envs(a_);
    const auto f = right_envs(a_);
    const double nrm2 = std::abs(e[n](0, 0).real());
    std::vector<double> out(n);
    for (int j = 0; j < n; ++j) {
        double v = 0.0;
        for (int s = 0; s < 2; ++s) {
            const double zs = s == 1 ? 1.0 : -1.0;
            v += zs * (a_[j][s].adjoint() * e[j] * a_[j][s] * f[j + 1]).trace().real();
        }
        out[j] = v / nrm2;
    }
    return out;
}

Eigen::VectorXcd Mps::to_dense() const {
    const int n = sites();
    if (n > 24) throw DomainError("Mps::to_dense: too many sites");
    MatrixXcd v = MatrixXcd::Ones(1, 1);
    for (int j = 0; j < n; ++j) {
        const long rows = 1L << j;
        const long cr = a_[j][0].cols();
        MatrixXcd next(rows * 2, cr);
        next.topRows(rows) = v * a_[j][0];
        next.bottomRows(rows) = v * a_[j][1];
        v = std::move(next);
    }
    return v.col(0);
}

Mpo mpo_from_sitesum(const SiteSumOperator& op) { return Mpo::site_sum(op); }

Mpo mpo_waveguide_hamiltonian(const WaveguideModel& model) {
    return Mpo::waveguide_hamiltonian(model);
}

StepOperator::StepOperator(const AnyModel& model) {
    n_ = n_sites(model);
    const RealizedOperators ops = realize_operators(model);
    for (const auto& jmp : ops.jumps) jump_mpos_.push_back(Mpo::site_sum(jmp));
    if (const auto* s = as_squeezed(model)) {
        squeezed_ = true;
        gamma_ = s->gamma;
        op_ = ops.jumps[0].lower(0) * pauli::minus() + ops.jumps[0].raise(0) * pauli::plus();
        opdag_ = op_.adjoint();
        opdagop_ = opdag_ * op_;
    } else {
        squeezed_ = false;
        const auto* w = as_waveguide(model);
        gamma_ = w->gamma;
        phases_ = w->phases;
        for (std::size_t k = 1; k < phases_.size(); ++k)
            if (phases_[k] < phases_[k - 1])
                throw DomainError("StepOperator: waveguide phases must be ascending (chain order)");
        w_.resize(ops.jumps.size());
        wsq_sum_.assign(n_, 0.0);
        for (std::size_t k = 0; k < ops.jumps.size(); ++k) {
            w_[k].resize(n_);
            for (int j = 0; j < n_; ++j) {
                w_[k][j] = ops.jumps[k].lower(j);
                wsq_sum_[j] += std::norm(w_[k][j]);
            }
        }
    }
}

void StepOperator::refresh(const std::vector<complex<double>>& e,
                           const std::vector<complex<double>>& dw, double dt) {
    using namespace std::complex_literals;
    complex<double> c_id = 1.0;
    for (std::size_t k = 0; k < e.size(); ++k) c_id -= 0.5 * std::norm(e[k]) * dt + e[k] * dw[k];
    const double beta = -0.5 * dt;
    const Eigen::Matrix2cd id = pauli::id2();
    const Eigen::Matrix2cd sp = pauli::plus(), sm = pauli::minus();
    const Eigen::Matrix2cd spm = sp * sm;  // |1><1|

    std::vector<std::vector<std::tuple<int, int, Eigen::Matrix2cd>>> tr(n_);
    if (squeezed_) {
        const complex<double> alpha = std::conj(e[0]) * dt + dw[0];
        const Eigen::Matrix2cd payload = (c_id / double(n_)) * id + alpha * op_ + beta * opdagop_;
        for (int j = 0; j < n_; ++j) {
            auto& t = tr[j];
            t.emplace_back(0, 0, id);
            t.emplace_back(3, 3, id);
            t.emplace_back(1, 1, id);
            t.emplace_back(2, 2, id);
            t.emplace_back(0, 3, payload);
            t.emplace_back(0, 1, opdag_);
            t.emplace_back(1, 3, Eigen::Matrix2cd(beta * op_));
            t.emplace_back(0, 2, op_);
            t.emplace_back(2, 3, Eigen::Matrix2cd(beta * opdag_));
        }
    } else {
        // per pair j < l both sigma_j^+ sigma_l^- and sigma_j^- sigma_l^+
        // carry -(gamma dt / 2) e^{i (phi_l - phi_j)}: the dissipative
        // (cos) and Hamiltonian (-i sin) parts of the step share one
        // phase channel
        for (int j = 0; j < n_; ++j) {
            complex<double> alpha_sum = 0.0;
            for (std::size_t k = 0; k < e.size(); ++k)
                alpha_sum += (std::conj(e[k]) * dt + dw[k]) * w_[k][j];
            const Eigen::Matrix2cd payload =
                (c_id / double(n_)) * id + alpha_sum * sm + beta * wsq_sum_[j] * spm;
            const complex<double> em = std::exp(-1i * phases_[j]);
            const complex<double> close = -0.5 * gamma_ * dt * std::exp(1i * phases_[j]);
            auto& t = tr[j];
            t.emplace_back(0, 0, id);
            t.emplace_back(3, 3, id);
            t.emplace_back(1, 1, id);
            t.emplace_back(2, 2, id);
            t.emplace_back(0, 3, payload);
            t.emplace_back(0, 1, Eigen::Matrix2cd(em * sp));
            t.emplace_back(1, 3, Eigen::Matrix2cd(close * sm));
            t.emplace_back(0, 2, Eigen::Matrix2cd(em * sm));
            t.emplace_back(2, 3, Eigen::Matrix2cd(close * sp));
        }
    }
    mpo_ = Mpo::from_automaton(n_, 4, 0, 3, tr);
}

namespace {

Mpo site_uniform_mpo(int n, const Eigen::Matrix2cd& op) {
    std::vector<std::vector<std::tuple<int, int, Eigen::Matrix2cd>>> tr(n);
    if (n == 1) {
        tr[0].emplace_back(0, 0, op);
        return Mpo::from_automaton(1, 1, 0, 0, tr);
    }
    for (int j = 0; j < n; ++j) {
        tr[j].emplace_back(0, 0, pauli::id2());
        tr[j].emplace_back(1, 1, pauli::id2());
        tr[j].emplace_back(0, 1, op);
    }
    return Mpo::from_automaton(n, 2, 0, 1, tr);
}

struct MpsSampleContext {
    const ObservableRequest* req = nullptr;
    const ScalarLayout* layout = nullptr;
    int n = 0;
    bool squeezed = true;
    double gamma = 0.0, zeta = 0.0;
    // prebuilt observable MPOs
    Mpo sxsx, sysy, szsz, sxsy, sxsz, sysz, sx, sy;   // collective moments
    Mpo rate_r, rate_l;                                // waveguide J^dag J
};

void mps_sample(const Mps& psi, MpsSampleContext& c, TrajectorySamples& out) {
    const auto& lay = *c.layout;
    const std::size_t base = out.scalars.size();
    out.scalars.resize(base + lay.n_scalars, 0.0);

    const std::vector<double> zj = psi.site_z_expectations();
    double sz = 0.0;
    for (double z : zj) sz += 0.5 * z;
    out.scalars[base + 0] = sz;

    const bool need_xy2 = c.req->moments || (c.req->rate && c.squeezed);
    double xx = 0.0, yy = 0.0;
    if (need_xy2) {
        xx = psi.expectation(c.sxsx).real();
        yy = psi.expectation(c.sysy).real();
    }

    if (c.req->rate) {
        double rate;
        if (c.squeezed) {
            rate = obs::squeezed_rate_collective(c.gamma, c.zeta, sz, xx + yy);
        } else {
            rate = psi.expectation(c.rate_r).real() + psi.expectation(c.rate_l).real();
        }
        out.scalars[base + lay.rate] = rate;
    }

    if (c.req->entropy_cut) out.scalars[base + lay.entropy] = psi.entropy_at_cut(c.req->cut);

    if (c.req->pair_info) {
        const Eigen::Matrix4cd rho_jl = psi.two_site_rdm(c.req->pair_j, c.req->pair_l);
        const Eigen::Matrix2cd rho_j = obs::ptrace_b(rho_jl, 2, 2);
        const Eigen::Matrix2cd rho_l = obs::ptrace_a(rho_jl, 2, 2);
        out.scalars[base + lay.mi_pair] = obs::von_neumann_entropy(rho_j) +
                                          obs::von_neumann_entropy(rho_l) -
                                          obs::von_neumann_entropy(rho_jl);
        Eigen::Matrix4cd prod;
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) prod.block<2, 2>(2 * a, 2 * b) = rho_j(a, b) * rho_l;
        out.rho_j.push_back(rho_j);
        out.rho_l.push_back(rho_l);
        out.rho_jl.push_back(rho_jl);
        out.rho_prod.push_back(prod);
    }

    if (c.req->moments) {
        double* p = &out.scalars[base + lay.moments];
        p[0] = psi.expectation(c.sx).real();
        p[1] = psi.expectation(c.sy).real();
        p[2] = sz;
        p[3] = xx;
        p[4] = yy;
        p[5] = psi.expectation(c.szsz).real();
        p[6] = psi.expectation(c.sxsy).real();
        p[7] = psi.expectation(c.sxsz).real();
        p[8] = psi.expectation(c.sysz).real();
    }
}

}  // namespace

TrajectorySamples run_trajectory(const AnyModel& model, const MpsTrajectoryOptions& opt,
                                 NoiseStream stream) {
    const int n = n_sites(model);
    StepOperator stepop(model);

    MpsSampleContext ctx;
    ctx.req = &opt.req;
    ScalarLayout layout(opt.req);
    ctx.layout = &layout;
    ctx.n = n;
    if (const auto* s = as_squeezed(model)) {
        ctx.squeezed = true;
        ctx.gamma = s->gamma;
        ctx.zeta = s->zeta;
    } else {
        ctx.squeezed = false;
        const RealizedOperators ops = realize_operators(model);
        const Mpo jr = Mpo::site_sum(ops.jumps[0]);
        const Mpo jl = Mpo::site_sum(ops.jumps[1]);
        ctx.rate_r = Mpo::product(jr.dagger(), jr);
        ctx.rate_l = Mpo::product(jl.dagger(), jl);
    }
    const bool need_moment_mpos =
        opt.req.moments || (opt.req.rate && ctx.squeezed);
    if (need_moment_mpos) {
        const Mpo sx = site_uniform_mpo(n, Eigen::Matrix2cd(0.5 * pauli::x()));
        const Mpo sy = site_uniform_mpo(n, Eigen::Matrix2cd(0.5 * pauli::y()));
        const Mpo szm = site_uniform_mpo(n, Eigen::Matrix2cd(0.5 * pauli::z()));
        ctx.sxsx = Mpo::product(sx, sx);
        ctx.sysy = Mpo::product(sy, sy);
        if (opt.req.moments) {
            ctx.szsz = Mpo::product(szm, szm);
            // symmetrized cross moments: Re<Sa Sb> is what the sampler
            // stores, and <Sb Sa> = conj(<Sa Sb>) for Hermitian Sa, Sb
            ctx.sxsy = Mpo::product(sx, sy);
            ctx.sxsz = Mpo::product(sx, szm);
            ctx.sysz = Mpo::product(sy, szm);
            ctx.sx = sx;
            ctx.sy = sy;
        }
    }

    Mps psi = Mps::inverted(n);
    std::vector<std::complex<double>> e(stepop.channels()), dw(stepop.channels());

    TrajectorySamples rec;
    mps_sample(psi, ctx, rec);
    for (long step = 1; step <= opt.n_steps; ++step) {
        for (int k = 0; k < stepop.channels(); ++k) e[k] = psi.expectation(stepop.jump_mpo(k));
        for (int k = 0; k < stepop.channels(); ++k) dw[k] = stream.complex_wiener(opt.dt);
        stepop.refresh(e, dw, opt.dt);
        psi.apply_mpo(stepop.mpo());
        double norm_before = 1.0;
        const double disc = psi.compress(opt.bond_dim, &norm_before);
        rec.max_norm_dev = std::max(rec.max_norm_dev, std::abs(norm_before - 1.0));
        rec.cum_discarded += disc;
        if (disc > opt.step_trunc_warn) ++rec.truncation_warnings;
        psi.normalize();
        if (step % opt.sample_every == 0) mps_sample(psi, ctx, rec);
    }
    return rec;
}

}  // namespace unravel::mps
