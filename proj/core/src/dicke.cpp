#include "unravel/dicke.hpp"

#include <cmath>
#include <string>

#include "unravel/errors.hpp"
#include "unravel/observables.hpp"

namespace unravel::dicke {

CollectiveMatrices collective_matrices(int n) {
    if (n < 1) throw DomainError("collective_matrices: n must be >= 1");
    const int m = n + 1;
    const double j = 0.5 * n;
    CollectiveMatrices cm;
    cm.sp = Eigen::MatrixXcd::Zero(m, m);
    cm.sm = Eigen::MatrixXcd::Zero(m, m);
    cm.sz = Eigen::MatrixXcd::Zero(m, m);
    for (int k = 0; k < m; ++k) {
        const double mk = j - k;
        cm.sz(k, k) = mk;
        if (k + 1 < m) {
            // S- |j,m> = sqrt(j(j+1) - m(m-1)) |j,m-1>
            const double c = std::sqrt(j * (j + 1.0) - mk * (mk - 1.0));
            cm.sm(k + 1, k) = c;
            cm.sp(k, k + 1) = c;
        }
    }
    cm.sx = 0.5 * (cm.sp + cm.sm);
    cm.sy = std::complex<double>(0, -0.5) * (cm.sp - cm.sm);
    return cm;
}

void DickeState::check_invariants() const {
    const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    if (herm > 1e-10) throw NumericsError("DickeState: Hermiticity violated (" + std::to_string(herm) + ")");
    const double tr_dev = std::abs(rho.trace() - std::complex<double>(1.0, 0.0));
    if (tr_dev > 1e-10) throw NumericsError("DickeState: trace deviates from 1 (" + std::to_string(tr_dev) + ")");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-8)
        throw NumericsError("DickeState: negative eigenvalue beyond tolerance");
}

DickeState initial_inverted(int n) {
    DickeState st;
    st.n = n;
    st.rho = Eigen::MatrixXcd::Zero(n + 1, n + 1);
    st.rho(0, 0) = 1.0;
    return st;
}

Eigen::MatrixXcd lindblad_rhs(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& jump,
                              const Eigen::MatrixXcd* hamiltonian) {
    if (rho.rows() != rho.cols() || jump.rows() != jump.cols() || rho.rows() != jump.rows())
        throw DomainError("lindblad_rhs: dimension mismatch");
    const Eigen::MatrixXcd jdj = jump.adjoint() * jump;
    Eigen::MatrixXcd out = jump * rho * jump.adjoint() - 0.5 * (jdj * rho + rho * jdj);
    if (hamiltonian) {
        if (hamiltonian->rows() != rho.rows() || hamiltonian->cols() != rho.cols())
            throw DomainError("lindblad_rhs: Hamiltonian dimension mismatch");
        out += std::complex<double>(0, -1) * ((*hamiltonian) * rho - rho * (*hamiltonian));
    }
    return out;
}

double default_dt(const SqueezedModel& model) {
    return 1e-3 / (model.gamma * std::max(1.0, model.zeta * model.n));
}

namespace {

// Real banded evaluation of gamma D[a S+ + b S-] rho for real symmetric
// rho.  The jump operator has only first off-diagonals, J^dag J only the
// main and second off-diagonals, so the right-hand side costs O(m^2).
class SqueezedRhs {
  public:
    SqueezedRhs(int n, double gamma, double zeta) : m_(n + 1) {
        const double a = std::sqrt(gamma) * (1.0 - zeta) / 2.0;  // on S+
        const double b = std::sqrt(gamma) * (1.0 + zeta) / 2.0;  // on S-
        const double j = 0.5 * n;
        Eigen::VectorXd c(m_ - 1);
        for (int k = 0; k + 1 < m_; ++k) {
            const double mk = j - k;
            c(k) = std::sqrt(j * (j + 1.0) - mk * (mk - 1.0));
        }
        av_ = a * c;  // J(k, k+1)
        bv_ = b * c;  // J(k+1, k)
        kd_.resize(m_);
        for (int i = 0; i < m_; ++i) {
            double d = 0.0;
            if (i > 0) d += av_(i - 1) * av_(i - 1);
            if (i < m_ - 1) d += bv_(i) * bv_(i);
            kd_(i) = d;
        }
        ku_.resize(std::max(0, m_ - 2));
        for (int i = 0; i < m_ - 2; ++i) ku_(i) = bv_(i) * av_(i + 1);  // K(i, i+2)
        a_.resize(m_, m_);
        tmp_.resize(m_, m_);
    }

    void operator()(const Eigen::MatrixXd& rho, Eigen::MatrixXd& out) {
        const int m = m_;
        // A = J rho
        a_.setZero();
        a_.topRows(m - 1).noalias() = av_.asDiagonal() * rho.bottomRows(m - 1);
        a_.bottomRows(m - 1).noalias() += bv_.asDiagonal() * rho.topRows(m - 1);
        // out = A J^T
        out.setZero();
        out.leftCols(m - 1).noalias() = a_.rightCols(m - 1) * av_.asDiagonal();
        out.rightCols(m - 1).noalias() += a_.leftCols(m - 1) * bv_.asDiagonal();
        // out -= (K rho + rho K) / 2 with K = J^T J
        tmp_.noalias() = kd_.asDiagonal() * rho;
        if (m > 2) {
            tmp_.topRows(m - 2).noalias() += ku_.asDiagonal() * rho.bottomRows(m - 2);
            tmp_.bottomRows(m - 2).noalias() += ku_.asDiagonal() * rho.topRows(m - 2);
        }
        out.noalias() -= 0.5 * tmp_;
        out.noalias() -= 0.5 * tmp_.transpose();
    }

  private:
    int m_;
    Eigen::VectorXd av_, bv_, kd_, ku_;
    Eigen::MatrixXd a_, tmp_;
};

}  // namespace

EvolveResult evolve_master(const SqueezedModel& model, const EvolveOptions& opts) {
    model.validate();
    if (!(opts.t_max > 0.0)) throw DomainError("evolve_master: t_max must be positive");
    const int n = model.n;
    const int m = n + 1;
    const double j = 0.5 * n;
    const double dt = opts.dt > 0.0 ? opts.dt : default_dt(model);

    long n_steps = static_cast<long>(std::ceil(opts.t_max / dt - 1e-12));
    int sample_every = opts.sample_every;
    if (sample_every <= 0) sample_every = std::max<long>(1, n_steps / 4000);
    n_steps = ((n_steps + sample_every - 1) / sample_every) * sample_every;

    SqueezedRhs rhs(n, model.gamma, model.zeta);
    Eigen::MatrixXd rho = Eigen::MatrixXd::Zero(m, m);
    rho(0, 0) = 1.0;
    Eigen::MatrixXd k1(m, m), k2(m, m), k3(m, m), k4(m, m), tmp(m, m);

    // m_k and m_k^2 for the diagonal observables
    Eigen::VectorXd mk(m), mk2(m);
    for (int k = 0; k < m; ++k) {
        mk(k) = j - k;
        mk2(k) = mk(k) * mk(k);
    }

    // real matrices for the squeezing moments
    Eigen::MatrixXd r_sx, m_xx, m_yy, m_zz, m_xy, m_xz, m_yz;
    if (opts.want_squeezing) {
        const CollectiveMatrices cm = collective_matrices(n);
        auto sym_real = [](const Eigen::MatrixXcd& p, const Eigen::MatrixXcd& q) {
            return Eigen::MatrixXd((0.5 * (p * q + q * p)).real());
        };
        r_sx = cm.sx.real();
        m_xx = sym_real(cm.sx, cm.sx);
        m_yy = sym_real(cm.sy, cm.sy);
        m_zz = sym_real(cm.sz, cm.sz);
        m_xy = sym_real(cm.sx, cm.sy);
        m_xz = sym_real(cm.sx, cm.sz);
        m_yz = sym_real(cm.sy, cm.sz);
    }

    EvolveResult result;
    auto& series = result.series;
    const std::size_t n_samples = static_cast<std::size_t>(n_steps / sample_every) + 1;
    series.t.reserve(n_samples);
    auto& c_sz = series.add("sz_over_n", false);
    auto& c_rate = series.add("rate_over_n", false);
    SeriesColumn* c_xi = opts.want_squeezing ? &series.add("xi_r2", false) : nullptr;
    SeriesColumn* c_pur = opts.want_purity ? &series.add("purity", false) : nullptr;
    auto& c_tr = series.add("trace_dev", false);

    const long check_stride = std::max<long>(1, n_steps / 16);

    auto sample = [&](long step) {
        const double t = step * dt;
        series.t.push_back(t);
        const Eigen::VectorXd diag = rho.diagonal();
        const double trace = diag.sum();
        const double sz = mk.dot(diag);
        const double sz2 = mk2.dot(diag);
        const double sxxyy = j * (j + 1.0) - sz2;
        c_sz.value.push_back(sz / n);
        c_rate.value.push_back(obs::squeezed_rate_collective(model.gamma, model.zeta, sz, sxxyy) / n);
        c_tr.value.push_back(std::abs(trace - 1.0));
        if (c_pur) c_pur->value.push_back(rho.squaredNorm());
        if (c_xi) {
            obs::CollectiveMoments mom;
            mom.n = n;
            mom.mean << r_sx.cwiseProduct(rho).sum(), 0.0, sz;
            const double xx = m_xx.cwiseProduct(rho).sum();
            const double yy = m_yy.cwiseProduct(rho).sum();
            const double zz = m_zz.cwiseProduct(rho).sum();
            const double xy = m_xy.cwiseProduct(rho).sum();
            const double xz = m_xz.cwiseProduct(rho).sum();
            const double yz = m_yz.cwiseProduct(rho).sum();
            mom.second_sym << xx, xy, xz, xy, yy, yz, xz, yz, zz;
            double xi = std::numeric_limits<double>::quiet_NaN();
            try {
                xi = obs::spin_squeezing(mom);
            } catch (const DomainError&) {
            }
            c_xi->value.push_back(xi);
        }
    };

    auto guard = [&](long step) {
        const double t = step * dt;
        const double tr_dev = std::abs(rho.diagonal().sum() - 1.0);
        result.max_trace_dev = std::max(result.max_trace_dev, tr_dev);
        if (tr_dev > 1e-6)
            throw NumericsError("dicke: trace invariant violated at t = " + std::to_string(t));
        const double purity = rho.squaredNorm();
        if (purity > 1.0 + 1e-8)
            throw NumericsError("dicke: purity exceeds 1 at t = " + std::to_string(t));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rho, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -1e-8)
            throw NumericsError("dicke: positivity lost at t = " + std::to_string(t));
    };

    sample(0);
    for (long step = 1; step <= n_steps; ++step) {
        rhs(rho, k1);
        tmp = rho + (0.5 * dt) * k1;
        rhs(tmp, k2);
        tmp = rho + (0.5 * dt) * k2;
        rhs(tmp, k3);
        tmp = rho + dt * k3;
        rhs(tmp, k4);
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        // re-symmetrize; record how far RK4 drifted first
        const double asym = (rho - rho.transpose()).cwiseAbs().maxCoeff();
        result.max_herm_dev = std::max(result.max_herm_dev, asym);
        if (asym > 1e-8)
            throw NumericsError("dicke: Hermiticity drift at t = " + std::to_string(step * dt));
        rho = 0.5 * (rho + rho.transpose()).eval();

        if (step % sample_every == 0) sample(step);
        if (step % check_stride == 0 || step == n_steps) guard(step);
    }

    series.set_meta("backend", "dicke");
    series.set_meta("model", "squeezed");
    series.set_meta("n", std::to_string(n));
    series.set_meta("dt", std::to_string(dt));
    series.set_meta("sample_every", std::to_string(sample_every));

    result.final_state.n = n;
    result.final_state.rho = rho.cast<std::complex<double>>();
    return result;
}

}  // namespace unravel::dicke
