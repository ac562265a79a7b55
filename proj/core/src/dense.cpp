#include "unravel/dense.hpp"

#include <bit>
#include <cmath>

#include "unravel/errors.hpp"
#include "unravel/observables.hpp"

namespace unravel::dense {

State inverted_state(int n) {
    if (n < 1) throw DomainError("inverted_state: n must be >= 1");
    if (n > kMaxSites)
        throw CapacityError("dense backend caps at n = " + std::to_string(kMaxSites) +
                            " sites; use the mps backend for larger systems");
    State psi = State::Zero(1L << n);
    psi((1L << n) - 1) = 1.0;
    return psi;
}

void apply_site_sum(const SiteSumOperator& op, const State& psi, State& out, int n) {
    const long dim = psi.size();
    for (int j = 0; j < n; ++j) {
        const long bit = 1L << j;
        const std::complex<double> wl = op.lower(j);
        const std::complex<double> wr = op.raise(j);
        const bool use_l = wl != std::complex<double>(0.0, 0.0);
        const bool use_r = wr != std::complex<double>(0.0, 0.0);
        if (!use_l && !use_r) continue;
        for (long i = 0; i < dim; ++i) {
            if (i & bit) {
                if (use_l) out(i ^ bit) += wl * psi(i);  // sigma^-
            } else {
                if (use_r) out(i ^ bit) += wr * psi(i);  // sigma^+
            }
        }
    }
}

void apply_site_sum_dagger(const SiteSumOperator& op, const State& psi, State& out, int n) {
    SiteSumOperator dag;
    dag.lower = op.raise.conjugate();
    dag.raise = op.lower.conjugate();
    apply_site_sum(dag, psi, out, n);
}

void apply_pair_coupling(const PairCouplingOperator& op, const State& psi, State& out, int n) {
    const long dim = psi.size();
    for (int j = 0; j < n; ++j)
        for (int l = j + 1; l < n; ++l) {
            const double h = op.h(j, l);
            if (h == 0.0) continue;
            const long mask = (1L << j) | (1L << l);
            for (long i = 0; i < dim; ++i) {
                // sigma_j^+ sigma_l^- + sigma_j^- sigma_l^+ moves the
                // excitation between sites whose bits differ
                if (((i >> j) ^ (i >> l)) & 1) out(i ^ mask) += h * psi(i);
            }
        }
}

double qsd_step(State& psi, const std::vector<SiteSumOperator>& jumps,
                const PairCouplingOperator* hamiltonian, double dt,
                const std::vector<std::complex<double>>& noises, int n, Workspace& ws) {
    ws.dpsi.setZero(psi.size());
    for (std::size_t k = 0; k < jumps.size(); ++k) {
        ws.jpsi.setZero(psi.size());
        apply_site_sum(jumps[k], psi, ws.jpsi, n);
        const std::complex<double> e = psi.dot(ws.jpsi);  // <Jk>
        ws.jdjpsi.setZero(psi.size());
        apply_site_sum_dagger(jumps[k], ws.jpsi, ws.jdjpsi, n);
        ws.dpsi += dt * (-0.5 * ws.jdjpsi - 0.5 * std::norm(e) * psi + std::conj(e) * ws.jpsi);
        ws.dpsi += noises[k] * (ws.jpsi - e * psi);
    }
    if (hamiltonian && !hamiltonian->is_zero()) {
        ws.jpsi.setZero(psi.size());
        apply_pair_coupling(*hamiltonian, psi, ws.jpsi, n);
        ws.dpsi += std::complex<double>(0.0, -dt) * ws.jpsi;
    }
    psi += ws.dpsi;
    const double nrm = psi.norm();
    if (nrm < 1e-12)
        throw NumericsError("qsd_step: norm collapsed below 1e-12; reduce the step size");
    psi /= nrm;
    return std::abs(nrm - 1.0);
}

Eigen::MatrixXcd partial_trace(const State& psi, const std::vector<int>& keep, int n) {
    if (keep.empty()) throw DomainError("partial_trace: keep set must be nonempty");
    if (static_cast<int>(keep.size()) > 12)
        throw DomainError("partial_trace: at most 12 kept sites supported");
    for (std::size_t k = 1; k < keep.size(); ++k)
        if (keep[k] <= keep[k - 1]) throw DomainError("partial_trace: keep must be ascending");
    const int nk = static_cast<int>(keep.size());
    const long dim = psi.size();
    const long dk = 1L << nk;
    const long de = dim >> nk;

    // Psi(a, e): kept index a (first kept site most significant), env e
    Eigen::MatrixXcd grouped(dk, de);
    for (long i = 0; i < dim; ++i) {
        long a = 0, e = 0;
        int ebits = 0, kpos = 0;
        for (int j = 0; j < n; ++j) {
            const long b = (i >> j) & 1;
            if (kpos < nk && keep[kpos] == j) {
                a |= b << (nk - 1 - kpos);
                ++kpos;
            } else {
                e |= b << ebits;
                ++ebits;
            }
        }
        grouped(a, e) = psi(i);
    }
    return grouped * grouped.adjoint();
}

namespace {

struct SampleContext {
    int n;
    const ObservableRequest* req;
    const ScalarLayout* layout;
    // collective spin site-sum realizations
    SiteSumOperator sx_op, sy_op;
    bool squeezed = false;
    double gamma = 0.0, zeta = 0.0;
    const std::vector<SiteSumOperator>* jumps = nullptr;
    State sxpsi, sypsi, szpsi, jrpsi, jlpsi;
};

void sample_state(const State& psi, SampleContext& c, TrajectorySamples& out) {
    const int n = c.n;
    const long dim = psi.size();
    const auto& lay = *c.layout;
    const std::size_t base = out.scalars.size();
    out.scalars.resize(base + lay.n_scalars, 0.0);

    // <S_z> and (S_z psi) in one diagonal pass
    double sz = 0.0;
    const bool need_szpsi = c.req->moments || (c.req->rate && c.squeezed);
    if (need_szpsi) c.szpsi.resize(dim);
    for (long i = 0; i < dim; ++i) {
        const double w = std::popcount(static_cast<unsigned long>(i)) - 0.5 * n;
        sz += w * std::norm(psi(i));
        if (need_szpsi) c.szpsi(i) = w * psi(i);
    }
    out.scalars[base + 0] = sz;

    const bool need_xy = c.req->moments || (c.req->rate && c.squeezed);
    if (need_xy) {
        c.sxpsi.setZero(dim);
        apply_site_sum(c.sx_op, psi, c.sxpsi, n);
        c.sypsi.setZero(dim);
        apply_site_sum(c.sy_op, psi, c.sypsi, n);
    }

    if (c.req->rate) {
        double rate = 0.0;
        if (c.squeezed) {
            const double sxx_syy = c.sxpsi.squaredNorm() + c.sypsi.squaredNorm();
            rate = obs::squeezed_rate_collective(c.gamma, c.zeta, sz, sxx_syy);
        } else {
            // <J_R^dag J_R> + <J_L^dag J_L>
            c.jrpsi.setZero(dim);
            apply_site_sum((*c.jumps)[0], psi, c.jrpsi, n);
            c.jlpsi.setZero(dim);
            apply_site_sum((*c.jumps)[1], psi, c.jlpsi, n);
            rate = c.jrpsi.squaredNorm() + c.jlpsi.squaredNorm();
        }
        out.scalars[base + lay.rate] = rate;
    }

    if (c.req->entropy_cut) {
        std::vector<int> keep(c.req->cut);
        for (int k = 0; k < c.req->cut; ++k) keep[k] = k;
        const Eigen::MatrixXcd rho_a = partial_trace(psi, keep, n);
        out.scalars[base + lay.entropy] = obs::von_neumann_entropy(rho_a);
    }

    if (c.req->pair_info) {
        const int j = c.req->pair_j, l = c.req->pair_l;
        const Eigen::MatrixXcd rho_jl = partial_trace(psi, {j, l}, n);
        const Eigen::Matrix2cd rho_j = obs::ptrace_b(rho_jl, 2, 2);
        const Eigen::Matrix2cd rho_l = obs::ptrace_a(rho_jl, 2, 2);
        const double mi = obs::von_neumann_entropy(rho_j) + obs::von_neumann_entropy(rho_l) -
                          obs::von_neumann_entropy(rho_jl);
        out.scalars[base + lay.mi_pair] = mi;
        Eigen::Matrix4cd prod;
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                prod.block<2, 2>(2 * a, 2 * b) = rho_j(a, b) * rho_l;
        out.rho_j.push_back(rho_j);
        out.rho_l.push_back(rho_l);
        out.rho_jl.push_back(rho_jl);
        out.rho_prod.push_back(prod);
    }

    if (c.req->moments) {
        const double mx = psi.dot(c.sxpsi).real();
        const double my = psi.dot(c.sypsi).real();
        const double xx = c.sxpsi.squaredNorm();
        const double yy = c.sypsi.squaredNorm();
        const double zz = c.szpsi.squaredNorm();
        const double xy = c.sxpsi.dot(c.sypsi).real();
        const double xz = c.sxpsi.dot(c.szpsi).real();
        const double yz = c.sypsi.dot(c.szpsi).real();
        double* p = &out.scalars[base + lay.moments];
        p[0] = mx;
        p[1] = my;
        p[2] = sz;
        p[3] = xx;
        p[4] = yy;
        p[5] = zz;
        p[6] = xy;
        p[7] = xz;
        p[8] = yz;
    }
}

}  // namespace

TrajectorySamples run_trajectory(const AnyModel& model, const TrajectoryOptions& opt,
                                 NoiseStream stream) {
    const int n = n_sites(model);
    if (n > kMaxSites)
        throw CapacityError("dense backend caps at n = " + std::to_string(kMaxSites) +
                            " sites; use the mps backend for larger systems");
    const RealizedOperators ops = realize_operators(model);
    const PairCouplingOperator* ham = ops.hamiltonian ? &*ops.hamiltonian : nullptr;

    SampleContext ctx;
    ctx.n = n;
    ctx.req = &opt.req;
    ScalarLayout layout(opt.req);
    ctx.layout = &layout;
    ctx.jumps = &ops.jumps;
    if (const auto* s = as_squeezed(model)) {
        ctx.squeezed = true;
        ctx.gamma = s->gamma;
        ctx.zeta = s->zeta;
    }
    // S_x = sum_j (sigma_j^- + sigma_j^+)/2,  S_y = sum_j (i sigma_j^- - i sigma_j^+)/2
    ctx.sx_op.lower = Eigen::VectorXcd::Constant(n, 0.5);
    ctx.sx_op.raise = Eigen::VectorXcd::Constant(n, 0.5);
    ctx.sy_op.lower = Eigen::VectorXcd::Constant(n, std::complex<double>(0.0, 0.5));
    ctx.sy_op.raise = Eigen::VectorXcd::Constant(n, std::complex<double>(0.0, -0.5));

    State psi = inverted_state(n);
    Workspace ws;
    ws.resize(psi.size());
    std::vector<std::complex<double>> noises(ops.jumps.size());

    TrajectorySamples rec;
    sample_state(psi, ctx, rec);
    for (long step = 1; step <= opt.n_steps; ++step) {
        for (auto& dw : noises) dw = stream.complex_wiener(opt.dt);
        const double dev = qsd_step(psi, ops.jumps, ham, opt.dt, noises, n, ws);
        rec.max_norm_dev = std::max(rec.max_norm_dev, dev);
        if (step % opt.sample_every == 0) sample_state(psi, ctx, rec);
    }
    return rec;
}

}  // namespace unravel::dense
