#include "unravel/meanfield.hpp"

#include <cmath>

#include "unravel/errors.hpp"
#include "unravel/observables.hpp"
#include "unravel/pauli.hpp"

namespace unravel::mf {

double BlochVector::norm() const { return std::sqrt(sx * sx + sy * sy + sz * sz); }

void BlochVector::project() {
    const double r = norm();
    if (r < 1e-300) throw NumericsError("BlochVector: zero-length spin");
    sx /= r;
    sy /= r;
    sz /= r;
}

BlochVector mf_step_squeezed(const BlochVector& s, const SqueezedModel& model, double dt,
                             double dwa, double dwb) {
    const double g = model.gamma, z = model.zeta;
    const double coll = 0.5 * g * z * (model.n - 1);
    const double sq = std::sqrt(0.5 * g);

    BlochVector o = s;
    o.sx += -0.5 * g * z * z * s.sx * dt + coll * s.sz * s.sx * dt +
            sq * (z * s.sz + 1.0 - s.sx * s.sx) * dwa + sq * z * s.sx * s.sy * dwb;
    o.sy += -0.5 * g * s.sy * dt + coll * s.sz * s.sy * dt -
            sq * (s.sz + z - z * s.sy * s.sy) * dwb - sq * s.sx * s.sy * dwa;
    o.sz += -0.5 * g * ((z * z + 1.0) * s.sz + 2.0 * z) * dt -
            coll * (s.sx * s.sx + s.sy * s.sy) * dt - sq * (z + s.sz) * s.sx * dwa +
            sq * (1.0 + z * s.sz) * s.sy * dwb;
    o.project();
    return o;
}

namespace {

constexpr double kThetaEps = 1e-6;
constexpr double kPi = 3.14159265358979323846;

double reflect_theta(double theta) {
    if (theta < kThetaEps) theta = 2.0 * kThetaEps - theta;
    if (theta > kPi - kThetaEps) theta = 2.0 * (kPi - kThetaEps) - theta;
    return theta;
}

}  // namespace

BlochAngles angle_step(const BlochAngles& a, const SqueezedModel& model, double dt, double dwa,
                       double dwb) {
    if (!(a.theta > 0.0 && a.theta < kPi))
        throw DomainError("angle_step: theta must be strictly inside (0, pi)");
    const double g = model.gamma, z = model.zeta;
    const double st = std::sin(a.theta), ct = std::cos(a.theta);
    const double cp = std::cos(a.phi), sp = std::sin(a.phi);
    const double sq = std::sqrt(0.5 * g);
    const double wa = z + ct;        // cos-phi noise weight
    const double wb = 1.0 + z * ct;  // sin-phi noise weight

    double dtheta = 0.5 * g / st * ((z * z + 1.0) * ct + 2.0 * z) * dt -
                    0.25 * g * ct / st * (cp * cp * wa * wa + sp * sp * wb * wb) * dt +
                    0.5 * g * (model.n - 1) * z * st * dt + sq * cp * wa * dwa -
                    sq * sp * wb * dwb;
    double dphi = -0.5 * g / (st * st) * cp * sp * (wb * wb - wa * wa) * dt -
                  sq / st * sp * wb * dwa - sq / st * cp * wa * dwb;

    BlochAngles o;
    o.theta = reflect_theta(a.theta + dtheta);
    o.phi = std::fmod(a.phi + dphi, 2.0 * kPi);
    if (o.phi < 0.0) o.phi += 2.0 * kPi;
    return o;
}

BlochVector bloch_from_angles(const BlochAngles& a) {
    BlochVector v;
    v.sx = std::sin(a.theta) * std::sin(a.phi);
    v.sy = std::sin(a.theta) * std::cos(a.phi);
    v.sz = std::cos(a.theta);
    return v;
}

std::vector<BlochVector> mf_step_waveguide(const std::vector<BlochVector>& s,
                                           const WaveguideModel& model, double dt,
                                           std::complex<double> dw1, std::complex<double> dw2) {
    using namespace std::complex_literals;
    const int n = model.n;
    if (static_cast<int>(s.size()) != n) throw DomainError("mf_step_waveguide: size mismatch");
    const double g = model.gamma;
    const double sq = std::sqrt(0.5 * g);

    std::vector<BlochVector> o = s;
    for (int j = 0; j < n; ++j) {
        double dx = -0.5 * g * s[j].sx * dt;
        double dy = -0.5 * g * s[j].sy * dt;
        double dz = -g * (1.0 + s[j].sz) * dt;
        for (int l = 0; l < n; ++l) {
            if (l == j) continue;
            const double sn = std::sin(std::abs(model.phases[l] - model.phases[j]));
            const double cs = std::cos(model.phases[j] - model.phases[l]);
            dx += 0.5 * g * (sn * s[l].sy * s[j].sz + cs * s[j].sz * s[l].sx) * dt;
            dy += 0.5 * g * (-sn * s[l].sx * s[j].sz + cs * s[j].sz * s[l].sy) * dt;
            dz += 0.5 * g * (sn * (s[l].sx * s[j].sy - s[l].sy * s[j].sx) -
                             cs * (s[j].sx * s[l].sx + s[j].sy * s[l].sy)) *
                  dt;
        }
        // phase-carrying channel noises, plus complex conjugates
        const std::complex<double> pj =
            std::exp(-1i * model.phases[j]) * dw1 + std::exp(1i * model.phases[j]) * dw2;
        const std::complex<double> cx =
            sq * 0.5 *
            std::complex<double>(s[j].sz + 1.0 - s[j].sx * s[j].sx, s[j].sx * s[j].sy);
        const std::complex<double> cy =
            sq * 0.5 *
            std::complex<double>(-s[j].sy * s[j].sx, -s[j].sz - 1.0 + s[j].sy * s[j].sy);
        const std::complex<double> cz =
            -sq * 0.5 * (1.0 + s[j].sz) * std::complex<double>(s[j].sx, -s[j].sy);
        dx += 2.0 * (cx * pj).real();
        dy += 2.0 * (cy * pj).real();
        dz += 2.0 * (cz * pj).real();

        o[j].sx += dx;
        o[j].sy += dy;
        o[j].sz += dz;
        o[j].project();
    }
    return o;
}

namespace {

Eigen::Matrix2cd bloch_rdm(const BlochVector& s) {
    return 0.5 * (pauli::id2() + s.sx * pauli::x() + s.sy * pauli::y() + s.sz * pauli::z());
}

void pair_record(const BlochVector& sj, const BlochVector& sl, const ScalarLayout& lay,
                 std::size_t base, TrajectorySamples& out) {
    const Eigen::Matrix2cd rj = bloch_rdm(sj);
    const Eigen::Matrix2cd rl = bloch_rdm(sl);
    Eigen::Matrix4cd prod;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) prod.block<2, 2>(2 * a, 2 * b) = rj(a, b) * rl;
    out.scalars[base + lay.mi_pair] = 0.0;  // product state, exactly
    out.rho_j.push_back(rj);
    out.rho_l.push_back(rl);
    out.rho_jl.push_back(prod);
    out.rho_prod.push_back(prod);
}

}  // namespace

TrajectorySamples run_trajectory(const AnyModel& model, const MfTrajectoryOptions& opt,
                                 NoiseStream stream) {
    if (opt.req.moments)
        throw DomainError(
            "meanfield: collective second moments from factorized correlators cannot feed the "
            "squeezing parameter");
    const ScalarLayout lay(opt.req);
    TrajectorySamples rec;

    if (const auto* sq = as_squeezed(model)) {
        const int n = sq->n;
        BlochVector s;  // (0, 0, 1): fully inverted
        auto sample = [&](const BlochVector& v) {
            const std::size_t base = rec.scalars.size();
            rec.scalars.resize(base + lay.n_scalars, 0.0);
            rec.scalars[base + 0] = 0.5 * n * v.sz;
            if (opt.req.rate)
                rec.scalars[base + lay.rate] = obs::squeezed_rate_sites(
                    sq->gamma, sq->zeta, n, n * v.sz,
                    double(n) * (n - 1) * (v.sx * v.sx + v.sy * v.sy));
            if (opt.req.entropy_cut) rec.scalars[base + lay.entropy] = 0.0;
            if (opt.req.pair_info) pair_record(v, v, lay, base, rec);
        };
        sample(s);
        for (long step = 1; step <= opt.n_steps; ++step) {
            const auto [dwa, dwb] = stream.real_pair_wiener(opt.dt);
            s = mf_step_squeezed(s, *sq, opt.dt, dwa, dwb);
            if (step % opt.sample_every == 0) sample(s);
        }
        return rec;
    }

    const auto* wg = as_waveguide(model);
    const int n = wg->n;
    std::vector<BlochVector> s(n);
    // per-channel weights for the factorized emission rate
    std::vector<std::complex<double>> wr(n), wl(n);
    using namespace std::complex_literals;
    for (int j = 0; j < n; ++j) {
        wr[j] = std::sqrt(wg->gamma / 2.0) * std::exp(-1i * wg->phases[j]);
        wl[j] = std::sqrt(wg->gamma / 2.0) * std::exp(+1i * wg->phases[j]);
    }
    auto sample = [&](const std::vector<BlochVector>& v) {
        const std::size_t base = rec.scalars.size();
        rec.scalars.resize(base + lay.n_scalars, 0.0);
        double sz = 0.0;
        for (const auto& b : v) sz += 0.5 * b.sz;
        rec.scalars[base + 0] = sz;
        if (opt.req.rate) {
            double rate = 0.0;
            for (const auto* w : {&wr, &wl}) {
                std::complex<double> amp = 0.0;
                double diag = 0.0;
                for (int j = 0; j < n; ++j) {
                    const std::complex<double> cplus(0.5 * v[j].sx, 0.5 * v[j].sy);
                    amp += std::conj((*w)[j]) * cplus;
                    diag += std::norm((*w)[j]) * (0.5 * (1.0 + v[j].sz) - std::norm(cplus));
                }
                rate += std::norm(amp) + diag;
            }
            rec.scalars[base + lay.rate] = rate;
        }
        if (opt.req.entropy_cut) rec.scalars[base + lay.entropy] = 0.0;
        if (opt.req.pair_info) pair_record(v[opt.req.pair_j], v[opt.req.pair_l], lay, base, rec);
    };
    sample(s);
    for (long step = 1; step <= opt.n_steps; ++step) {
        const std::complex<double> dw1 = stream.complex_wiener(opt.dt);
        const std::complex<double> dw2 = stream.complex_wiener(opt.dt);
        s = mf_step_waveguide(s, *wg, opt.dt, dw1, dw2);
        if (step % opt.sample_every == 0) sample(s);
    }
    return rec;
}

}  // namespace unravel::mf
