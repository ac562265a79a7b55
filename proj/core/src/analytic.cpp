#include "unravel/analytic.hpp"

#include <cmath>

#include "unravel/errors.hpp"

namespace unravel::analytic {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

Potential effective_potential(double theta, const SqueezedModel& model) {
    model.validate();
    if (!(theta > 0.0 && theta < kPi))
        throw DomainError("effective_potential: theta must be strictly inside (0, pi)");
    const double g = model.gamma, z = model.zeta, n = model.n;
    const double wp = 0.25 * g * (1.0 + z) * (1.0 + z);
    const double wm = 0.25 * g * (1.0 - z) * (1.0 - z);
    Potential p;
    p.value = 0.5 * g * z * n * std::cos(theta) - wp * std::log(theta) - wm * std::log(kPi - theta);
    p.derivative = -0.5 * g * z * n * std::sin(theta) - wp / theta + wm / (kPi - theta);
    return p;
}

double drift_seeding(double theta, const SqueezedModel& model) {
    const double g = model.gamma, z = model.zeta;
    return 0.5 * g * (model.n - 1) * z * theta + 0.25 * g * (1.0 + z) * (1.0 + z) / theta;
}

double drift_collective(double theta, const SqueezedModel& model) {
    return 0.5 * model.gamma * (model.n - 1) * model.zeta * std::sin(theta);
}

double drift_end_stage(double big_theta, const SqueezedModel& model) {
    const double g = model.gamma, z = model.zeta;
    return -0.5 * g * (model.n - 1) * z * big_theta +
           0.25 * g * (1.0 - z) * (1.0 - z) / big_theta;
}

double initial_theta_pdf(double theta, double delta_t, const SqueezedModel& model) {
    model.validate();
    if (theta < 0.0) throw DomainError("initial_theta_pdf: theta must be >= 0");
    if (!(delta_t > 0.0)) throw DomainError("initial_theta_pdf: delta_t must be positive");
    const double s2 = model.gamma * (1.0 + model.zeta) * (1.0 + model.zeta) * delta_t;
    return 2.0 * theta / s2 * std::exp(-theta * theta / s2);
}

double sample_initial_theta(double delta_t, const SqueezedModel& model, NoiseStream& stream) {
    const double s2 = model.gamma * (1.0 + model.zeta) * (1.0 + model.zeta) * delta_t;
    return std::sqrt(-s2 * std::log(stream.uniform()));
}

double deterministic_theta(double t, double theta0, const SqueezedModel& model) {
    if (!(theta0 > 0.0 && theta0 < kPi))
        throw DomainError("deterministic_theta: theta0 must be inside (0, pi)");
    const double growth = std::exp(0.5 * (model.n - 1) * model.gamma * model.zeta * t);
    return 2.0 * std::atan(growth * std::tan(0.5 * theta0));
}

PeakPrediction peak_predictions(const SqueezedModel& model) {
    model.validate();
    if (model.zeta == 0.0)
        throw DomainError("peak_predictions: zeta = 0 has no emission peak (monotone rate)");
    if (model.n < 2) throw DomainError("peak_predictions: need at least two emitters");
    const double g = model.gamma, z = model.zeta, n = model.n;
    PeakPrediction p;
    p.r_star = kRateConstant * z * g * n * n;
    p.t_star = std::log(n) / (z * g * n);
    p.s_z_star = kPeakMagnetization;
    p.delta_t = 2.0 / (kPi * g * z * n);
    p.t_star_refined =
        std::log(4.0 * kPeakKappa / (g * (1.0 + z) * (1.0 + z) * p.delta_t)) / ((n - 1.0) * z * g);
    p.below_validity = z * n < 10.0;
    return p;
}

double steady_excitation(double zeta) {
    if (zeta == 0.0)
        throw DomainError("steady_excitation: diverges at zeta = 0 (infinite squeezing)");
    if (!(zeta > 0.0 && zeta <= 1.0)) throw DomainError("steady_excitation: zeta must be in (0, 1]");
    return (1.0 - zeta) * (1.0 - zeta) / (2.0 * zeta);
}

std::vector<double> three_stage_sample(const SqueezedModel& model, const ThreeStageOptions& opt,
                                       NoiseStream& stream) {
    model.validate();
    if (model.zeta == 0.0) throw DomainError("three_stage_sample: zeta must be positive");
    const double g = model.gamma, z = model.zeta;
    const int n = model.n;
    const double delta_t = opt.delta_t > 0.0 ? opt.delta_t : 2.0 / (kPi * g * z * n);
    const double t_max = opt.t_max > 0.0 ? opt.t_max : 3.0 * std::log(n) / (z * g * n);
    const int nt = std::max(2, opt.n_times);

    const double theta0 = sample_initial_theta(delta_t, model, stream);
    const double tan_half0 = std::tan(0.5 * std::min(theta0, kPi - 1e-9));

    const double coll_rate = 0.5 * g * (n - 1) * z;
    const double dt_ou = opt.ou_substep / std::max(coll_rate, g);
    const double noise_amp = (1.0 - z) * std::sqrt(0.5 * g);

    std::vector<double> theta(nt);
    bool ou_active = false;
    double big_theta = 0.0;  // pi - theta
    double t_prev = 0.0;
    for (int k = 0; k < nt; ++k) {
        const double t = t_max * k / (nt - 1);
        if (!ou_active) {
            const double th = 2.0 * std::atan(std::exp(coll_rate * t) * tan_half0);
            if (th < kPi - opt.switch_theta) {
                theta[k] = th;
                t_prev = t;
                continue;
            }
            ou_active = true;
            big_theta = kPi - th;
            t_prev = t;
            theta[k] = th;
            continue;
        }
        // Euler-Maruyama on dTheta = -a Theta dt + c/Theta dt + amp dW,
        // reflected at 0
        double remaining = t - t_prev;
        while (remaining > 0.0) {
            const double h = std::min(dt_ou, remaining);
            const double drift =
                -coll_rate * big_theta +
                0.25 * g * (1.0 - z) * (1.0 - z) / std::max(big_theta, 1e-12);
            big_theta += drift * h + noise_amp * std::sqrt(h) * stream.normal();
            big_theta = std::abs(big_theta);
            remaining -= h;
        }
        t_prev = t;
        theta[k] = kPi - big_theta;
    }
    return theta;
}

}  // namespace unravel::analytic
