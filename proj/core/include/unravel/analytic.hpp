// analytic.hpp — closed-form three-stage theory of squeezed superradiance
//
// The polar angle of the collective Bloch vector rolls from the unstable
// inverted pole (theta = 0) to the stable one (theta = pi) through three
// stages: a 2D Bessel seeding process, a deterministic collective flow,
// and a radial Ornstein-Uhlenbeck end stage.  Closed-form peak and
// steady-state predictions follow.
#pragma once

#include <vector>

#include "unravel/model.hpp"
#include "unravel/noise.hpp"

namespace unravel::analytic {

// seeding-stage / peak constants of the large-N theory
inline constexpr double kPeakKappa = 1.390537;        // (gamma/4)(1+z)^2 dt e^{(N-1) z gamma t*}
inline constexpr double kRateConstant = 0.195707;     // R* / (zeta gamma N^2)
inline constexpr double kPeakMagnetization = 0.064;   // 2<Sz>/N at the peak

struct Potential {
    double value = 0.0;
    double derivative = 0.0;  // dV/dtheta; the drift of theta is -derivative
};

// V(theta) = (g/2) z N cos(theta) - (g/4)(1+z)^2 ln(theta)
//            - (g/4)(1-z)^2 ln(pi - theta);  theta strictly in (0, pi).
Potential effective_potential(double theta, const SqueezedModel& model);

// stage drifts in their respective domains
double drift_seeding(double theta, const SqueezedModel& model);   // near 0
double drift_collective(double theta, const SqueezedModel& model);  // bulk
double drift_end_stage(double big_theta, const SqueezedModel& model);  // Theta = pi - theta

// Rayleigh distribution reached by the seeding Bessel process after
// delta_t: p(theta) = [2 theta / (g (1+z)^2 dt)] exp[-theta^2 / (g (1+z)^2 dt)].
double initial_theta_pdf(double theta, double delta_t, const SqueezedModel& model);
double sample_initial_theta(double delta_t, const SqueezedModel& model, NoiseStream& stream);

// Deterministic collective flow: tan(theta/2) grows by e^{(N-1) g z t / 2}.
double deterministic_theta(double t, double theta0, const SqueezedModel& model);

struct PeakPrediction {
    double r_star = 0.0;          // kRateConstant * zeta * gamma * N^2
    double t_star = 0.0;          // ln(N) / (zeta gamma N), leading order
    double s_z_star = kPeakMagnetization;
    double delta_t = 0.0;         // seeding duration 2 / (pi gamma zeta N)
    double t_star_refined = 0.0;  // honors the kPeakKappa identity with delta_t
    bool below_validity = false;  // zeta N < 10
};

// Throws DomainError for zeta = 0 (no peak) or n < 2.
PeakPrediction peak_predictions(const SqueezedModel& model);

// Residual excitation 2<Sz> + N -> (1 - zeta)^2 / (2 zeta); diverges as
// zeta -> 0 (DomainError).
double steady_excitation(double zeta);

struct ThreeStageOptions {
    double t_max = 0.0;      // <= 0: 3 * t_star
    int n_times = 400;
    double delta_t = 0.0;    // <= 0: 2 / (pi gamma zeta N)
    double switch_theta = 0.3;  // hand off to the OU stage at theta > pi - this
    double ou_substep = 0.05;   // OU Euler step in units of the collective rate
};

// theta(t) for one sample path on the uniform grid [0, t_max]:
// a seeded theta0, the deterministic flow, then the radial OU end stage
// integrated by Euler-Maruyama with reflection at Theta = 0.
std::vector<double> three_stage_sample(const SqueezedModel& model, const ThreeStageOptions& opt,
                                       NoiseStream& stream);

}  // namespace unravel::analytic
