// meanfield.hpp — product-state (d = 1) trajectory engine
//
// Bloch-vector stochastic equations for the squeezed model, the
// equivalent polar-angle form, and the per-site equations for the
// waveguide array.  The squeezed engine exploits permutation symmetry
// and propagates a single Bloch vector per trajectory.
#pragma once

#include <complex>
#include <vector>

#include "unravel/accumulator.hpp"
#include "unravel/model.hpp"
#include "unravel/noise.hpp"

namespace unravel::mf {

struct BlochVector {
    double sx = 0.0, sy = 0.0, sz = 1.0;

    double norm() const;
    void project();  // radial projection back to the unit sphere
};

struct BlochAngles {
    double theta = 0.0;  // in (0, pi)
    double phi = 0.0;    // in [0, 2 pi)
};

// One Euler-Maruyama step of the squeezed-model Bloch equations; dwa and
// dwb are real increments of variance dt (see
// NoiseStream::real_pair_wiener for the pairing with the QSD noise).
// Projects back to unit norm.
BlochVector mf_step_squeezed(const BlochVector& s, const SqueezedModel& model, double dt,
                             double dwa, double dwb);

// Same dynamics in polar angles; theta is reflected at eps = 1e-6 and
// pi - eps to avoid the 1/sin(theta) singularities.
BlochAngles angle_step(const BlochAngles& a, const SqueezedModel& model, double dt, double dwa,
                       double dwb);

BlochVector bloch_from_angles(const BlochAngles& a);

// Per-site update for the waveguide array; dw1/dw2 are the two complex
// channel noises, shared across sites within the step.  All sites are
// advanced from the pre-step state (Jacobi update) and projected.
std::vector<BlochVector> mf_step_waveguide(const std::vector<BlochVector>& s,
                                           const WaveguideModel& model, double dt,
                                           std::complex<double> dw1, std::complex<double> dw2);

struct MfTrajectoryOptions {
    double dt = 0.0;
    long n_steps = 0;
    int sample_every = 1;
    ObservableRequest req;  // moments must be off (factorized correlators
                            // cannot feed the squeezing parameter)
};

TrajectorySamples run_trajectory(const AnyModel& model, const MfTrajectoryOptions& opt,
                                 NoiseStream stream);

}  // namespace unravel::mf
