// noise.hpp — deterministic counter-based noise streams
//
// Every trajectory owns a NoiseStream derived from (master_seed,
// trajectory_index).  The derivation below is a stable, documented
// function: changing it is a breaking change for anyone relying on
// seed-level reproducibility.
//
//   key     = mix(mix(master_seed ^ 0x9e3779b97f4a7c15) ^ mix(index))
//   u64_k   = mix(key + (counter+1) * 0x9e3779b97f4a7c15)
//
// with mix() the SplitMix64 finalizer.  Streams for distinct indices are
// statistically independent; identical (seed, index) give identical
// sequences regardless of threading or platform (no std::distribution
// involved; the normal transform is an explicit Box-Muller).
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <utility>

namespace unravel {

class NoiseStream {
  public:
    NoiseStream() : NoiseStream(0, 0) {}

    NoiseStream(std::uint64_t master_seed, std::uint64_t trajectory_index)
        : key_(derive_key(master_seed, trajectory_index)) {}

    std::uint64_t next_u64() {
        ++counter_;
        return mix(key_ + counter_ * 0x9e3779b97f4a7c15ULL);
    }

    // Uniform on (0, 1]; never 0, so log() below is safe.
    double uniform() {
        const std::uint64_t r = next_u64() >> 11;  // 53 bits
        return (static_cast<double>(r) + 1.0) * 0x1.0p-53;
    }

    // Two independent standard normals (Box-Muller).
    std::pair<double, double> normal_pair() {
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        const double s = negate_ ? -1.0 : 1.0;
        return {s * r * std::cos(a), s * r * std::sin(a)};
    }

    double normal() { return normal_pair().first; }

    // Complex Wiener increment: dW = (u + i v) sqrt(dt/2), so that
    // E[dW] = 0, E[|dW|^2] = dt, E[dW^2] = 0.
    std::complex<double> complex_wiener(double dt) {
        const auto [u, v] = normal_pair();
        const double s = std::sqrt(dt / 2.0);
        return {u * s, v * s};
    }

    // The same increment decomposed into the real pair (dWa, dWb) of the
    // Bloch-vector equations, scaled to variance dt each.  The sign of
    // dWb is fixed so that a mean-field step driven by (dWa, dWb)
    // follows the same realization as a QSD step driven by
    // complex_wiener() from the same stream state.
    std::pair<double, double> real_pair_wiener(double dt) {
        const auto [u, v] = normal_pair();
        const double s = std::sqrt(dt);
        return {u * s, -v * s};
    }

    // Flips the sign of every increment (Ito-consistency testing).
    void set_negate(bool negate) { negate_ = negate; }

    std::uint64_t counter() const { return counter_; }

  private:
    static std::uint64_t mix(std::uint64_t x) {
        x ^= x >> 30;
        x *= 0xbf58476d1ce4e5b9ULL;
        x ^= x >> 27;
        x *= 0x94d049bb133111ebULL;
        x ^= x >> 31;
        return x;
    }

    static std::uint64_t derive_key(std::uint64_t seed, std::uint64_t index) {
        return mix(mix(seed ^ 0x9e3779b97f4a7c15ULL) ^ mix(index + 1));
    }

    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
    bool negate_ = false;
};

inline NoiseStream make_trajectory_stream(std::uint64_t master_seed, std::uint64_t trajectory_index) {
    return NoiseStream(master_seed, trajectory_index);
}

}  // namespace unravel
