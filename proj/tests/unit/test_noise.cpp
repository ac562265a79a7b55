#include <doctest.h>

#include <cmath>
#include <complex>

#include "unravel/noise.hpp"

using namespace unravel;

TEST_CASE("complex increment moments") {
    NoiseStream s(42, 0);
    const long n = 1'000'000;
    std::complex<double> mean = 0.0, sq = 0.0;
    double abs2 = 0.0;
    for (long i = 0; i < n; ++i) {
        const auto dw = s.complex_wiener(1.0);
        mean += dw;
        sq += dw * dw;
        abs2 += std::norm(dw);
    }
    mean /= double(n);
    sq /= double(n);
    abs2 /= double(n);
    CHECK(std::abs(mean) < 5e-3);
    CHECK(std::abs(abs2 - 1.0) < 5e-3);
    CHECK(std::abs(sq) < 5e-3);
}

TEST_CASE("dt -> 0 limit gives vanishing increments") {
    NoiseStream s(1, 0);
    CHECK(std::abs(s.complex_wiener(0.0)) == 0.0);
}

TEST_CASE("determinism: same (seed, index) gives identical sequences") {
    NoiseStream a(7, 3), b(7, 3);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
    NoiseStream c(7, 3), d(7, 3);
    for (int i = 0; i < 100; ++i) {
        const auto x = c.complex_wiener(0.1), y = d.complex_wiener(0.1);
        CHECK(x == y);
    }
}

TEST_CASE("distinct trajectory indices decorrelate") {
    NoiseStream a = make_trajectory_stream(99, 0);
    NoiseStream b = make_trajectory_stream(99, 1);
    const int n = 10'000;
    double sxy = 0.0, sxx = 0.0, syy = 0.0, sx = 0.0, sy = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = a.normal();
        const double y = b.normal();
        sx += x;
        sy += y;
        sxx += x * x;
        syy += y * y;
        sxy += x * y;
    }
    const double mx = sx / n, my = sy / n;
    const double corr = (sxy / n - mx * my) /
                        std::sqrt((sxx / n - mx * mx) * (syy / n - my * my));
    // 3-sigma bound on the sample correlation of independent normals
    CHECK(std::abs(corr) * std::sqrt(double(n)) < 3.0);
}

TEST_CASE("real pair carries the complex increment") {
    NoiseStream a(5, 1), b(5, 1);
    const double dt = 0.01;
    for (int i = 0; i < 50; ++i) {
        const auto dw = a.complex_wiener(dt);
        const auto [dwa, dwb] = b.real_pair_wiener(dt);
        CHECK(dwa == doctest::Approx(std::sqrt(2.0) * dw.real()).epsilon(1e-14));
        CHECK(dwb == doctest::Approx(-std::sqrt(2.0) * dw.imag()).epsilon(1e-14));
    }
}

TEST_CASE("negation flag flips every increment") {
    NoiseStream a(11, 2), b(11, 2);
    b.set_negate(true);
    for (int i = 0; i < 100; ++i) {
        const auto x = a.complex_wiener(1.0);
        const auto y = b.complex_wiener(1.0);
        CHECK(x == -y);
    }
}
