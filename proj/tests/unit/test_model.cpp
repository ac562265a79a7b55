#include <doctest.h>

#include <cmath>

#include "unravel/model.hpp"
#include "unravel/pauli.hpp"

using namespace unravel;

TEST_CASE("pauli convention: sigma_x - i z sigma_y = (1-z) sigma+ + (1+z) sigma-") {
    for (double z : {0.0, 0.3, 0.7, 1.0}) {
        const Eigen::Matrix2cd lhs = pauli::x() - std::complex<double>(0, z) * pauli::y();
        const Eigen::Matrix2cd rhs = (1.0 - z) * pauli::plus() + (1.0 + z) * pauli::minus();
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-15);
    }
}

TEST_CASE("pauli basics") {
    CHECK((pauli::x() * pauli::y() - pauli::y() * pauli::x() -
           std::complex<double>(0, 2) * pauli::z())
              .cwiseAbs()
              .maxCoeff() < 1e-15);
    CHECK((pauli::plus() * Eigen::Vector2cd(1, 0) - Eigen::Vector2cd(0, 1)).norm() < 1e-15);
}

TEST_CASE("squeezed jump weights") {
    SUBCASE("zeta = 1 is pure collective lowering") {
        const auto j = build_squeezed_jump({1.0, 1.0, 3});
        for (int k = 0; k < 3; ++k) {
            CHECK(j.lower(k) == std::complex<double>(1.0, 0.0));
            CHECK(j.raise(k) == std::complex<double>(0.0, 0.0));
        }
    }
    SUBCASE("zeta = 0 weights are symmetric") {
        const auto j = build_squeezed_jump({1.0, 0.0, 2});
        CHECK(j.lower(0).real() == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(j.raise(0).real() == doctest::Approx(0.5).epsilon(1e-15));
    }
    SUBCASE("gamma = 4, zeta = 0.5") {
        const auto j = build_squeezed_jump({4.0, 0.5, 1});
        CHECK(j.lower(0).real() == doctest::Approx(1.5).epsilon(1e-15));
        CHECK(j.raise(0).real() == doctest::Approx(0.5).epsilon(1e-15));
    }
    SUBCASE("invariants rejected") {
        CHECK_THROWS_AS(build_squeezed_jump({-1.0, 0.5, 2}), DomainError);
        CHECK_THROWS_AS(build_squeezed_jump({1.0, 1.5, 2}), DomainError);
        CHECK_THROWS_AS(build_squeezed_jump({1.0, 0.5, 0}), DomainError);
    }
}

TEST_CASE("waveguide operators") {
    SUBCASE("single emitter: no pair couplings") {
        WaveguideModel m{2.0, {0.7}, 1};
        const auto ops = build_waveguide_operators(m);
        CHECK(std::abs(ops.j_right.lower(0)) == doctest::Approx(1.0));
        CHECK(std::abs(ops.j_left.lower(0)) == doctest::Approx(1.0));
        CHECK(ops.j_right.lower(0) == std::conj(ops.j_left.lower(0)));
        CHECK(ops.hamiltonian.h.cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("coupling vanishes at phase difference pi") {
        WaveguideModel m{1.0, {0.0, M_PI}, 2};
        const auto ops = build_waveguide_operators(m);
        CHECK(std::abs(ops.hamiltonian.h(0, 1)) < 1e-15);
    }
    SUBCASE("0.2 pi spacing") {
        WaveguideModel m{1.0, {0.2 * M_PI, 0.4 * M_PI, 0.6 * M_PI}, 3};
        const auto ops = build_waveguide_operators(m);
        CHECK(ops.hamiltonian.h(0, 1) == doctest::Approx(0.5 * std::sin(0.2 * M_PI)).epsilon(1e-12));
        CHECK(ops.hamiltonian.h(0, 1) == doctest::Approx(0.29389262614624).epsilon(1e-10));
    }
    SUBCASE("h is symmetric with zero diagonal") {
        WaveguideModel m{1.3, {0.1, 0.9, 2.4, 3.3}, 4};
        const auto ops = build_waveguide_operators(m);
        CHECK((ops.hamiltonian.h - ops.hamiltonian.h.transpose()).cwiseAbs().maxCoeff() == 0.0);
        CHECK(ops.hamiltonian.h.diagonal().cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("parametrization forms reproduce the jump weights") {
    // w- = sqrt(G) * {cos(phi), cosh(r), 1}; w+ = sqrt(G) * {sin(phi), sinh(r), E}
    const double big_gamma = 1.7;
    SUBCASE("angle form") {
        for (double phi : {0.0, 0.2, 0.5, M_PI / 4}) {
            const auto [g, z] = convert_parametrization(ParamForm::Angle, phi, big_gamma);
            const auto j = build_squeezed_jump({g, z, 1});
            CHECK(j.lower(0).real() ==
                  doctest::Approx(std::sqrt(big_gamma) * std::cos(phi)).epsilon(1e-12));
            CHECK(j.raise(0).real() ==
                  doctest::Approx(std::sqrt(big_gamma) * std::sin(phi)).epsilon(1e-12));
        }
    }
    SUBCASE("rapidity form") {
        for (double r : {0.0, 0.4, 1.0, 2.5}) {
            const auto [g, z] = convert_parametrization(ParamForm::Rapidity, r, big_gamma);
            const auto j = build_squeezed_jump({g, z, 1});
            CHECK(j.lower(0).real() ==
                  doctest::Approx(std::sqrt(big_gamma) * std::cosh(r)).epsilon(1e-12));
            CHECK(j.raise(0).real() ==
                  doctest::Approx(std::sqrt(big_gamma) * std::sinh(r)).epsilon(1e-12));
        }
    }
    SUBCASE("reflectivity form") {
        for (double e : {0.0, 0.3, 0.8, 1.0}) {
            const auto [g, z] = convert_parametrization(ParamForm::Reflectivity, e, big_gamma);
            const auto j = build_squeezed_jump({g, z, 1});
            CHECK(j.lower(0).real() == doctest::Approx(std::sqrt(big_gamma)).epsilon(1e-12));
            CHECK(j.raise(0).real() == doctest::Approx(std::sqrt(big_gamma) * e).epsilon(1e-12));
        }
    }
    SUBCASE("limits") {
        const auto a = convert_parametrization(ParamForm::Angle, 0.0, 1.0);
        CHECK(a.gamma == doctest::Approx(1.0));
        CHECK(a.zeta == doctest::Approx(1.0));
        const auto c = convert_parametrization(ParamForm::Reflectivity, 1.0, 1.0);
        CHECK(c.gamma == doctest::Approx(4.0));
        CHECK(c.zeta == doctest::Approx(0.0));
    }
    SUBCASE("range errors") {
        CHECK_THROWS_AS(convert_parametrization(ParamForm::Angle, 1.0, 1.0), DomainError);
        CHECK_THROWS_AS(convert_parametrization(ParamForm::Rapidity, -0.1, 1.0), DomainError);
        CHECK_THROWS_AS(convert_parametrization(ParamForm::Reflectivity, 1.2, 1.0), DomainError);
    }
}

TEST_CASE("zeta = 1 squeezed jump matches a zero-phase waveguide channel up to sqrt(2)") {
    const auto sq = build_squeezed_jump({1.0, 1.0, 4});
    WaveguideModel wm{1.0, {0.0, 0.0, 0.0, 0.0}, 4};
    const auto wg = build_waveguide_operators(wm);
    for (int j = 0; j < 4; ++j) {
        CHECK(std::abs(sq.lower(j) - std::sqrt(2.0) * wg.j_right.lower(j)) < 1e-14);
        CHECK(std::abs(sq.raise(j)) == 0.0);
    }
}
