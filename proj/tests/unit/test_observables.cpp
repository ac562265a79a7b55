#include <doctest.h>

#include <cmath>
#include <random>

#include "unravel/errors.hpp"
#include "unravel/observables.hpp"
#include "unravel/pauli.hpp"

using namespace unravel;
using Eigen::MatrixXcd;

namespace {

MatrixXcd random_density(int dim, unsigned seed) {
    std::mt19937 gen(seed);
    std::normal_distribution<double> dist;
    MatrixXcd g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g(i, j) = std::complex<double>(dist(gen), dist(gen));
    MatrixXcd rho = g * g.adjoint();
    return rho / rho.trace().real();
}

MatrixXcd kron(const MatrixXcd& a, const MatrixXcd& b) {
    MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

}  // namespace

TEST_CASE("entropy basics") {
    SUBCASE("pure state has zero entropy") {
        MatrixXcd rho = MatrixXcd::Zero(4, 4);
        rho(2, 2) = 1.0;
        CHECK(obs::von_neumann_entropy(rho) == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("maximally mixed 4x4 has two bits") {
        CHECK(obs::von_neumann_entropy(MatrixXcd::Identity(4, 4) / 4.0) ==
              doctest::Approx(2.0).epsilon(1e-12));
    }
    SUBCASE("additivity on random tensor products") {
        for (unsigned seed : {1u, 2u, 3u}) {
            const MatrixXcd a = random_density(2, seed);
            const MatrixXcd b = random_density(3, seed + 100);
            CHECK(obs::von_neumann_entropy(kron(a, b)) ==
                  doctest::Approx(obs::von_neumann_entropy(a) + obs::von_neumann_entropy(b))
                      .epsilon(1e-10));
        }
    }
    SUBCASE("small negativity clipped, larger rejected") {
        MatrixXcd rho = MatrixXcd::Zero(2, 2);
        rho(0, 0) = 1.0 + 5e-9;
        rho(1, 1) = -5e-9;
        CHECK(obs::von_neumann_entropy(rho) >= 0.0);
        rho(0, 0) = 1.0 + 5e-7;
        rho(1, 1) = -5e-7;
        CHECK_THROWS_AS(obs::von_neumann_entropy(rho), DomainError);
    }
}

TEST_CASE("mutual information") {
    SUBCASE("product state: zero") {
        const MatrixXcd a = random_density(2, 5), b = random_density(2, 6);
        CHECK(obs::mutual_information(kron(a, b), 2, 2) == doctest::Approx(0.0).epsilon(1e-9));
    }
    SUBCASE("Bell pair: two bits") {
        Eigen::Vector4cd bell;
        bell << 1, 0, 0, 1;
        bell /= std::sqrt(2.0);
        const MatrixXcd rho = bell * bell.adjoint();
        CHECK(obs::mutual_information(rho, 2, 2) == doctest::Approx(2.0).epsilon(1e-10));
    }
    SUBCASE("classical mixture of |00>, |11>: one bit") {
        MatrixXcd rho = MatrixXcd::Zero(4, 4);
        rho(0, 0) = 0.5;
        rho(3, 3) = 0.5;
        CHECK(obs::mutual_information(rho, 2, 2) == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("entropy concavity spot-check") {
    for (unsigned seed : {11u, 12u, 13u}) {
        const MatrixXcd a = random_density(4, seed), b = random_density(4, seed + 50);
        const double lhs = obs::von_neumann_entropy((a + b) / 2.0);
        const double rhs = 0.5 * (obs::von_neumann_entropy(a) + obs::von_neumann_entropy(b));
        CHECK(lhs >= rhs - 1e-10);
    }
}

TEST_CASE("trace norm") {
    Eigen::Vector4cd bell;
    bell << 1, 0, 0, 1;
    bell /= std::sqrt(2.0);
    const MatrixXcd diff = bell * bell.adjoint() - MatrixXcd::Identity(4, 4) / 4.0;
    CHECK(obs::trace_norm_hermitian(diff) == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("spin squeezing") {
    SUBCASE("coherent state gives exactly one") {
        for (int n : {2, 10, 50}) {
            obs::CollectiveMoments m;
            m.n = n;
            m.mean << 0, 0, n / 2.0;
            m.second_sym << n / 4.0, 0, 0, 0, n / 4.0, 0, 0, 0, n * n / 4.0;
            CHECK(obs::spin_squeezing(m) == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    SUBCASE("rotation invariance") {
        obs::CollectiveMoments m;
        m.n = 6;
        m.mean << 0.3, -0.2, 2.1;
        Eigen::Matrix3d c;
        c << 1.5, 0.2, 0.1, 0.2, 1.1, -0.3, 0.1, -0.3, 4.0;
        m.second_sym = c;
        const double xi = obs::spin_squeezing(m);
        std::mt19937 gen(3);
        std::normal_distribution<double> dist;
        for (int rep = 0; rep < 5; ++rep) {
            Eigen::Matrix3d g;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) g(i, j) = dist(gen);
            const Eigen::HouseholderQR<Eigen::Matrix3d> qr(g);
            Eigen::Matrix3d r = qr.householderQ();
            obs::CollectiveMoments mr;
            mr.n = m.n;
            mr.mean = r * m.mean;
            mr.second_sym = r * m.second_sym * r.transpose();
            CHECK(obs::spin_squeezing(mr) == doctest::Approx(xi).epsilon(1e-8));
        }
    }
    SUBCASE("vanishing mean spin is an error") {
        obs::CollectiveMoments m;
        m.n = 4;
        m.mean.setZero();
        m.second_sym.setIdentity();
        CHECK_THROWS_AS(obs::spin_squeezing(m), DomainError);
    }
    SUBCASE("matches a transverse angle scan") {
        // oracle: scan 360 directions in the plane orthogonal to <S>
        std::mt19937 gen(17);
        std::normal_distribution<double> dist;
        for (int rep = 0; rep < 4; ++rep) {
            obs::CollectiveMoments m;
            m.n = 4;
            m.mean << dist(gen), dist(gen), dist(gen);
            Eigen::Matrix3d g;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) g(i, j) = dist(gen);
            m.second_sym = g * g.transpose() + m.mean * m.mean.transpose();

            const Eigen::Vector3d dir = m.mean.normalized();
            Eigen::Vector3d seed = std::abs(dir.z()) < 0.9 ? Eigen::Vector3d::UnitZ()
                                                           : Eigen::Vector3d::UnitX();
            const Eigen::Vector3d e1 = dir.cross(seed).normalized();
            const Eigen::Vector3d e2 = dir.cross(e1).normalized();
            double vmin = 1e300;
            for (int k = 0; k < 360; ++k) {
                const double a = M_PI * k / 360.0;
                const Eigen::Vector3d u = std::cos(a) * e1 + std::sin(a) * e2;
                vmin = std::min(vmin, double(u.dot(m.second_sym * u) - std::pow(u.dot(m.mean), 2)));
            }
            const double oracle = m.n * vmin / m.mean.squaredNorm();
            CHECK(obs::spin_squeezing(m) == doctest::Approx(oracle).epsilon(1e-5));
        }
    }
}

TEST_CASE("emission rate assembly") {
    SUBCASE("fully inverted product state") {
        // collective route: <Sz> = n/2, <Sx^2 + Sy^2> = n/2
        for (double z : {0.3, 1.0}) {
            const int n = 6;
            const double r = obs::squeezed_rate_collective(1.0, z, n / 2.0, n / 2.0);
            CHECK(r == doctest::Approx(n * (1.0 + z) * (1.0 + z) / 4.0).epsilon(1e-12));
            const double rs = obs::squeezed_rate_sites(1.0, z, n, n, 0.0);
            CHECK(rs == doctest::Approx(r).epsilon(1e-12));
        }
    }
    SUBCASE("single excited emitter, zeta = 1") {
        CHECK(obs::squeezed_rate_collective(1.0, 1.0, 0.5, 0.5) == doctest::Approx(1.0));
    }
}
