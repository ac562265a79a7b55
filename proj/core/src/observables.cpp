#include "unravel/observables.hpp"

#include <cmath>

#include "unravel/errors.hpp"

namespace unravel::obs {

namespace {

constexpr double kNegativityTol = 1e-8;

double entropy_of_probs(const Eigen::VectorXd& p) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        double pi = p(i);
        if (pi < 0.0) {
            if (pi < -kNegativityTol)
                throw DomainError("entropy: eigenvalue below -1e-8, input is not a density matrix");
            pi = 0.0;
        }
        if (pi > 0.0) s -= pi * std::log2(pi);
    }
    return s;
}

}  // namespace

double von_neumann_entropy(const Eigen::MatrixXcd& rho) {
    if (rho.rows() != rho.cols()) throw DomainError("entropy: matrix must be square");
    const double herm_dev = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    if (herm_dev > 1e-8) throw DomainError("entropy: input not Hermitian within 1e-8");
    const double tr_dev = std::abs(rho.trace().real() - 1.0) + std::abs(rho.trace().imag());
    if (tr_dev > 1e-6) throw DomainError("entropy: input trace differs from 1");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
    return entropy_of_probs(es.eigenvalues());
}

double entropy_from_schmidt(const std::vector<double>& schmidt_values) {
    double s = 0.0;
    for (double lam : schmidt_values) {
        const double p = lam * lam;
        if (p > 0.0) s -= p * std::log2(p);
    }
    return s;
}

Eigen::MatrixXcd ptrace_b(const Eigen::MatrixXcd& rho_ab, int dim_a, int dim_b) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim_a, dim_a);
    for (int a = 0; a < dim_a; ++a)
        for (int a2 = 0; a2 < dim_a; ++a2)
            for (int b = 0; b < dim_b; ++b) out(a, a2) += rho_ab(a * dim_b + b, a2 * dim_b + b);
    return out;
}

Eigen::MatrixXcd ptrace_a(const Eigen::MatrixXcd& rho_ab, int dim_a, int dim_b) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim_b, dim_b);
    for (int b = 0; b < dim_b; ++b)
        for (int b2 = 0; b2 < dim_b; ++b2)
            for (int a = 0; a < dim_a; ++a) out(b, b2) += rho_ab(a * dim_b + b, a * dim_b + b2);
    return out;
}

double mutual_information(const Eigen::MatrixXcd& rho_ab, int dim_a, int dim_b) {
    const double s_a = von_neumann_entropy(ptrace_b(rho_ab, dim_a, dim_b));
    const double s_b = von_neumann_entropy(ptrace_a(rho_ab, dim_a, dim_b));
    const double s_ab = von_neumann_entropy(rho_ab);
    return s_a + s_b - s_ab;
}

double trace_norm_hermitian(const Eigen::MatrixXcd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
}

double spin_squeezing(const CollectiveMoments& m) {
    const double len = m.mean.norm();
    if (len < 1e-12 * std::max(1, m.n))
        throw DomainError("spin_squeezing: mean spin vanishes, direction undefined");
    const Eigen::Vector3d dir = m.mean / len;

    // orthonormal basis of the transverse plane
    Eigen::Vector3d seed = std::abs(dir.z()) < 0.9 ? Eigen::Vector3d::UnitZ() : Eigen::Vector3d::UnitX();
    const Eigen::Vector3d e1 = dir.cross(seed).normalized();
    const Eigen::Vector3d e2 = dir.cross(e1).normalized();

    // transverse covariance; <S_e> = 0 along e1, e2 by construction only
    // for the mean, so subtract the (vanishing) first-moment products too.
    auto cov = [&](const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
        return a.dot(m.second_sym * b) - a.dot(m.mean) * b.dot(m.mean);
    };
    Eigen::Matrix2d v;
    v << cov(e1, e1), cov(e1, e2), cov(e2, e1), cov(e2, e2);
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(v, Eigen::EigenvaluesOnly);
    const double var_min = es.eigenvalues().minCoeff();
    return m.n * var_min / (len * len);
}

double squeezed_rate_collective(double gamma, double zeta, double sz, double sxx_plus_syy) {
    return gamma * (zeta * zeta + 1.0) / 2.0 * sz + gamma * zeta * sxx_plus_syy;
}

double squeezed_rate_sites(double gamma, double zeta, int n, double sum_sz, double cross) {
    return gamma / 4.0 * ((zeta * zeta + 1.0) * sum_sz + 2.0 * zeta * n) + gamma / 4.0 * zeta * cross;
}

}  // namespace unravel::obs
