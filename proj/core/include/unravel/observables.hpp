// observables.hpp — entropies, mutual information, spin squeezing, rates
//
// All entropies are in bits (log base 2).
#pragma once

#include <Eigen/Dense>
#include <vector>

namespace unravel::obs {

// -sum_i p_i log2 p_i over the eigenvalues of rho, with 0 log 0 = 0.
// Eigenvalues in [-1e-8, 0) are clipped to 0; larger negativity, a
// non-unit trace or a non-Hermitian input raise an error.
double von_neumann_entropy(const Eigen::MatrixXcd& rho);

// Entropy of a normalized Schmidt spectrum: -sum lambda^2 log2 lambda^2.
double entropy_from_schmidt(const std::vector<double>& schmidt_values);

// Partial traces of a state on A (dim_a) x B (dim_b), row-major index
// i = a * dim_b + b.
Eigen::MatrixXcd ptrace_b(const Eigen::MatrixXcd& rho_ab, int dim_a, int dim_b);
Eigen::MatrixXcd ptrace_a(const Eigen::MatrixXcd& rho_ab, int dim_a, int dim_b);

// S(rho_A) + S(rho_B) - S(rho_AB) >= 0 (up to clipping tolerance).
double mutual_information(const Eigen::MatrixXcd& rho_ab, int dim_a, int dim_b);

// Sum of absolute eigenvalues of a Hermitian matrix.
double trace_norm_hermitian(const Eigen::MatrixXcd& m);

// First moments <S_a> and symmetrized second moments Re<S_a S_b> of the
// collective spin, plus the emitter count.
struct CollectiveMoments {
    Eigen::Vector3d mean = Eigen::Vector3d::Zero();
    Eigen::Matrix3d second_sym = Eigen::Matrix3d::Zero();
    int n = 0;
};

// Wineland parameter xi_R^2 = N min(Var S_perp) / <S>^2, minimizing over
// the plane orthogonal to the mean-spin direction via the 2x2 transverse
// covariance eigenproblem.  Throws DomainError when <S> vanishes.
double spin_squeezing(const CollectiveMoments& m);

// Emission rate of the squeezed model from collective moments:
// R = gamma (zeta^2+1)/2 <S_z> + gamma zeta <S_x^2 + S_y^2>.
double squeezed_rate_collective(double gamma, double zeta, double sz, double sxx_plus_syy);

// Same operator assembled from site sums: sum_sz = sum_j <sigma_j^z>,
// cross = sum_{j != l} <sigma_j^x sigma_l^x + sigma_j^y sigma_l^y>.
double squeezed_rate_sites(double gamma, double zeta, int n, double sum_sz, double cross);

}  // namespace unravel::obs
