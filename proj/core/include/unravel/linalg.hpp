// linalg.hpp — thin QR / SVD kernels for the tensor sweeps
#pragma once

#include <Eigen/Dense>

namespace unravel::linalg {

// A (m x n) = Q (m x k) R (k x n), k = min(m, n), R upper trapezoidal.
void qr_thin(const Eigen::MatrixXcd& a, Eigen::MatrixXcd& q, Eigen::MatrixXcd& r);

// A (m x n) = U (m x k) diag(s) Vdag (k x n), k = min(m, n), s descending.
void svd_thin(const Eigen::MatrixXcd& a, Eigen::MatrixXcd& u, Eigen::VectorXd& s,
              Eigen::MatrixXcd& vdag);

}  // namespace unravel::linalg
