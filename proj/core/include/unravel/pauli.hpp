// pauli.hpp — single-qubit operator conventions used by every backend
//
// Basis ordering is |0> = ground, |1> = excited.  The fixed convention:
//   sigma_plus  = |1><0|,  sigma_minus = |0><1|,
//   sigma_x = sigma_plus + sigma_minus,
//   sigma_y = -i (sigma_plus - sigma_minus),
//   sigma_z = |1><1| - |0><0|,
// so that sigma_x - i z sigma_y = (1-z) sigma_plus + (1+z) sigma_minus.
#pragma once

#include <Eigen/Dense>
#include <complex>

namespace unravel::pauli {

using Eigen::Matrix2cd;
using namespace std::complex_literals;

inline Matrix2cd id2() { return Matrix2cd::Identity(); }

inline Matrix2cd plus() {
    Matrix2cd m = Matrix2cd::Zero();
    m(1, 0) = 1.0;  // |1><0|
    return m;
}

inline Matrix2cd minus() {
    Matrix2cd m = Matrix2cd::Zero();
    m(0, 1) = 1.0;  // |0><1|
    return m;
}

inline Matrix2cd x() { return plus() + minus(); }

inline Matrix2cd y() { return -1i * (plus() - minus()); }

inline Matrix2cd z() {
    Matrix2cd m = Matrix2cd::Zero();
    m(0, 0) = -1.0;
    m(1, 1) = 1.0;
    return m;
}

}  // namespace unravel::pauli
