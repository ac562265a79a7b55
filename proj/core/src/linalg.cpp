#include "unravel/linalg.hpp"

#include <cstdlib>
#include <stdexcept>

#ifdef UNRAVEL_HAVE_LAPACKE
#include <lapacke.h>
#endif

namespace unravel::linalg {

namespace {

// Trajectory workers already saturate the cores; a threaded BLAS under
// them would just oversubscribe.  Must run before the first BLAS call.
[[maybe_unused]] const bool blas_single_thread = [] {
    setenv("OPENBLAS_NUM_THREADS", "1", 0);
    setenv("OMP_NUM_THREADS", "1", 0);
    return true;
}();

}  // namespace

#ifdef UNRAVEL_HAVE_LAPACKE

void qr_thin(const Eigen::MatrixXcd& a, Eigen::MatrixXcd& q, Eigen::MatrixXcd& r) {
    const int m = static_cast<int>(a.rows());
    const int n = static_cast<int>(a.cols());
    const int k = std::min(m, n);
    Eigen::MatrixXcd w = a;
    Eigen::VectorXcd tau(k);
    int info = LAPACKE_zgeqrf(LAPACK_COL_MAJOR, m, n,
                              reinterpret_cast<lapack_complex_double*>(w.data()), m,
                              reinterpret_cast<lapack_complex_double*>(tau.data()));
    if (info != 0) throw std::runtime_error("zgeqrf failed");
    r = w.topRows(k).triangularView<Eigen::Upper>();
    info = LAPACKE_zungqr(LAPACK_COL_MAJOR, m, k, k,
                          reinterpret_cast<lapack_complex_double*>(w.data()), m,
                          reinterpret_cast<lapack_complex_double*>(tau.data()));
    if (info != 0) throw std::runtime_error("zungqr failed");
    q = w.leftCols(k);
}

void svd_thin(const Eigen::MatrixXcd& a, Eigen::MatrixXcd& u, Eigen::VectorXd& s,
              Eigen::MatrixXcd& vdag) {
    const int m = static_cast<int>(a.rows());
    const int n = static_cast<int>(a.cols());
    const int k = std::min(m, n);
    Eigen::MatrixXcd w = a;
    u.resize(m, k);
    s.resize(k);
    vdag.resize(k, n);
    int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'S', m, n,
                              reinterpret_cast<lapack_complex_double*>(w.data()), m, s.data(),
                              reinterpret_cast<lapack_complex_double*>(u.data()), m,
                              reinterpret_cast<lapack_complex_double*>(vdag.data()), k);
    if (info != 0) {
        // gesdd occasionally fails to converge; gesvd is the slow, robust
        // fallback
        w = a;
        Eigen::VectorXd superb(std::max(1, k - 1));
        info = LAPACKE_zgesvd(LAPACK_COL_MAJOR, 'S', 'S', m, n,
                              reinterpret_cast<lapack_complex_double*>(w.data()), m, s.data(),
                              reinterpret_cast<lapack_complex_double*>(u.data()), m,
                              reinterpret_cast<lapack_complex_double*>(vdag.data()), k,
                              superb.data());
        if (info != 0) throw std::runtime_error("zgesvd failed");
    }
}

#else  // Eigen fallback

void qr_thin(const Eigen::MatrixXcd& a, Eigen::MatrixXcd& q, Eigen::MatrixXcd& r) {
    const Eigen::Index k = std::min(a.rows(), a.cols());
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
    q = qr.householderQ() * Eigen::MatrixXcd::Identity(a.rows(), k);
    r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
}

void svd_thin(const Eigen::MatrixXcd& a, Eigen::MatrixXcd& u, Eigen::VectorXd& s,
              Eigen::MatrixXcd& vdag) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    u = svd.matrixU();
    s = svd.singularValues();
    vdag = svd.matrixV().adjoint();
}

#endif

}  // namespace unravel::linalg
