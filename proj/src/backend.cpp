#include "backend.hpp"

#include <algorithm>

#ifdef TTINV_WITH_LAPACKE
#include <complex>
#define lapack_complex_double std::complex<double>
#define lapack_complex_float std::complex<float>
#include <lapacke.h>
#endif

namespace ttinv::backend {

#ifdef TTINV_WITH_LAPACKE

SVD thin_svd(Eigen::MatrixXcd a) {
  const lapack_int m = static_cast<lapack_int>(a.rows());
  const lapack_int n = static_cast<lapack_int>(a.cols());
  const lapack_int k = std::min(m, n);
  SVD out;
  if (k == 0) return out;
  out.u.resize(m, k);
  out.s.resize(k);
  out.vh.resize(k, n);
  lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'S', m, n, a.data(), m, out.s.data(),
                                   out.u.data(), m, out.vh.data(), k);
  if (info != 0) {
    // gesdd occasionally fails to converge; gesvd is the robust fallback.
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    out.u = svd.matrixU();
    out.s = svd.singularValues();
    out.vh = svd.matrixV().adjoint();
  }
  return out;
}

Eigen::VectorXd singular_values(Eigen::MatrixXcd a) {
  const lapack_int m = static_cast<lapack_int>(a.rows());
  const lapack_int n = static_cast<lapack_int>(a.cols());
  const lapack_int k = std::min(m, n);
  Eigen::VectorXd s(k);
  if (k == 0) return s;
  double* superb = new double[std::max<lapack_int>(1, k - 1)];
  lapack_int info = LAPACKE_zgesvd(LAPACK_COL_MAJOR, 'N', 'N', m, n, a.data(), m, s.data(),
                                   nullptr, m, nullptr, n, superb);
  delete[] superb;
  if (info != 0) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
    s = svd.singularValues();
  }
  return s;
}

QR thin_qr(Eigen::MatrixXcd a) {
  const lapack_int m = static_cast<lapack_int>(a.rows());
  const lapack_int n = static_cast<lapack_int>(a.cols());
  const lapack_int k = std::min(m, n);
  QR out;
  if (k == 0) {
    out.q.resize(m, 0);
    out.r.resize(0, n);
    return out;
  }
  std::vector<Complex> tau(static_cast<size_t>(k));
  lapack_int info = LAPACKE_zgeqrf(LAPACK_COL_MAJOR, m, n, a.data(), m, tau.data());
  require(info == 0, ErrorCode::numeric, "zgeqrf failed");
  out.r = a.topRows(k).triangularView<Eigen::Upper>();
  info = LAPACKE_zungqr(LAPACK_COL_MAJOR, m, k, k, a.data(), m, tau.data());
  require(info == 0, ErrorCode::numeric, "zungqr failed");
  out.q = a.leftCols(k);
  return out;
}

#else  // !TTINV_WITH_LAPACKE

SVD thin_svd(Eigen::MatrixXcd a) {
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return SVD{svd.matrixU(), svd.singularValues(), svd.matrixV().adjoint()};
}

Eigen::VectorXd singular_values(Eigen::MatrixXcd a) {
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(a);
  return svd.singularValues();
}

QR thin_qr(Eigen::MatrixXcd a) {
  const Eigen::Index k = std::min(a.rows(), a.cols());
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
  QR out;
  out.q = qr.householderQ() * Eigen::MatrixXcd::Identity(a.rows(), k);
  out.r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  return out;
}

#endif

LQ thin_lq(const Eigen::MatrixXcd& a) {
  QR qr = thin_qr(a.adjoint());
  return LQ{qr.r.adjoint(), qr.q.adjoint()};
}

}  // namespace ttinv::backend
