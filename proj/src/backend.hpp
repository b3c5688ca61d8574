#pragma once

// Dense factorization backend. LAPACKE (zgesdd/zgeqrf/zungqr) when
// available, Eigen otherwise. All matrices are column-major MatrixXcd.

#include <Eigen/Core>
#include <Eigen/Dense>

#include "ttinv/common.hpp"

namespace ttinv::backend {

struct SVD {
  Eigen::MatrixXcd u;    // m x k
  Eigen::VectorXd s;     // k, descending
  Eigen::MatrixXcd vh;   // k x n
};

/// Thin (economy) SVD, k = min(m, n).
SVD thin_svd(Eigen::MatrixXcd a);

/// Singular values only, descending.
Eigen::VectorXd singular_values(Eigen::MatrixXcd a);

struct QR {
  Eigen::MatrixXcd q;  // m x k, orthonormal columns
  Eigen::MatrixXcd r;  // k x n, upper triangular (k = min(m, n))
};

/// Thin QR factorization.
QR thin_qr(Eigen::MatrixXcd a);

struct LQ {
  Eigen::MatrixXcd l;  // m x k, lower triangular
  Eigen::MatrixXcd q;  // k x n, orthonormal rows
};

/// Thin LQ factorization (QR of the adjoint).
LQ thin_lq(const Eigen::MatrixXcd& a);

}  // namespace ttinv::backend
