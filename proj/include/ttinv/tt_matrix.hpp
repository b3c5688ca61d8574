#pragma once

#include <Eigen/Core>

#include "ttinv/tt_tensor.hpp"

namespace ttinv {

/// One TT-matrix core of shape (r0, m, n, r1): m is the row mode, n the
/// column mode. Stored flat row-major, row index slower than column.
struct TTMatrixCore {
  Index r0 = 1, m = 1, n = 1, r1 = 1;
  std::vector<Complex> data;

  TTMatrixCore() = default;
  TTMatrixCore(Index r0_, Index m_, Index n_, Index r1_)
      : r0(r0_), m(m_), n(n_), r1(r1_),
        data(static_cast<size_t>(r0_ * m_ * n_ * r1_), Complex(0, 0)) {}

  Complex& at(Index a, Index i, Index j, Index b) {
    return data[static_cast<size_t>((((a * m) + i) * n + j) * r1 + b)];
  }
  Complex at(Index a, Index i, Index j, Index b) const {
    return data[static_cast<size_t>((((a * m) + i) * n + j) * r1 + b)];
  }
};

/// Operator in TT format with paired (row, col) mode dimensions per core.
class TTMatrix {
public:
  TTMatrix() = default;
  explicit TTMatrix(std::vector<TTMatrixCore> cores) : cores_(std::move(cores)) { validate(); }

  Index order() const { return static_cast<Index>(cores_.size()); }
  std::vector<Index> row_sizes() const;
  std::vector<Index> col_sizes() const;
  std::vector<Index> ranks() const;

  const std::vector<TTMatrixCore>& cores() const { return cores_; }
  std::vector<TTMatrixCore>& cores() { return cores_; }
  const TTMatrixCore& core(Index k) const { return cores_[static_cast<size_t>(k)]; }
  TTMatrixCore& core(Index k) { return cores_[static_cast<size_t>(k)]; }

  /// Flatten each (m_k, n_k) pair into one mode of size m_k*n_k
  /// (row index slower); the result is a valid TTTensor.
  TTTensor flatten() const;

  /// Dense materialization as a (prod m_k) x (prod n_k) matrix, both
  /// sides row-major over their multi-indices. Guarded by the cap on
  /// the total entry count.
  Eigen::MatrixXcd to_dense_matrix(Index dense_cap = kDefaultDenseCap) const;

  /// Identity operator of the given mode sizes, all ranks 1.
  static TTMatrix identity(const std::vector<Index>& mode_sizes);

  void validate() const;

private:
  std::vector<TTMatrixCore> cores_;
};

}  // namespace ttinv
