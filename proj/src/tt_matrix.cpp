#include "ttinv/tt_matrix.hpp"

namespace ttinv {

void TTMatrix::validate() const {
  require(!cores_.empty(), ErrorCode::argument, "TTMatrix: order must be at least 1");
  require(cores_.front().r0 == 1 && cores_.back().r1 == 1, ErrorCode::argument,
          "TTMatrix: boundary ranks must be 1");
  Index prev = 1;
  for (const auto& c : cores_) {
    require(c.r0 == prev, ErrorCode::argument, "TTMatrix: rank chain mismatch");
    require(c.m >= 1 && c.n >= 1, ErrorCode::argument, "TTMatrix: mode sizes must be positive");
    require(static_cast<Index>(c.data.size()) == c.r0 * c.m * c.n * c.r1, ErrorCode::argument,
            "TTMatrix: core buffer does not match its shape");
    prev = c.r1;
  }
}

std::vector<Index> TTMatrix::row_sizes() const {
  std::vector<Index> v;
  v.reserve(cores_.size());
  for (const auto& c : cores_) v.push_back(c.m);
  return v;
}

std::vector<Index> TTMatrix::col_sizes() const {
  std::vector<Index> v;
  v.reserve(cores_.size());
  for (const auto& c : cores_) v.push_back(c.n);
  return v;
}

std::vector<Index> TTMatrix::ranks() const {
  std::vector<Index> r;
  r.reserve(cores_.size() + 1);
  r.push_back(1);
  for (const auto& c : cores_) r.push_back(c.r1);
  return r;
}

TTTensor TTMatrix::flatten() const {
  std::vector<TTCore> cores;
  cores.reserve(cores_.size());
  for (const auto& c : cores_) {
    TTCore t(c.r0, c.m * c.n, c.r1);
    t.data = c.data;  // (a, (i,j), b) layout coincides with (a, i, j, b)
    cores.push_back(std::move(t));
  }
  return TTTensor(std::move(cores));
}

Eigen::MatrixXcd TTMatrix::to_dense_matrix(Index dense_cap) const {
  Index total = 1;
  for (const auto& c : cores_) total *= c.m * c.n;
  require(total <= dense_cap, ErrorCode::size_cap, "TTMatrix: dense materialization exceeds cap");

  // progressive contraction: block (R rows x C cols x r) flattened as
  // (R*C) x r with row-major (row, col) pairs
  Index rows = 1, cols = 1;
  Eigen::MatrixXcd cur = Eigen::MatrixXcd::Ones(1, 1);
  for (const auto& c : cores_) {
    Eigen::MatrixXcd next = Eigen::MatrixXcd::Zero(rows * c.m * cols * c.n, c.r1);
    for (Index rc = 0; rc < rows * cols; ++rc) {
      const Index R = rc / cols, C = rc % cols;
      for (Index i = 0; i < c.m; ++i)
        for (Index j = 0; j < c.n; ++j) {
          const Index out_row = (R * c.m + i) * (cols * c.n) + (C * c.n + j);
          for (Index b = 0; b < c.r1; ++b) {
            Complex acc(0, 0);
            for (Index a = 0; a < c.r0; ++a) acc += cur(rc, a) * c.at(a, i, j, b);
            next(out_row, b) = acc;
          }
        }
    }
    cur = std::move(next);
    rows *= c.m;
    cols *= c.n;
  }
  Eigen::MatrixXcd out(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) out(i, j) = cur(i * cols + j, 0);
  return out;
}

TTMatrix TTMatrix::identity(const std::vector<Index>& mode_sizes) {
  std::vector<TTMatrixCore> cores;
  cores.reserve(mode_sizes.size());
  for (Index n : mode_sizes) {
    TTMatrixCore c(1, n, n, 1);
    for (Index i = 0; i < n; ++i) c.at(0, i, i, 0) = Complex(1, 0);
    cores.push_back(std::move(c));
  }
  return TTMatrix(std::move(cores));
}

}  // namespace ttinv
