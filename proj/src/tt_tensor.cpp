#include "ttinv/tt_tensor.hpp"

#include <cmath>

#include <Eigen/Core>

#include "backend.hpp"
#include "ttinv/tt_algebra.hpp"

namespace ttinv {

using RowMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapRM = Eigen::Map<RowMat>;
using CMapRM = Eigen::Map<const RowMat>;

void TTTensor::validate() const {
  require(!cores_.empty(), ErrorCode::argument, "TTTensor: order must be at least 1");
  require(cores_.front().r0 == 1 && cores_.back().r1 == 1, ErrorCode::argument,
          "TTTensor: boundary ranks must be 1");
  Index prev = 1;
  for (const auto& c : cores_) {
    require(c.r0 == prev, ErrorCode::argument, "TTTensor: rank chain mismatch between cores");
    require(c.r0 >= 1 && c.n >= 1 && c.r1 >= 1, ErrorCode::argument,
            "TTTensor: core dimensions must be positive");
    require(static_cast<Index>(c.data.size()) == c.r0 * c.n * c.r1, ErrorCode::argument,
            "TTTensor: core buffer does not match its shape");
    prev = c.r1;
  }
}

Complex element(const TTTensor& t, const std::vector<Index>& idx) {
  const Index d = t.order();
  require(static_cast<Index>(idx.size()) == d, ErrorCode::argument,
          "element: index arity does not match order");
  Eigen::RowVectorXcd v;
  for (Index k = 0; k < d; ++k) {
    const TTCore& c = t.core(k);
    require(idx[static_cast<size_t>(k)] >= 1 && idx[static_cast<size_t>(k)] <= c.n,
            ErrorCode::bounds, "element: index out of range");
    const Index i = idx[static_cast<size_t>(k)] - 1;
    // slice (r0 x r1) at mode index i: rows are strided by n*r1
    Eigen::Map<const RowMat, 0, Eigen::OuterStride<>> slice(
        c.data.data() + i * c.r1, c.r0, c.r1, Eigen::OuterStride<>(c.n * c.r1));
    if (k == 0) {
      v = slice.row(0);
    } else {
      v = v * slice;
    }
  }
  return v(0);
}

DenseTensor to_dense(const TTTensor& t, Index dense_cap) {
  const Index total = t.size();
  require(total <= dense_cap, ErrorCode::size_cap,
          "to_dense: tensor has " + std::to_string(total) + " entries, cap is " +
              std::to_string(dense_cap));
  // progressive contraction, keeping row-major (i_1..i_k) x r_k
  const TTCore& c0 = t.core(0);
  RowMat cur = CMapRM(c0.data.data(), c0.n, c0.r1);
  for (Index k = 1; k < t.order(); ++k) {
    const TTCore& c = t.core(k);
    CMapRM right(c.data.data(), c.r0, c.n * c.r1);
    RowMat next = cur * right;  // (N_prev x n*r1)
    cur = MapRM(next.data(), next.rows() * c.n, c.r1);
  }
  std::vector<Complex> entries(cur.data(), cur.data() + cur.size());
  return DenseTensor(t.mode_sizes(), std::move(entries));
}

TTTensor from_dense(const DenseTensor& dst, double eps) {
  require(eps >= 0.0, ErrorCode::argument, "from_dense: eps must be nonnegative");
  const Index d = dst.order();
  const auto& modes = dst.mode_sizes();
  if (d == 1) {
    TTCore c(1, modes[0], 1);
    c.data = dst.entries();
    return TTTensor({std::move(c)});
  }
  const double norm = dst.frobenius_norm();
  if (norm == 0.0) return tt_zero(modes);
  const double delta = eps * norm / std::sqrt(static_cast<double>(d - 1));

  std::vector<TTCore> cores;
  cores.reserve(static_cast<size_t>(d));
  RowMat cur = CMapRM(dst.data(), modes[0], dst.size() / modes[0]);
  Index r_prev = 1;
  for (Index k = 0; k + 1 < d; ++k) {
    const Index nk = modes[static_cast<size_t>(k)];
    MapRM m(cur.data(), r_prev * nk, cur.size() / (r_prev * nk));
    backend::SVD svd = backend::thin_svd(m);
    const Index r = detail::truncation_rank(svd.s, delta, m.rows(), m.cols());
    TTCore core(r_prev, nk, r);
    MapRM(core.data.data(), r_prev * nk, r) = svd.u.leftCols(r);
    cores.push_back(std::move(core));
    cur = svd.s.head(r).asDiagonal() * svd.vh.topRows(r);
    r_prev = r;
  }
  TTCore last(r_prev, modes[static_cast<size_t>(d - 1)], 1);
  MapRM(last.data.data(), r_prev, modes[static_cast<size_t>(d - 1)]) = cur;
  cores.push_back(std::move(last));
  return TTTensor(std::move(cores));
}

std::vector<Complex> matricize(const DenseTensor& dst, Index k, Index* rows_out, Index* cols_out) {
  const Index d = dst.order();
  require(k >= 1 && k <= d - 1, ErrorCode::argument, "matricize: split index out of range");
  Index rows = 1;
  for (Index s = 0; s < k; ++s) rows *= dst.mode_sizes()[static_cast<size_t>(s)];
  const Index cols = dst.size() / rows;
  if (rows_out) *rows_out = rows;
  if (cols_out) *cols_out = cols;
  // row-major storage realizes the index bijection directly
  return dst.entries();
}

double DenseTensor::frobenius_norm() const {
  double acc = 0.0;
  for (const Complex& z : entries_) acc += std::norm(z);
  return std::sqrt(acc);
}

double frobenius_norm(const TTTensor& t) {
  TTTensor copy = t;
  detail::orthogonalize_rl(copy);
  const auto& c0 = copy.core(0);
  double acc = 0.0;
  for (const Complex& z : c0.data) acc += std::norm(z);
  return std::sqrt(acc);
}

TTTensor conjugate(const TTTensor& t) {
  TTTensor out = t;
  for (auto& c : out.cores())
    for (auto& z : c.data) z = std::conj(z);
  return out;
}

TTTensor tt_ones(const std::vector<Index>& mode_sizes) {
  std::vector<std::vector<Complex>> vecs;
  vecs.reserve(mode_sizes.size());
  for (Index n : mode_sizes) vecs.emplace_back(static_cast<size_t>(n), Complex(1, 0));
  return tt_rank_one(vecs);
}

TTTensor tt_rank_one(const std::vector<std::vector<Complex>>& mode_vectors) {
  require(!mode_vectors.empty(), ErrorCode::argument, "tt_rank_one: empty mode list");
  std::vector<TTCore> cores;
  cores.reserve(mode_vectors.size());
  for (const auto& v : mode_vectors) {
    require(!v.empty(), ErrorCode::argument, "tt_rank_one: empty mode vector");
    TTCore c(1, static_cast<Index>(v.size()), 1);
    c.data = v;
    cores.push_back(std::move(c));
  }
  return TTTensor(std::move(cores));
}

TTTensor tt_zero(const std::vector<Index>& mode_sizes) {
  std::vector<TTCore> cores;
  cores.reserve(mode_sizes.size());
  for (Index n : mode_sizes) cores.emplace_back(1, n, 1);
  return TTTensor(std::move(cores));
}

}  // namespace ttinv
