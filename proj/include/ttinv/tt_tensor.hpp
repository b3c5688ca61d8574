#pragma once

#include <utility>

#include "ttinv/common.hpp"
#include "ttinv/dense_tensor.hpp"

namespace ttinv {

/// One TT core of shape (r0, n, r1), stored flat in row-major order.
struct TTCore {
  Index r0 = 1, n = 1, r1 = 1;
  std::vector<Complex> data;  // size r0*n*r1, index ((a*n + i)*r1 + b)

  TTCore() = default;
  TTCore(Index r0_, Index n_, Index r1_)
      : r0(r0_), n(n_), r1(r1_), data(static_cast<size_t>(r0_ * n_ * r1_), Complex(0, 0)) {}

  Complex& at(Index a, Index i, Index b) { return data[static_cast<size_t>((a * n + i) * r1 + b)]; }
  Complex at(Index a, Index i, Index b) const { return data[static_cast<size_t>((a * n + i) * r1 + b)]; }
};

/// Tensor in TT format: d cores with rank chain r_0 = r_d = 1.
class TTTensor {
public:
  TTTensor() = default;
  explicit TTTensor(std::vector<TTCore> cores) : cores_(std::move(cores)) { validate(); }

  Index order() const { return static_cast<Index>(cores_.size()); }

  std::vector<Index> mode_sizes() const {
    std::vector<Index> m;
    m.reserve(cores_.size());
    for (const auto& c : cores_) m.push_back(c.n);
    return m;
  }

  /// Rank chain (r_0, ..., r_d).
  std::vector<Index> ranks() const {
    std::vector<Index> r;
    r.reserve(cores_.size() + 1);
    r.push_back(1);
    for (const auto& c : cores_) r.push_back(c.r1);
    return r;
  }

  Index max_rank() const {
    Index r = 1;
    for (const auto& c : cores_) r = std::max(r, c.r1);
    return r;
  }

  Index size() const { return product(mode_sizes()); }

  const std::vector<TTCore>& cores() const { return cores_; }
  std::vector<TTCore>& cores() { return cores_; }
  const TTCore& core(Index k) const { return cores_[static_cast<size_t>(k)]; }  // 0-based
  TTCore& core(Index k) { return cores_[static_cast<size_t>(k)]; }

  void validate() const;

private:
  std::vector<TTCore> cores_;
};

/// Element evaluation by chained core-slice products; idx is 1-based.
Complex element(const TTTensor& t, const std::vector<Index>& idx);

/// Entry-exact contraction of the TT cores into a dense tensor.
DenseTensor to_dense(const TTTensor& t, Index dense_cap = kDefaultDenseCap);

/// TT-SVD with per-sweep threshold delta = eps*||D||_F/sqrt(d-1).
TTTensor from_dense(const DenseTensor& d, double eps);

/// Matricization along modes {1..k} (k is 1-based, 1 <= k <= d-1); the
/// result has prod_{s<=k} n_s rows, row-major on both sides.
std::vector<Complex> matricize(const DenseTensor& d, Index k, Index* rows_out, Index* cols_out);

/// Frobenius norm evaluated by core orthogonalization, no densification.
double frobenius_norm(const TTTensor& t);

/// Elementwise complex conjugate; ranks unchanged.
TTTensor conjugate(const TTTensor& t);

/// Rank-one TT tensor of all ones.
TTTensor tt_ones(const std::vector<Index>& mode_sizes);

/// Rank-one TT tensor with the given per-mode vectors (outer product).
TTTensor tt_rank_one(const std::vector<std::vector<Complex>>& mode_vectors);

/// Canonical rank-one zero tensor.
TTTensor tt_zero(const std::vector<Index>& mode_sizes);

}  // namespace ttinv
