#pragma once

#include <utility>

#include "ttinv/common.hpp"

namespace ttinv {

/// Dense d-th order complex tensor, row-major with mode 1 slowest.
///
/// Indices in the public interface are 1-based so that the usual
/// matricization bijection
///   i = i_k + (i_{k-1}-1) n_k + ... + (i_1-1) n_2...n_k
/// holds verbatim; storage is 0-based internally.
class DenseTensor {
public:
  DenseTensor() = default;

  explicit DenseTensor(std::vector<Index> mode_sizes)
      : modes_(std::move(mode_sizes)), entries_(checked_size(modes_), Complex(0, 0)) {}

  DenseTensor(std::vector<Index> mode_sizes, std::vector<Complex> entries)
      : modes_(std::move(mode_sizes)), entries_(std::move(entries)) {
    require(static_cast<Index>(entries_.size()) == checked_size(modes_), ErrorCode::argument,
            "DenseTensor: entry count does not match mode sizes");
  }

  Index order() const { return static_cast<Index>(modes_.size()); }
  const std::vector<Index>& mode_sizes() const { return modes_; }
  Index mode_size(Index k1) const {  // k1 is 1-based
    require(k1 >= 1 && k1 <= order(), ErrorCode::bounds, "mode index out of range");
    return modes_[static_cast<size_t>(k1 - 1)];
  }
  Index size() const { return static_cast<Index>(entries_.size()); }

  const std::vector<Complex>& entries() const { return entries_; }
  std::vector<Complex>& entries() { return entries_; }
  const Complex* data() const { return entries_.data(); }
  Complex* data() { return entries_.data(); }

  /// Row-major offset of a 1-based multi-index.
  Index offset(const std::vector<Index>& idx) const {
    require(static_cast<Index>(idx.size()) == order(), ErrorCode::argument,
            "index arity does not match tensor order");
    Index off = 0;
    for (size_t k = 0; k < modes_.size(); ++k) {
      require(idx[k] >= 1 && idx[k] <= modes_[k], ErrorCode::bounds, "index out of range");
      off = off * modes_[k] + (idx[k] - 1);
    }
    return off;
  }

  Complex operator()(const std::vector<Index>& idx) const { return entries_[static_cast<size_t>(offset(idx))]; }
  Complex& operator()(const std::vector<Index>& idx) { return entries_[static_cast<size_t>(offset(idx))]; }

  double frobenius_norm() const;

private:
  static Index checked_size(const std::vector<Index>& modes) {
    require(!modes.empty(), ErrorCode::argument, "tensor order must be at least 1");
    for (Index n : modes) require(n >= 1, ErrorCode::argument, "mode sizes must be positive");
    return product(modes);
  }

  std::vector<Index> modes_;
  std::vector<Complex> entries_;
};

}  // namespace ttinv
