#pragma once

#include <optional>

#include <Eigen/Core>

#include "ttinv/tt_tensor.hpp"

namespace ttinv {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Elementwise sum; internal ranks add, boundary ranks stay 1.
TTTensor add(const TTTensor& a, const TTTensor& b);

/// Elementwise s*a; the scalar is absorbed into the first core.
TTTensor scale(const TTTensor& a, Complex s);

/// a - b, convenience wrapper over add/scale.
TTTensor subtract(const TTTensor& a, const TTTensor& b);

/// Elementwise (Hadamard) product; internal ranks multiply.
TTTensor hadamard(const TTTensor& a, const TTTensor& b);

/// Kronecker product of two TT tensors of equal order. Mode sizes
/// multiply; the combined index is s_k = i_k + (j_k - 1) n_k with i_k
/// indexing `a` (1-based, a's index fastest). Ranks multiply.
TTTensor kronecker(const TTTensor& a, const TTTensor& b);

/// Mode-k product with a dense matrix (k is 1-based); only core k changes.
TTTensor mode_k_product(const TTTensor& a, const Matrix& u, Index k);

/// Tensor-times-matrix chain over distinct modes; order-independent.
TTTensor ttmc(const TTTensor& a, const std::vector<std::pair<Matrix, Index>>& factors);

struct RoundInfo {
  bool cap_hit = false;    // max_rank, not eps, was binding somewhere
  double norm = 0.0;       // Frobenius norm observed during the sweep
};

/// TT-rounding: right-to-left orthogonalization then left-to-right
/// truncated SVD, per-step threshold delta = eps*||a||_F/sqrt(d-1).
/// Keeps the smallest rank whose tail energy is <= delta^2; max_rank
/// is a hard cap applied after the eps rule.
TTTensor round(const TTTensor& a, double eps, std::optional<Index> max_rank = std::nullopt,
               RoundInfo* info = nullptr);

namespace detail {

/// Right-to-left orthogonalization sweep in place; after the call every
/// core except the first has orthonormal rows in its right unfolding,
/// so ||t||_F equals the norm of core 0.
void orthogonalize_rl(TTTensor& t);

/// Numerical-rank floor: singular values <= s_max * eps_mach * max(m,n)
/// are treated as exact zeros.
Index numerical_rank(const Eigen::VectorXd& s, Index rows, Index cols);

/// Smallest rank with tail energy <= delta^2 (ties toward smaller rank),
/// intersected with the numerical-rank floor; at least 1.
Index truncation_rank(const Eigen::VectorXd& s, double delta, Index rows, Index cols);

}  // namespace detail

}  // namespace ttinv
