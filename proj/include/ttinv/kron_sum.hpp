#pragma once

#include <functional>
#include <optional>
#include <utility>

#include "ttinv/tt_algebra.hpp"
#include "ttinv/tt_matrix.hpp"

namespace ttinv {

/// One summand coeff * (a (x) b) of a per-mode operator. The Kronecker
/// row index is (i_a, i_b) with i_a slower (matrix convention); a and b
/// may be flagged as identities to skip their multiplications.
struct Kron2Term {
  Complex coeff{1.0, 0.0};
  Matrix a, b;
  bool a_identity = false, b_identity = false;
};

/// Square operator acting on a single tensor mode, stored as a short sum
/// of Kronecker products so that large structured factors (e.g. the
/// kinetic transport factor diag(v) (x) grad) never need densifying.
class ModeOperator {
public:
  ModeOperator() = default;

  static ModeOperator from_dense(Matrix s);
  static ModeOperator identity(Index n);
  /// coeff * (a (x) b); pass empty matrices with identity sizes via the
  /// explicit overload below when one side is the identity.
  static ModeOperator kron2(Complex coeff, Matrix a, Matrix b);

  void add_term(Kron2Term term);

  Index dim() const { return dim_; }
  const std::vector<Kron2Term>& terms() const { return terms_; }
  bool is_identity(double tol = 1e-14) const;

  /// Apply to a (dim x c) block of columns.
  Matrix apply(const Matrix& x) const;
  /// Dense materialization (guarded by entry cap).
  Matrix dense(Index entry_cap = kDefaultDenseCap) const;

private:
  Index dim_ = 0;
  std::vector<Kron2Term> terms_;
};

/// The structured matrix L = sum_k M x ... x S^(k) x ... x M given by its
/// per-dimension factor pairs (S^(k), M^(k)).
class KroneckerSumOperator {
public:
  KroneckerSumOperator() = default;
  explicit KroneckerSumOperator(std::vector<std::pair<ModeOperator, ModeOperator>> factors);

  /// Dense factor convenience constructor.
  static KroneckerSumOperator from_dense_factors(const std::vector<std::pair<Matrix, Matrix>>& sm);

  Index order() const { return static_cast<Index>(factors_.size()); }
  std::vector<Index> mode_sizes() const;
  const ModeOperator& s(Index k) const { return factors_[static_cast<size_t>(k)].first; }
  const ModeOperator& m(Index k) const { return factors_[static_cast<size_t>(k)].second; }
  bool m_is_identity(Index k) const { return m_identity_[static_cast<size_t>(k)]; }

  /// Dense N x N materialization for desk-scale oracles; the cap bounds
  /// the entry count N^2.
  Matrix dense(Index entry_cap = kDefaultDenseCap) const;

private:
  std::vector<std::pair<ModeOperator, ModeOperator>> factors_;
  std::vector<bool> m_identity_;
};

/// Invertible transform on one mode: optional input scatter permutation,
/// a dense or Kronecker-structured matrix, optional output gather
/// permutation. Permutations carry eigenvalue ordering for structured
/// factorizations without densifying the basis.
class FactorMap {
public:
  FactorMap() = default;
  static FactorMap dense(Matrix m);
  static FactorMap kron2(Matrix a, Matrix b, bool a_identity, bool b_identity);

  void set_pre_scatter(std::vector<Index> perm);   // z[perm[i]] = x[i]
  void set_post_gather(std::vector<Index> perm);   // y[i] = w[perm[i]]

  Index dim() const { return dim_; }
  Matrix apply(const Matrix& x) const;             // map * x
  Matrix apply_transposed(const Matrix& x) const;  // map^T * x
  Matrix dense_matrix() const;
  double cond() const;                             // kappa, 1 for unitary parts

private:
  Index dim_ = 0;
  bool is_dense_ = true;
  Matrix m_, a_, b_;
  bool a_identity_ = false, b_identity_ = false;
  std::vector<Index> pre_, post_;
};

/// Joint diagonalization data: U_k S^(k) V_k = diag(mu^(k)) and
/// U_k M^(k) V_k = diag(lambda^(k)). All construction paths normalize to
/// lambda == 1 (U = (M V)^{-1}), which the inversion pipeline relies on.
struct SpectralFactorization {
  std::vector<FactorMap> u, v, uinv, vinv;
  std::vector<Vector> mu, lambda;
  std::vector<bool> unitary;
  std::vector<double> cond_u, cond_v;
  std::vector<double> residual;  // recorded relative diagonalization residuals

  Index order() const { return static_cast<Index>(mu.size()); }
  std::vector<Index> mode_sizes() const {
    std::vector<Index> ms;
    for (const auto& m : mu) ms.push_back(m.size());
    return ms;
  }
};

/// Condition-number ceiling beyond which a pencil is rejected as
/// numerically defective.
inline constexpr double kDefectiveCond = 1e8;

/// Diagonalize every factor pair. Strategy ladder per factor:
/// structured diagonal-times-circulant sums go through the Fourier
/// basis; M = I with Hermitian S through the Hermitian eigensolver;
/// Hermitian definite pencils through the generalized Hermitian solver;
/// anything else through the eigendecomposition of M^{-1} S.
/// Eigenvalues are ordered by descending Re(mu/lambda), ties by
/// descending Im, and eigenvector phases are fixed deterministically.
SpectralFactorization joint_diagonalize(const KroneckerSumOperator& op, double tol = 1e-10);

/// The rank-(1,2,...,2,1) TT tensor with entries
/// sum_k lambda_{j_1}...mu_{j_k}...lambda_{j_d}.
TTTensor lambda_tensor(const SpectralFactorization& fact);

/// Diagonal TTMatrix with diagonal vec(X); ranks unchanged.
TTMatrix expanding(const TTTensor& x);

/// TT representation of L^{-1} = (x_k V_k) diag(vec Xinv) (x_k U_k),
/// where Xinv is the Hadamard inverse of lambda_tensor(fact).
TTMatrix assemble_inverse(const SpectralFactorization& fact, const TTTensor& xinv);

/// Solve L u = f without assembling the inverse: mode products by U_k,
/// Hadamard with Xinv, mode products by V_k.
TTTensor solve(const SpectralFactorization& fact, const TTTensor& xinv, const TTTensor& f,
               double round_eps = 0.0);

/// TT application u -> L u as the sum of per-dimension mode products,
/// rounded at round_eps when positive.
TTTensor apply_operator(const KroneckerSumOperator& op, const TTTensor& u, double round_eps = 0.0);

/// A-priori relative error bound prod_k kappa(U_k) kappa(V_k) * kappa_L *
/// rel_residual on ||X - L^{-1}||_F / ||L^{-1}||_F.
double accuracy_bound(const SpectralFactorization& fact, double kappa_l, double rel_residual);

/// Certified bounds (lower on min |entry|, upper on max |entry|) of the
/// lambda tensor from per-mode interval arithmetic; exact for real
/// spectra. Used to bound kappa_L = max|L|/min|L|.
std::pair<double, double> lambda_entry_range(const SpectralFactorization& fact);

namespace detail {
/// Apply a mode-axis linear map fn (given as (n x c) -> (n' x c)) to
/// mode k (1-based) of a TT tensor.
TTTensor apply_to_mode(const TTTensor& t, Index k, const std::function<Matrix(const Matrix&)>& fn);
}  // namespace detail

}  // namespace ttinv
