#include "ttinv/kron_sum.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "backend.hpp"

namespace ttinv {

namespace {

Matrix kron_dense(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix kron2_apply(const Matrix& a, const Matrix& b, bool a_id, bool b_id, const Matrix& x) {
  const Index na = a.rows(), nb = b.rows();
  Matrix z;
  if (b_id) {
    z = x;
  } else {
    z.resize(x.rows(), x.cols());
    for (Index ia = 0; ia < na; ++ia)
      z.middleRows(ia * nb, nb).noalias() = b * x.middleRows(ia * nb, nb);
  }
  if (a_id) return z;
  Matrix w = Matrix::Zero(x.rows(), x.cols());
  for (Index ia = 0; ia < na; ++ia)
    for (Index ja = 0; ja < na; ++ja) {
      if (a(ia, ja) == Complex(0, 0)) continue;
      w.middleRows(ia * nb, nb).noalias() += a(ia, ja) * z.middleRows(ja * nb, nb);
    }
  return w;
}

bool approx_identity(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - Matrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() <= tol;
}

bool approx_hermitian(const Matrix& m, double tol) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol * std::max(1.0, m.cwiseAbs().maxCoeff());
}

bool is_diagonal(const Matrix& m, double tol) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      if (i != j && std::abs(m(i, j)) > tol * scale) return false;
  return true;
}

bool is_circulant(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const Index n = m.rows();
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (std::abs(m(i, j) - m(0, ((j - i) % n + n) % n)) > tol * scale) return false;
  return true;
}

double cond_of(const Matrix& m) {
  const Eigen::VectorXd s = backend::singular_values(m);
  if (s.size() == 0 || s(s.size() - 1) <= 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / s(s.size() - 1);
}

// Deterministic eigenpair order: descending Re(mu), ties by descending Im,
// then by original position.
std::vector<Index> sort_permutation(const Vector& mu) {
  std::vector<Index> idx(static_cast<size_t>(mu.size()));
  std::iota(idx.begin(), idx.end(), Index(0));
  std::stable_sort(idx.begin(), idx.end(), [&](Index a, Index b) {
    const Complex za = mu(a), zb = mu(b);
    if (za.real() != zb.real()) return za.real() > zb.real();
    if (za.imag() != zb.imag()) return za.imag() > zb.imag();
    return a < b;
  });
  return idx;
}

void fix_phase(Matrix& v) {
  for (Index j = 0; j < v.cols(); ++j) {
    const double mx = v.col(j).cwiseAbs().maxCoeff();
    Index i = 0;
    while (i + 1 < v.rows() && std::abs(v(i, j)) < 0.5 * mx) ++i;
    const Complex z = v(i, j);
    if (std::abs(z) > 0) v.col(j) *= std::conj(z) / std::abs(z);
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// ModeOperator
// ---------------------------------------------------------------------------

ModeOperator ModeOperator::from_dense(Matrix s) {
  require(s.rows() == s.cols() && s.rows() >= 1, ErrorCode::argument,
          "ModeOperator: factor must be square");
  ModeOperator op;
  op.dim_ = s.rows();
  Kron2Term t;
  t.coeff = Complex(1, 0);
  t.a = Matrix::Identity(1, 1);
  t.a_identity = true;
  t.b_identity = approx_identity(s, 0.0);
  t.b = std::move(s);
  op.terms_.push_back(std::move(t));
  return op;
}

ModeOperator ModeOperator::identity(Index n) { return from_dense(Matrix::Identity(n, n)); }

ModeOperator ModeOperator::kron2(Complex coeff, Matrix a, Matrix b) {
  require(a.rows() == a.cols() && b.rows() == b.cols(), ErrorCode::argument,
          "ModeOperator: Kronecker parts must be square");
  ModeOperator op;
  op.dim_ = a.rows() * b.rows();
  Kron2Term t;
  t.coeff = coeff;
  t.a_identity = approx_identity(a, 0.0);
  t.b_identity = approx_identity(b, 0.0);
  t.a = std::move(a);
  t.b = std::move(b);
  op.terms_.push_back(std::move(t));
  return op;
}

void ModeOperator::add_term(Kron2Term term) {
  require(term.a.rows() * term.b.rows() == dim_, ErrorCode::argument,
          "ModeOperator: term dimension mismatch");
  terms_.push_back(std::move(term));
}

bool ModeOperator::is_identity(double tol) const {
  if (terms_.size() == 1 && terms_[0].a_identity && terms_[0].b_identity &&
      terms_[0].coeff == Complex(1, 0))
    return true;
  if (dim_ > 4096) return false;
  return approx_identity(dense(), tol * static_cast<double>(dim_));
}

Matrix ModeOperator::apply(const Matrix& x) const {
  require(x.rows() == dim_, ErrorCode::argument, "ModeOperator: operand dimension mismatch");
  Matrix out = Matrix::Zero(dim_, x.cols());
  for (const auto& t : terms_)
    out += t.coeff * kron2_apply(t.a, t.b, t.a_identity, t.b_identity, x);
  return out;
}

Matrix ModeOperator::dense(Index entry_cap) const {
  require(dim_ * dim_ <= entry_cap, ErrorCode::size_cap,
          "ModeOperator: dense materialization exceeds cap");
  Matrix out = Matrix::Zero(dim_, dim_);
  for (const auto& t : terms_) out += t.coeff * kron_dense(t.a, t.b);
  return out;
}

// ---------------------------------------------------------------------------
// KroneckerSumOperator
// ---------------------------------------------------------------------------

KroneckerSumOperator::KroneckerSumOperator(
    std::vector<std::pair<ModeOperator, ModeOperator>> factors)
    : factors_(std::move(factors)) {
  require(!factors_.empty(), ErrorCode::argument, "KroneckerSumOperator: needs at least 1 factor");
  for (const auto& [s, m] : factors_) {
    require(s.dim() == m.dim() && s.dim() >= 1, ErrorCode::argument,
            "KroneckerSumOperator: S and M sizes must agree");
    m_identity_.push_back(m.is_identity());
  }
}

KroneckerSumOperator KroneckerSumOperator::from_dense_factors(
    const std::vector<std::pair<Matrix, Matrix>>& sm) {
  std::vector<std::pair<ModeOperator, ModeOperator>> factors;
  factors.reserve(sm.size());
  for (const auto& [s, m] : sm)
    factors.emplace_back(ModeOperator::from_dense(s), ModeOperator::from_dense(m));
  return KroneckerSumOperator(std::move(factors));
}

std::vector<Index> KroneckerSumOperator::mode_sizes() const {
  std::vector<Index> ms;
  ms.reserve(factors_.size());
  for (const auto& [s, m] : factors_) ms.push_back(s.dim());
  return ms;
}

Matrix KroneckerSumOperator::dense(Index entry_cap) const {
  const Index n = product(mode_sizes());
  require(n * n <= entry_cap, ErrorCode::size_cap,
          "KroneckerSumOperator: dense materialization exceeds cap");
  Matrix out = Matrix::Zero(n, n);
  for (Index k = 0; k < order(); ++k) {
    Matrix term = Matrix::Identity(1, 1);
    for (Index s = 0; s < order(); ++s)
      term = kron_dense(term, s == k ? this->s(s).dense(entry_cap) : m(s).dense(entry_cap));
    out += term;
  }
  return out;
}

// ---------------------------------------------------------------------------
// FactorMap
// ---------------------------------------------------------------------------

FactorMap FactorMap::dense(Matrix m) {
  require(m.rows() == m.cols(), ErrorCode::argument, "FactorMap: matrix must be square");
  FactorMap f;
  f.dim_ = m.rows();
  f.is_dense_ = true;
  f.m_ = std::move(m);
  return f;
}

FactorMap FactorMap::kron2(Matrix a, Matrix b, bool a_identity, bool b_identity) {
  FactorMap f;
  f.dim_ = a.rows() * b.rows();
  f.is_dense_ = false;
  f.a_ = std::move(a);
  f.b_ = std::move(b);
  f.a_identity_ = a_identity;
  f.b_identity_ = b_identity;
  return f;
}

void FactorMap::set_pre_scatter(std::vector<Index> perm) {
  require(static_cast<Index>(perm.size()) == dim_, ErrorCode::argument, "FactorMap: bad perm");
  pre_ = std::move(perm);
}

void FactorMap::set_post_gather(std::vector<Index> perm) {
  require(static_cast<Index>(perm.size()) == dim_, ErrorCode::argument, "FactorMap: bad perm");
  post_ = std::move(perm);
}

Matrix FactorMap::apply(const Matrix& x) const {
  require(x.rows() == dim_, ErrorCode::argument, "FactorMap: operand dimension mismatch");
  Matrix cur;
  if (!pre_.empty()) {
    cur.resize(dim_, x.cols());
    for (Index i = 0; i < dim_; ++i) cur.row(pre_[static_cast<size_t>(i)]) = x.row(i);
  } else {
    cur = x;
  }
  cur = is_dense_ ? Matrix(m_ * cur) : kron2_apply(a_, b_, a_identity_, b_identity_, cur);
  if (!post_.empty()) {
    Matrix out(dim_, x.cols());
    for (Index i = 0; i < dim_; ++i) out.row(i) = cur.row(post_[static_cast<size_t>(i)]);
    return out;
  }
  return cur;
}

Matrix FactorMap::apply_transposed(const Matrix& x) const {
  require(x.rows() == dim_, ErrorCode::argument, "FactorMap: operand dimension mismatch");
  Matrix cur;
  if (!post_.empty()) {
    cur.resize(dim_, x.cols());
    for (Index i = 0; i < dim_; ++i) cur.row(post_[static_cast<size_t>(i)]) = x.row(i);
  } else {
    cur = x;
  }
  cur = is_dense_ ? Matrix(m_.transpose() * cur)
                  : kron2_apply(a_.transpose(), b_.transpose(), a_identity_, b_identity_, cur);
  if (!pre_.empty()) {
    Matrix out(dim_, x.cols());
    for (Index i = 0; i < dim_; ++i) out.row(i) = cur.row(pre_[static_cast<size_t>(i)]);
    return out;
  }
  return cur;
}

Matrix FactorMap::dense_matrix() const { return apply(Matrix::Identity(dim_, dim_)); }

double FactorMap::cond() const {
  if (is_dense_) return cond_of(m_);
  const double ca = a_identity_ ? 1.0 : cond_of(a_);
  const double cb = b_identity_ ? 1.0 : cond_of(b_);
  return ca * cb;
}

// ---------------------------------------------------------------------------
// joint_diagonalize
// ---------------------------------------------------------------------------

namespace {

struct FactorDiag {
  FactorMap u, v, uinv, vinv;
  Vector mu;
  bool unitary = false;
  double cond_u = 1.0, cond_v = 1.0;
  double residual = 0.0;
};

// Structured path: S = sum_t coeff_t (diag_t (x) circ_t) with M = I.
// Every circulant part is diagonal in the Fourier basis, so V = I (x) F
// and U = I (x) F^H up to the eigenvalue ordering permutation, and the
// basis never needs densifying.
bool try_fourier_path(const ModeOperator& s, double tol, FactorDiag& out) {
  const auto& terms = s.terms();
  if (terms.empty()) return false;
  const Index na = terms[0].a.rows();
  const Index nb = terms[0].b.rows();
  if (nb == 1) return false;  // degenerate, dense path handles it
  for (const auto& t : terms) {
    if (t.a.rows() != na || t.b.rows() != nb) return false;
    if (!t.a_identity && !is_diagonal(t.a, 1e-13)) return false;
    if (!t.b_identity && !is_circulant(t.b, 1e-13)) return false;
  }

  const Index dim = na * nb;
  const auto fourier = [&](Index j, Index m) {
    const double arg =
        2.0 * std::numbers::pi * static_cast<double>((j * m) % nb) / static_cast<double>(nb);
    return Complex(std::cos(arg), std::sin(arg));
  };
  Matrix f(nb, nb);
  const double scale = 1.0 / std::sqrt(static_cast<double>(nb));
  for (Index j = 0; j < nb; ++j)
    for (Index m = 0; m < nb; ++m) f(j, m) = fourier(j, m) * scale;

  Vector mu = Vector::Zero(dim);
  for (const auto& t : terms) {
    Vector gamma(nb);
    for (Index m = 0; m < nb; ++m) {
      if (t.b_identity) {
        gamma(m) = Complex(1, 0);
      } else {
        Complex acc(0, 0);
        for (Index l = 0; l < nb; ++l) acc += t.b(0, l) * fourier(l, m);
        gamma(m) = acc;
      }
    }
    for (Index a = 0; a < na; ++a) {
      const Complex da = t.a_identity ? Complex(1, 0) : t.a(a, a);
      for (Index m = 0; m < nb; ++m) mu(a * nb + m) += t.coeff * da * gamma(m);
    }
  }

  const std::vector<Index> perm = sort_permutation(mu);
  Vector mu_sorted(dim);
  for (Index i = 0; i < dim; ++i) mu_sorted(i) = mu(perm[static_cast<size_t>(i)]);

  const Matrix ident = Matrix::Identity(na, na);
  FactorMap v = FactorMap::kron2(ident, f, true, false);
  v.set_pre_scatter(perm);
  FactorMap u = FactorMap::kron2(ident, f.adjoint(), true, false);
  u.set_post_gather(perm);

  // probe check U S V z = diag(mu) z on a few random vectors
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Matrix z(dim, 3);
  for (Index i = 0; i < dim; ++i)
    for (Index j = 0; j < 3; ++j) z(i, j) = Complex(dist(rng), dist(rng));
  const Matrix lhs = u.apply(s.apply(v.apply(z)));
  const Matrix rhs = mu_sorted.asDiagonal() * z;
  const double scale_mu = std::max(1.0, mu_sorted.cwiseAbs().maxCoeff());
  const double rel = (lhs - rhs).norm() / (scale_mu * z.norm());
  require(rel <= tol, ErrorCode::diagonalization,
          "structured diagonalization probe failed, residual " + std::to_string(rel));

  out.uinv = v;
  out.vinv = u;
  out.u = std::move(u);
  out.v = std::move(v);
  out.mu = std::move(mu_sorted);
  out.unitary = true;
  out.cond_u = out.cond_v = 1.0;
  out.residual = rel;
  return true;
}

FactorDiag diagonalize_dense(const Matrix& sd, const Matrix& md, double tol, Index factor_idx) {
  const Index n = sd.rows();
  const double s_scale = std::max(1e-300, sd.norm());
  FactorDiag out;
  Matrix v, u;
  Vector mu;
  const bool m_ident = approx_identity(md, 1e-13 * static_cast<double>(n));
  const bool s_herm = approx_hermitian(sd, 1e-13);
  const bool m_herm = approx_hermitian(md, 1e-13);

  if (m_ident && s_herm) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(sd);
    require(es.info() == Eigen::Success, ErrorCode::diagonalization,
            "Hermitian eigensolver failed on factor " + std::to_string(factor_idx));
    v = es.eigenvectors();
    mu = es.eigenvalues().cast<Complex>();
    out.unitary = true;
  } else if (!m_ident && s_herm && m_herm) {
    // Hermitian definite pencil: M = C C^H, T = C^{-1} S C^{-H}, V = C^{-H} Q
    Eigen::LLT<Matrix> llt(md);
    if (llt.info() == Eigen::Success) {
      const Matrix c = llt.matrixL();
      Matrix t = c.triangularView<Eigen::Lower>().solve(sd);
      t = c.triangularView<Eigen::Lower>().solve(t.adjoint()).adjoint();
      Eigen::SelfAdjointEigenSolver<Matrix> es(t);
      require(es.info() == Eigen::Success, ErrorCode::diagonalization,
              "generalized Hermitian eigensolver failed on factor " + std::to_string(factor_idx));
      v = c.adjoint().template triangularView<Eigen::Upper>().solve(es.eigenvectors());
      mu = es.eigenvalues().cast<Complex>();
    }
  }
  if (v.size() == 0) {
    // generic pencil: eigendecomposition of M^{-1} S
    const Matrix w = m_ident ? sd : Matrix(Eigen::PartialPivLU<Matrix>(md).solve(sd));
    Eigen::ComplexEigenSolver<Matrix> es(w);
    require(es.info() == Eigen::Success, ErrorCode::diagonalization,
            "eigensolver failed on factor " + std::to_string(factor_idx));
    v = es.eigenvectors();
    mu = es.eigenvalues();
    for (Index j = 0; j < n; ++j) v.col(j) /= v.col(j).norm();
    out.unitary = false;
  }

  const double cv = cond_of(v);
  require(cv <= kDefectiveCond, ErrorCode::diagonalization,
          "factor " + std::to_string(factor_idx) +
              " is numerically defective (eigenvector condition " + std::to_string(cv) + ")");

  fix_phase(v);
  const std::vector<Index> perm = sort_permutation(mu);
  Matrix v_sorted(n, n);
  Vector mu_sorted(n);
  for (Index i = 0; i < n; ++i) {
    v_sorted.col(i) = v.col(perm[static_cast<size_t>(i)]);
    mu_sorted(i) = mu(perm[static_cast<size_t>(i)]);
  }
  v = std::move(v_sorted);

  if (out.unitary) {
    u = v.adjoint();
  } else {
    const Matrix mv = md * v;
    u = Eigen::PartialPivLU<Matrix>(mv).inverse();
  }

  const double res_s = (u * sd * v - Matrix(mu_sorted.asDiagonal())).norm() / s_scale;
  const double res_m = (u * md * v - Matrix::Identity(n, n)).norm() / std::max(1.0, md.norm());
  const double res = std::max(res_s, res_m);
  require(res <= tol, ErrorCode::diagonalization,
          "diagonalization residual " + std::to_string(res) + " exceeds tolerance on factor " +
              std::to_string(factor_idx));

  out.cond_v = out.unitary ? 1.0 : cond_of(v);
  out.cond_u = out.unitary ? 1.0 : cond_of(u);
  out.residual = res;
  out.mu = std::move(mu_sorted);
  out.uinv = FactorMap::dense(md * v);
  out.vinv = FactorMap::dense(u * md);
  out.u = FactorMap::dense(std::move(u));
  out.v = FactorMap::dense(std::move(v));
  return out;
}

}  // namespace

SpectralFactorization joint_diagonalize(const KroneckerSumOperator& op, double tol) {
  require(tol > 0, ErrorCode::argument, "joint_diagonalize: tol must be positive");
  SpectralFactorization fact;
  for (Index k = 0; k < op.order(); ++k) {
    FactorDiag fd;
    bool done = false;
    if (op.m_is_identity(k)) done = try_fourier_path(op.s(k), tol, fd);
    if (!done) {
      const Index n = op.s(k).dim();
      require(n <= 4096, ErrorCode::size_cap,
              "factor " + std::to_string(k + 1) + " too large for dense diagonalization");
      fd = diagonalize_dense(op.s(k).dense(), op.m(k).dense(), tol, k + 1);
    }
    fact.u.push_back(std::move(fd.u));
    fact.v.push_back(std::move(fd.v));
    fact.uinv.push_back(std::move(fd.uinv));
    fact.vinv.push_back(std::move(fd.vinv));
    fact.lambda.push_back(Vector::Ones(fd.mu.size()));
    fact.mu.push_back(std::move(fd.mu));
    fact.unitary.push_back(fd.unitary);
    fact.cond_u.push_back(fd.cond_u);
    fact.cond_v.push_back(fd.cond_v);
    fact.residual.push_back(fd.residual);
  }
  return fact;
}

// ---------------------------------------------------------------------------
// lambda tensor, expanding, assembly, solve
// ---------------------------------------------------------------------------

TTTensor lambda_tensor(const SpectralFactorization& fact) {
  const Index d = fact.order();
  require(d >= 1, ErrorCode::argument, "lambda_tensor: empty factorization");
  for (Index k = 0; k < d; ++k)
    require(fact.lambda[static_cast<size_t>(k)].cwiseAbs().minCoeff() > 0.0, ErrorCode::numeric,
            "lambda_tensor: singular M factor (zero lambda)");

  if (d == 1) {
    TTCore c(1, fact.mu[0].size(), 1);
    for (Index i = 0; i < fact.mu[0].size(); ++i) c.at(0, i, 0) = fact.mu[0](i);
    return TTTensor({std::move(c)});
  }

  std::vector<TTCore> cores;
  cores.reserve(static_cast<size_t>(d));
  for (Index k = 0; k < d; ++k) {
    const Vector& mu = fact.mu[static_cast<size_t>(k)];
    const Vector& la = fact.lambda[static_cast<size_t>(k)];
    const Index n = mu.size();
    if (k == 0) {
      TTCore c(1, n, 2);
      for (Index i = 0; i < n; ++i) {
        c.at(0, i, 0) = la(i);
        c.at(0, i, 1) = mu(i);
      }
      cores.push_back(std::move(c));
    } else if (k == d - 1) {
      TTCore c(2, n, 1);
      for (Index i = 0; i < n; ++i) {
        c.at(0, i, 0) = mu(i);
        c.at(1, i, 0) = la(i);
      }
      cores.push_back(std::move(c));
    } else {
      TTCore c(2, n, 2);
      for (Index i = 0; i < n; ++i) {
        c.at(0, i, 0) = la(i);
        c.at(0, i, 1) = mu(i);
        c.at(1, i, 1) = la(i);
      }
      cores.push_back(std::move(c));
    }
  }
  return TTTensor(std::move(cores));
}

TTMatrix expanding(const TTTensor& x) {
  std::vector<TTMatrixCore> cores;
  cores.reserve(static_cast<size_t>(x.order()));
  for (const auto& c : x.cores()) {
    TTMatrixCore mc(c.r0, c.n, c.n, c.r1);
    for (Index a = 0; a < c.r0; ++a)
      for (Index i = 0; i < c.n; ++i)
        for (Index b = 0; b < c.r1; ++b) mc.at(a, i, i, b) = c.at(a, i, b);
    cores.push_back(std::move(mc));
  }
  return TTMatrix(std::move(cores));
}

namespace detail {

TTTensor apply_to_mode(const TTTensor& t, Index k,
                       const std::function<Matrix(const Matrix&)>& fn) {
  require(k >= 1 && k <= t.order(), ErrorCode::argument, "apply_to_mode: mode out of range");
  const TTCore& c = t.core(k - 1);
  Matrix x(c.n, c.r0 * c.r1);
  for (Index i = 0; i < c.n; ++i)
    for (Index p = 0; p < c.r0; ++p)
      for (Index q = 0; q < c.r1; ++q) x(i, p * c.r1 + q) = c.at(p, i, q);
  const Matrix y = fn(x);
  TTTensor out = t;
  TTCore nc(c.r0, y.rows(), c.r1);
  for (Index i = 0; i < y.rows(); ++i)
    for (Index p = 0; p < c.r0; ++p)
      for (Index q = 0; q < c.r1; ++q) nc.at(p, i, q) = y(i, p * c.r1 + q);
  out.core(k - 1) = std::move(nc);
  return out;
}

}  // namespace detail

TTMatrix assemble_inverse(const SpectralFactorization& fact, const TTTensor& xinv) {
  require(fact.mode_sizes() == xinv.mode_sizes(), ErrorCode::argument,
          "assemble_inverse: factorization and tensor shapes differ");
  TTMatrix b = expanding(xinv);
  for (Index k = 0; k < b.order(); ++k) {
    TTMatrixCore& c = b.core(k);
    const FactorMap& vmap = fact.v[static_cast<size_t>(k)];
    const FactorMap& umap = fact.u[static_cast<size_t>(k)];
    // rows: new(a,i',j,q) = sum_i V(i',i) old(a,i,j,q)
    {
      Matrix x(c.m, c.r0 * c.n * c.r1);
      for (Index i = 0; i < c.m; ++i)
        for (Index a = 0; a < c.r0; ++a)
          for (Index j = 0; j < c.n; ++j)
            for (Index q = 0; q < c.r1; ++q) x(i, (a * c.n + j) * c.r1 + q) = c.at(a, i, j, q);
      const Matrix y = vmap.apply(x);
      for (Index i = 0; i < c.m; ++i)
        for (Index a = 0; a < c.r0; ++a)
          for (Index j = 0; j < c.n; ++j)
            for (Index q = 0; q < c.r1; ++q) c.at(a, i, j, q) = y(i, (a * c.n + j) * c.r1 + q);
    }
    // cols: new(a,i,j',q) = sum_j old(a,i,j,q) U(j,j'), i.e. U^T from the left
    {
      Matrix x(c.n, c.r0 * c.m * c.r1);
      for (Index j = 0; j < c.n; ++j)
        for (Index a = 0; a < c.r0; ++a)
          for (Index i = 0; i < c.m; ++i)
            for (Index q = 0; q < c.r1; ++q) x(j, (a * c.m + i) * c.r1 + q) = c.at(a, i, j, q);
      const Matrix y = umap.apply_transposed(x);
      for (Index j = 0; j < c.n; ++j)
        for (Index a = 0; a < c.r0; ++a)
          for (Index i = 0; i < c.m; ++i)
            for (Index q = 0; q < c.r1; ++q) c.at(a, i, j, q) = y(j, (a * c.m + i) * c.r1 + q);
    }
  }
  return b;
}

TTTensor solve(const SpectralFactorization& fact, const TTTensor& xinv, const TTTensor& f,
               double round_eps) {
  require(fact.mode_sizes() == f.mode_sizes(), ErrorCode::argument,
          "solve: right-hand side shape mismatch");
  require(fact.mode_sizes() == xinv.mode_sizes(), ErrorCode::argument,
          "solve: Hadamard inverse shape mismatch");
  TTTensor fhat = f;
  for (Index k = 1; k <= fact.order(); ++k) {
    const FactorMap& umap = fact.u[static_cast<size_t>(k - 1)];
    fhat = detail::apply_to_mode(fhat, k, [&](const Matrix& x) { return umap.apply(x); });
  }
  TTTensor w = hadamard(xinv, fhat);
  if (round_eps > 0.0) w = round(w, round_eps);
  for (Index k = 1; k <= fact.order(); ++k) {
    const FactorMap& vmap = fact.v[static_cast<size_t>(k - 1)];
    w = detail::apply_to_mode(w, k, [&](const Matrix& x) { return vmap.apply(x); });
  }
  return w;
}

TTTensor apply_operator(const KroneckerSumOperator& op, const TTTensor& u, double round_eps) {
  require(op.mode_sizes() == u.mode_sizes(), ErrorCode::argument,
          "apply_operator: shape mismatch");
  TTTensor acc;
  for (Index k = 0; k < op.order(); ++k) {
    TTTensor term = u;
    for (Index s = 1; s <= op.order(); ++s) {
      if (s - 1 == k) {
        const ModeOperator& sk = op.s(s - 1);
        term = detail::apply_to_mode(term, s, [&](const Matrix& x) { return sk.apply(x); });
      } else if (!op.m_is_identity(s - 1)) {
        const ModeOperator& ms = op.m(s - 1);
        term = detail::apply_to_mode(term, s, [&](const Matrix& x) { return ms.apply(x); });
      }
    }
    acc = (k == 0) ? std::move(term) : add(acc, term);
  }
  if (round_eps > 0.0) acc = round(acc, round_eps);
  return acc;
}

double accuracy_bound(const SpectralFactorization& fact, double kappa_l, double rel_residual) {
  require(kappa_l >= 0.0 && rel_residual >= 0.0, ErrorCode::argument,
          "accuracy_bound: inputs must be nonnegative");
  double amp = 1.0;
  for (Index k = 0; k < fact.order(); ++k)
    amp *= fact.cond_u[static_cast<size_t>(k)] * fact.cond_v[static_cast<size_t>(k)];
  return amp * kappa_l * rel_residual;
}

std::pair<double, double> lambda_entry_range(const SpectralFactorization& fact) {
  // entries are (prod_k lambda_{j_k}) * (sum_k mu_{j_k}/lambda_{j_k});
  // both parts admit per-mode interval bounds, exact for real spectra
  double re_lo = 0, re_hi = 0, im_lo = 0, im_hi = 0;
  double la_lo = 1.0, la_hi = 1.0;
  for (Index k = 0; k < fact.order(); ++k) {
    const Vector& mu = fact.mu[static_cast<size_t>(k)];
    const Vector& la = fact.lambda[static_cast<size_t>(k)];
    double rl = std::numeric_limits<double>::infinity(), rh = -rl;
    double il = rl, ih = -rl;
    double al = rl, ah = -rl;
    for (Index i = 0; i < mu.size(); ++i) {
      const Complex ratio = mu(i) / la(i);
      rl = std::min(rl, ratio.real());
      rh = std::max(rh, ratio.real());
      il = std::min(il, ratio.imag());
      ih = std::max(ih, ratio.imag());
      al = std::min(al, std::abs(la(i)));
      ah = std::max(ah, std::abs(la(i)));
    }
    re_lo += rl;
    re_hi += rh;
    im_lo += il;
    im_hi += ih;
    la_lo *= al;
    la_hi *= ah;
  }
  const auto min_abs = [](double lo, double hi) {
    if (lo <= 0.0 && hi >= 0.0) return 0.0;
    return std::min(std::abs(lo), std::abs(hi));
  };
  const auto max_abs = [](double lo, double hi) { return std::max(std::abs(lo), std::abs(hi)); };
  const double sum_min = std::hypot(min_abs(re_lo, re_hi), min_abs(im_lo, im_hi));
  const double sum_max = std::hypot(max_abs(re_lo, re_hi), max_abs(im_lo, im_hi));
  return {la_lo * sum_min, la_hi * sum_max};
}

}  // namespace ttinv
