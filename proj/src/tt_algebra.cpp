#include "ttinv/tt_algebra.hpp"

#include <cmath>
#include <limits>

#include "backend.hpp"

namespace ttinv {

using RowMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapRM = Eigen::Map<RowMat>;
using CMapRM = Eigen::Map<const RowMat>;

namespace {

void check_same_modes(const TTTensor& a, const TTTensor& b, const char* op) {
  require(a.order() == b.order(), ErrorCode::argument, std::string(op) + ": order mismatch");
  const auto ma = a.mode_sizes(), mb = b.mode_sizes();
  require(ma == mb, ErrorCode::argument, std::string(op) + ": mode size mismatch");
}

}  // namespace

TTTensor add(const TTTensor& a, const TTTensor& b) {
  check_same_modes(a, b, "add");
  const Index d = a.order();
  if (d == 1) {
    TTCore c(1, a.core(0).n, 1);
    for (size_t i = 0; i < c.data.size(); ++i) c.data[i] = a.core(0).data[i] + b.core(0).data[i];
    return TTTensor({std::move(c)});
  }
  std::vector<TTCore> cores;
  cores.reserve(static_cast<size_t>(d));
  for (Index k = 0; k < d; ++k) {
    const TTCore& ca = a.core(k);
    const TTCore& cb = b.core(k);
    const Index r0 = (k == 0) ? 1 : ca.r0 + cb.r0;
    const Index r1 = (k == d - 1) ? 1 : ca.r1 + cb.r1;
    TTCore c(r0, ca.n, r1);
    // block-diagonal concatenation per mode slice
    for (Index i = 0; i < ca.n; ++i) {
      for (Index p = 0; p < ca.r0; ++p)
        for (Index q = 0; q < ca.r1; ++q) c.at(p, i, q) = ca.at(p, i, q);
      const Index po = (k == 0) ? 0 : ca.r0;
      const Index qo = (k == d - 1) ? 0 : ca.r1;
      for (Index p = 0; p < cb.r0; ++p)
        for (Index q = 0; q < cb.r1; ++q) c.at(po + p, i, qo + q) += cb.at(p, i, q);
    }
    cores.push_back(std::move(c));
  }
  return TTTensor(std::move(cores));
}

TTTensor scale(const TTTensor& a, Complex s) {
  TTTensor out = a;
  for (auto& z : out.core(0).data) z *= s;
  return out;
}

TTTensor subtract(const TTTensor& a, const TTTensor& b) { return add(a, scale(b, Complex(-1, 0))); }

TTTensor hadamard(const TTTensor& a, const TTTensor& b) {
  check_same_modes(a, b, "hadamard");
  const Index d = a.order();
  std::vector<TTCore> cores;
  cores.reserve(static_cast<size_t>(d));
  for (Index k = 0; k < d; ++k) {
    const TTCore& ca = a.core(k);
    const TTCore& cb = b.core(k);
    TTCore c(ca.r0 * cb.r0, ca.n, ca.r1 * cb.r1);
    for (Index i = 0; i < ca.n; ++i)
      for (Index pa = 0; pa < ca.r0; ++pa)
        for (Index pb = 0; pb < cb.r0; ++pb)
          for (Index qa = 0; qa < ca.r1; ++qa) {
            const Complex va = ca.at(pa, i, qa);
            if (va == Complex(0, 0)) continue;
            for (Index qb = 0; qb < cb.r1; ++qb)
              c.at(pa * cb.r0 + pb, i, qa * cb.r1 + qb) = va * cb.at(pb, i, qb);
          }
    cores.push_back(std::move(c));
  }
  return TTTensor(std::move(cores));
}

TTTensor kronecker(const TTTensor& a, const TTTensor& b) {
  require(a.order() == b.order(), ErrorCode::argument, "kronecker: order mismatch");
  const Index d = a.order();
  std::vector<TTCore> cores;
  cores.reserve(static_cast<size_t>(d));
  for (Index k = 0; k < d; ++k) {
    const TTCore& ca = a.core(k);
    const TTCore& cb = b.core(k);
    TTCore c(ca.r0 * cb.r0, ca.n * cb.n, ca.r1 * cb.r1);
    for (Index j = 0; j < cb.n; ++j)
      for (Index i = 0; i < ca.n; ++i) {
        const Index s = i + j * ca.n;  // a's index fastest
        for (Index pa = 0; pa < ca.r0; ++pa)
          for (Index pb = 0; pb < cb.r0; ++pb)
            for (Index qa = 0; qa < ca.r1; ++qa)
              for (Index qb = 0; qb < cb.r1; ++qb)
                c.at(pa * cb.r0 + pb, s, qa * cb.r1 + qb) = ca.at(pa, i, qa) * cb.at(pb, j, qb);
      }
    cores.push_back(std::move(c));
  }
  return TTTensor(std::move(cores));
}

TTTensor mode_k_product(const TTTensor& a, const Matrix& u, Index k) {
  const Index d = a.order();
  require(k >= 1 && k <= d, ErrorCode::argument, "mode_k_product: mode out of range");
  const TTCore& c = a.core(k - 1);
  require(u.cols() == c.n, ErrorCode::argument,
          "mode_k_product: matrix columns do not match mode size");
  TTTensor out = a;
  TTCore nc(c.r0, u.rows(), c.r1);
  // gather the mode index into rows, multiply, scatter back
  Matrix x(c.n, c.r0 * c.r1);
  for (Index i = 0; i < c.n; ++i)
    for (Index p = 0; p < c.r0; ++p)
      for (Index q = 0; q < c.r1; ++q) x(i, p * c.r1 + q) = c.at(p, i, q);
  Matrix y = u * x;
  for (Index i = 0; i < u.rows(); ++i)
    for (Index p = 0; p < c.r0; ++p)
      for (Index q = 0; q < c.r1; ++q) nc.at(p, i, q) = y(i, p * c.r1 + q);
  out.core(k - 1) = std::move(nc);
  return out;
}

TTTensor ttmc(const TTTensor& a, const std::vector<std::pair<Matrix, Index>>& factors) {
  std::vector<bool> seen(static_cast<size_t>(a.order() + 1), false);
  TTTensor out = a;
  for (const auto& [u, k] : factors) {
    require(k >= 1 && k <= a.order(), ErrorCode::argument, "ttmc: mode out of range");
    require(!seen[static_cast<size_t>(k)], ErrorCode::argument, "ttmc: duplicate mode");
    seen[static_cast<size_t>(k)] = true;
    out = mode_k_product(out, u, k);
  }
  return out;
}

namespace detail {

Index numerical_rank(const Eigen::VectorXd& s, Index rows, Index cols) {
  if (s.size() == 0) return 0;
  const double floor =
      s(0) * std::numeric_limits<double>::epsilon() * static_cast<double>(std::max(rows, cols));
  Index r = 0;
  while (r < s.size() && s(r) > floor) ++r;
  return r;
}

Index truncation_rank(const Eigen::VectorXd& s, double delta, Index rows, Index cols) {
  const Index rmax = numerical_rank(s, rows, cols);
  if (rmax == 0) return 1;  // exact zero block keeps a rank-1 zero slice
  if (delta <= 0.0) return rmax;
  const double budget = delta * delta;
  double tail = 0.0;
  for (Index i = s.size() - 1; i >= rmax; --i) tail += s(i) * s(i);
  Index r = rmax;
  while (r > 1 && tail + s(r - 1) * s(r - 1) <= budget) {
    tail += s(r - 1) * s(r - 1);
    --r;
  }
  return r;
}

void orthogonalize_rl(TTTensor& t) {
  const Index d = t.order();
  for (Index k = d - 1; k >= 1; --k) {
    TTCore& c = t.core(k);
    CMapRM right(c.data.data(), c.r0, c.n * c.r1);
    backend::LQ lq = backend::thin_lq(right);
    const Index rnew = lq.q.rows();
    TTCore qcore(rnew, c.n, c.r1);
    MapRM(qcore.data.data(), rnew, c.n * c.r1) = lq.q;
    // fold L into the left neighbor
    TTCore& left = t.core(k - 1);
    TTCore nl(left.r0, left.n, rnew);
    MapRM(nl.data.data(), left.r0 * left.n, rnew) =
        CMapRM(left.data.data(), left.r0 * left.n, left.r1) * lq.l;
    t.core(k) = std::move(qcore);
    t.core(k - 1) = std::move(nl);
  }
}

}  // namespace detail

TTTensor round(const TTTensor& a, double eps, std::optional<Index> max_rank, RoundInfo* info) {
  require(eps >= 0.0, ErrorCode::argument, "round: eps must be nonnegative");
  require(!max_rank || *max_rank >= 1, ErrorCode::argument, "round: max_rank must be positive");
  const Index d = a.order();
  TTTensor t = a;
  if (d == 1) {
    if (info) info->norm = frobenius_norm(t);
    return t;
  }
  detail::orthogonalize_rl(t);
  double norm = 0.0;
  for (const Complex& z : t.core(0).data) norm += std::norm(z);
  norm = std::sqrt(norm);
  if (info) info->norm = norm;
  if (norm == 0.0) return tt_zero(a.mode_sizes());
  const double delta = eps * norm / std::sqrt(static_cast<double>(d - 1));

  for (Index k = 0; k + 1 < d; ++k) {
    TTCore& c = t.core(k);
    CMapRM left(c.data.data(), c.r0 * c.n, c.r1);
    backend::SVD svd = backend::thin_svd(left);
    Index r = detail::truncation_rank(svd.s, delta, left.rows(), left.cols());
    if (max_rank && r > *max_rank) {
      r = *max_rank;
      if (info) info->cap_hit = true;
    }
    TTCore nc(c.r0, c.n, r);
    MapRM(nc.data.data(), c.r0 * c.n, r) = svd.u.leftCols(r);
    Matrix carry = svd.s.head(r).asDiagonal() * svd.vh.topRows(r);  // r x r_old
    TTCore& nxt = t.core(k + 1);
    TTCore folded(r, nxt.n, nxt.r1);
    MapRM(folded.data.data(), r, nxt.n * nxt.r1) =
        carry * CMapRM(nxt.data.data(), nxt.r0, nxt.n * nxt.r1);
    t.core(k) = std::move(nc);
    t.core(k + 1) = std::move(folded);
  }
  return t;
}

}  // namespace ttinv
