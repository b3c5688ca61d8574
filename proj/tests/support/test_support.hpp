#pragma once

// Shared test helpers: seeded random generators and dense oracles that
// stay independent of the library code paths they are used to check.

#include <random>
#include <vector>

#include <Eigen/Dense>

#include "ttinv/dense_tensor.hpp"
#include "ttinv/kron_sum.hpp"
#include "ttinv/tt_tensor.hpp"

namespace ttest {

using ttinv::Complex;
using ttinv::DenseTensor;
using ttinv::Index;
using ttinv::Matrix;
using ttinv::TTCore;
using ttinv::TTTensor;
using ttinv::Vector;

inline Complex rand_complex(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return Complex(u(rng), u(rng));
}

inline TTTensor random_tt(std::mt19937_64& rng, const std::vector<Index>& modes,
                          const std::vector<Index>& ranks) {
  std::vector<TTCore> cores;
  for (size_t k = 0; k < modes.size(); ++k) {
    TTCore c(ranks[k], modes[k], ranks[k + 1]);
    for (auto& z : c.data) z = rand_complex(rng);
    cores.push_back(std::move(c));
  }
  return TTTensor(std::move(cores));
}

inline DenseTensor random_dense(std::mt19937_64& rng, const std::vector<Index>& modes) {
  DenseTensor d(modes);
  for (auto& z : d.entries()) z = rand_complex(rng);
  return d;
}

/// Entries with modulus in [lo, hi] and uniform phase.
inline DenseTensor random_dense_magnitude(std::mt19937_64& rng, const std::vector<Index>& modes,
                                          double lo, double hi) {
  std::uniform_real_distribution<double> mag(lo, hi);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * 3.14159265358979323846);
  DenseTensor d(modes);
  for (auto& z : d.entries()) {
    const double m = mag(rng), p = phase(rng);
    z = Complex(m * std::cos(p), m * std::sin(p));
  }
  return d;
}

/// Brute-force TT entry: explicit sums over every rank index, written
/// directly from the definition (independent of the library's chained
/// matrix products).
inline Complex tt_entry_bruteforce(const TTTensor& t, const std::vector<Index>& idx1) {
  const Index d = t.order();
  std::vector<Index> r(static_cast<size_t>(d + 1));
  for (Index k = 0; k <= d; ++k) r[static_cast<size_t>(k)] = t.ranks()[static_cast<size_t>(k)];
  std::vector<Index> alpha(static_cast<size_t>(d + 1), 0);
  Complex total(0, 0);
  // odometer over all rank tuples (alpha_1..alpha_{d-1})
  while (true) {
    Complex prod(1, 0);
    for (Index k = 0; k < d; ++k) {
      const TTCore& c = t.core(k);
      prod *= c.at(alpha[static_cast<size_t>(k)], idx1[static_cast<size_t>(k)] - 1,
                   alpha[static_cast<size_t>(k + 1)]);
    }
    total += prod;
    Index k = 1;
    while (k < d && ++alpha[static_cast<size_t>(k)] == r[static_cast<size_t>(k)]) {
      alpha[static_cast<size_t>(k)] = 0;
      ++k;
    }
    if (k == d) break;
  }
  return total;
}

/// All entries of a small TT tensor by brute force, row-major.
inline std::vector<Complex> dense_bruteforce(const TTTensor& t) {
  const auto modes = t.mode_sizes();
  const Index total = ttinv::product(modes);
  std::vector<Complex> out(static_cast<size_t>(total));
  std::vector<Index> idx(modes.size(), 1);
  for (Index flat = 0; flat < total; ++flat) {
    Index rem = flat;
    for (Index k = t.order() - 1; k >= 0; --k) {
      idx[static_cast<size_t>(k)] = rem % modes[static_cast<size_t>(k)] + 1;
      rem /= modes[static_cast<size_t>(k)];
    }
    out[static_cast<size_t>(flat)] = tt_entry_bruteforce(t, idx);
  }
  return out;
}

inline Matrix kron_oracle(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Dense Kronecker-sum matrix built directly from raw factor matrices.
inline Matrix kron_sum_oracle(const std::vector<std::pair<Matrix, Matrix>>& sm) {
  const Index d = static_cast<Index>(sm.size());
  Index n = 1;
  for (const auto& [s, m] : sm) n *= s.rows();
  Matrix out = Matrix::Zero(n, n);
  for (Index k = 0; k < d; ++k) {
    Matrix term = Matrix::Identity(1, 1);
    for (Index s = 0; s < d; ++s)
      term = kron_oracle(term, s == k ? sm[static_cast<size_t>(s)].first
                                      : sm[static_cast<size_t>(s)].second);
    out += term;
  }
  return out;
}

inline double max_abs_dev(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double m = 0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double vec_norm(const std::vector<Complex>& a) {
  double s = 0;
  for (const auto& z : a) s += std::norm(z);
  return std::sqrt(s);
}

/// 1-based multi-index enumeration helper.
inline std::vector<std::vector<Index>> all_indices(const std::vector<Index>& modes) {
  const Index total = ttinv::product(modes);
  std::vector<std::vector<Index>> out;
  out.reserve(static_cast<size_t>(total));
  std::vector<Index> idx(modes.size(), 1);
  for (Index flat = 0; flat < total; ++flat) {
    Index rem = flat;
    for (Index k = static_cast<Index>(modes.size()) - 1; k >= 0; --k) {
      idx[static_cast<size_t>(k)] = rem % modes[static_cast<size_t>(k)] + 1;
      rem /= modes[static_cast<size_t>(k)];
    }
    out.push_back(idx);
  }
  return out;
}

}  // namespace ttest
