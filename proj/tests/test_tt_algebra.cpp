#include <catch2/catch_amalgamated.hpp>

#include "support/test_support.hpp"
#include "ttinv/tt_algebra.hpp"

using namespace ttinv;
using ttest::all_indices;
using ttest::random_tt;

namespace {

double dense_dev(const TTTensor& got, const std::vector<Complex>& expect) {
  return ttest::max_abs_dev(to_dense(got).entries(), expect);
}

}  // namespace

TEST_CASE("add: cancellation, rank law, dense agreement") {
  std::mt19937_64 rng(101);
  const TTTensor a = random_tt(rng, {3, 4, 3}, {1, 2, 2, 1});
  const TTTensor z = add(a, scale(a, Complex(-1, 0)));
  CHECK(z.ranks() == std::vector<Index>{1, 4, 4, 1});
  CHECK(frobenius_norm(z) <= 1e-12 * frobenius_norm(a));

  const TTTensor b = random_tt(rng, {3, 4, 3}, {1, 3, 3, 1});
  const TTTensor s = add(a, b);
  CHECK(s.ranks() == std::vector<Index>{1, 5, 5, 1});

  auto ea = to_dense(a).entries();
  auto eb = to_dense(b).entries();
  std::vector<Complex> expect(ea.size());
  for (size_t i = 0; i < ea.size(); ++i) expect[i] = ea[i] + eb[i];
  CHECK(dense_dev(s, expect) <= 1e-12);

  CHECK_THROWS_AS(add(a, tt_ones({3, 4, 4})), Error);
}

TEST_CASE("scale: identity, zero, dense agreement") {
  std::mt19937_64 rng(103);
  const TTTensor a = random_tt(rng, {2, 3, 2}, {1, 2, 2, 1});
  CHECK(dense_dev(scale(a, Complex(1, 0)), to_dense(a).entries()) == 0.0);
  CHECK(frobenius_norm(scale(a, Complex(0, 0))) == 0.0);

  auto ea = to_dense(a).entries();
  for (auto& z : ea) z *= Complex(2, 1);
  CHECK(dense_dev(scale(a, Complex(2, 1)), ea) <= 1e-13);
}

TEST_CASE("hadamard: ones identity, rank law, dense agreement") {
  std::mt19937_64 rng(107);
  const TTTensor a = random_tt(rng, {3, 2, 4}, {1, 2, 2, 1});
  CHECK(dense_dev(hadamard(a, tt_ones({3, 2, 4})), to_dense(a).entries()) <= 1e-13);

  const TTTensor b = random_tt(rng, {3, 2, 4}, {1, 3, 3, 1});
  const TTTensor p = hadamard(a, b);
  CHECK(p.ranks() == std::vector<Index>{1, 6, 6, 1});

  auto ea = to_dense(a).entries();
  auto eb = to_dense(b).entries();
  std::vector<Complex> expect(ea.size());
  for (size_t i = 0; i < ea.size(); ++i) expect[i] = ea[i] * eb[i];
  CHECK(dense_dev(p, expect) <= 1e-12);

  CHECK_THROWS_AS(hadamard(a, tt_ones({3, 2, 3})), Error);
}

TEST_CASE("kronecker: scalar unit, ones, dense oracle") {
  std::mt19937_64 rng(109);
  const TTTensor a = random_tt(rng, {2, 3}, {1, 2, 1});
  const TTTensor unit = tt_ones({1, 1});
  const TTTensor k0 = kronecker(a, unit);
  CHECK(k0.mode_sizes() == a.mode_sizes());
  CHECK(dense_dev(k0, to_dense(a).entries()) <= 1e-14);

  const TTTensor kones = kronecker(tt_ones({2, 2}), tt_ones({3, 3}));
  CHECK(kones.mode_sizes() == std::vector<Index>{6, 6});
  for (const auto& z : to_dense(kones).entries()) CHECK(z == Complex(1, 0));

  // dense oracle with the paper index interleaving s = i + (j-1) n
  const TTTensor b = random_tt(rng, {2, 2}, {1, 2, 1});
  const TTTensor k = kronecker(a, b);
  CHECK(k.ranks() == std::vector<Index>{1, 4, 1});
  const DenseTensor da = to_dense(a), db = to_dense(b), dk = to_dense(k);
  for (const auto& ia : all_indices({2, 3}))
    for (const auto& jb : all_indices({2, 2})) {
      const std::vector<Index> s{ia[0] + (jb[0] - 1) * 2, ia[1] + (jb[1] - 1) * 3};
      CHECK(std::abs(dk(s) - da(ia) * db(jb)) <= 1e-12);
    }

  CHECK_THROWS_AS(kronecker(a, tt_ones({2, 2, 2})), Error);
}

TEST_CASE("mode_k_product: identity, d=1 matvec, dense oracle") {
  std::mt19937_64 rng(113);
  const TTTensor a = random_tt(rng, {3, 4, 2}, {1, 2, 2, 1});
  const TTTensor same = mode_k_product(a, Matrix::Identity(4, 4), 2);
  CHECK(dense_dev(same, to_dense(a).entries()) <= 1e-13);

  // d = 1 reduces to an ordinary matrix-vector product
  const TTTensor v = random_tt(rng, {4}, {1, 1});
  Matrix u(2, 4);
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 4; ++j) u(i, j) = ttest::rand_complex(rng);
  const TTTensor uv = mode_k_product(v, u, 1);
  Vector vd(4);
  for (Index j = 0; j < 4; ++j) vd(j) = element(v, {j + 1});
  const Vector expect = u * vd;
  for (Index i = 0; i < 2; ++i) CHECK(std::abs(element(uv, {i + 1}) - expect(i)) <= 1e-13);

  // dense contraction oracle on mode 2
  Matrix w(5, 4);
  for (Index i = 0; i < 5; ++i)
    for (Index j = 0; j < 4; ++j) w(i, j) = ttest::rand_complex(rng);
  const TTTensor aw = mode_k_product(a, w, 2);
  const DenseTensor da = to_dense(a);
  for (const auto& idx : all_indices({3, 5, 2})) {
    Complex acc(0, 0);
    for (Index j = 1; j <= 4; ++j) acc += w(idx[1] - 1, j - 1) * da({idx[0], j, idx[2]});
    CHECK(std::abs(element(aw, idx) - acc) <= 1e-12);
  }

  CHECK_THROWS_AS(mode_k_product(a, w, 1), Error);  // 4 cols vs mode size 3
}

TEST_CASE("ttmc: empty, identities, order independence") {
  std::mt19937_64 rng(127);
  const TTTensor a = random_tt(rng, {3, 3, 3}, {1, 2, 2, 1});
  CHECK(dense_dev(ttmc(a, {}), to_dense(a).entries()) == 0.0);

  std::vector<std::pair<Matrix, Index>> ids;
  for (Index k = 1; k <= 3; ++k) ids.emplace_back(Matrix::Identity(3, 3), k);
  CHECK(dense_dev(ttmc(a, ids), to_dense(a).entries()) <= 1e-13);

  Matrix u(3, 3), v(3, 3);
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j) {
      u(i, j) = ttest::rand_complex(rng);
      v(i, j) = ttest::rand_complex(rng);
    }
  const TTTensor ab = ttmc(a, {{u, 1}, {v, 3}});
  const TTTensor ba = ttmc(a, {{v, 3}, {u, 1}});
  CHECK(dense_dev(ab, to_dense(ba).entries()) <= 1e-12);

  CHECK_THROWS_AS(ttmc(a, {{u, 1}, {v, 1}}), Error);
}

TEST_CASE("round: exact duplicate content drops back to the original ranks") {
  std::mt19937_64 rng(131);
  const TTTensor a = random_tt(rng, {4, 4, 4}, {1, 2, 2, 1});
  const TTTensor doubled = add(a, a);
  CHECK(doubled.ranks() == std::vector<Index>{1, 4, 4, 1});
  const TTTensor r = round(doubled, 1e-12);
  CHECK(r.ranks() == a.ranks());
  CHECK(frobenius_norm(subtract(r, scale(a, Complex(2, 0)))) <= 1e-10 * frobenius_norm(a));
}

TEST_CASE("round: perturbed rank-one recovers rank one") {
  std::mt19937_64 rng(137);
  std::vector<std::vector<Complex>> vecs;
  for (Index n : {4, 4, 4}) {
    std::vector<Complex> v;
    for (Index i = 0; i < n; ++i) v.push_back(ttest::rand_complex(rng));
    vecs.push_back(v);
  }
  TTTensor t = tt_rank_one(vecs);
  TTTensor noise = random_tt(rng, {4, 4, 4}, {1, 2, 2, 1});
  noise = scale(noise, Complex(1e-9 * frobenius_norm(t) / frobenius_norm(noise), 0));
  const TTTensor r = round(add(t, noise), 1e-6);
  CHECK(r.ranks() == std::vector<Index>{1, 1, 1, 1});

  // dense SVD oracle confirms the eps-rank is one at each split
  const DenseTensor d = to_dense(add(t, noise));
  for (Index k = 1; k <= 2; ++k) {
    Index rows = 0, cols = 0;
    const auto flat = matricize(d, k, &rows, &cols);
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
      for (Index j = 0; j < cols; ++j) m(i, j) = flat[static_cast<size_t>(i * cols + j)];
    Eigen::JacobiSVD<Matrix> svd(m);
    CHECK(svd.singularValues()(1) <= 1e-6 * svd.singularValues()(0));
  }
}

TEST_CASE("round: error contract over many random trials") {
  std::mt19937_64 rng(139);
  for (int trial = 0; trial < 50; ++trial) {
    const TTTensor a = random_tt(rng, {4, 5, 4}, {1, 3, 3, 1});
    const double eps = trial % 2 == 0 ? 1e-2 : 1e-6;
    const TTTensor r = round(a, eps);
    CHECK(frobenius_norm(subtract(a, r)) <= eps * frobenius_norm(a) * (1 + 1e-12));
    const auto ra = a.ranks(), rr = r.ranks();
    for (size_t i = 0; i < ra.size(); ++i) CHECK(rr[i] <= ra[i]);
  }
}

TEST_CASE("round: max_rank cap binds and is reported") {
  std::mt19937_64 rng(149);
  const TTTensor a = random_tt(rng, {5, 5, 5}, {1, 4, 4, 1});
  RoundInfo info;
  const TTTensor r = round(a, 1e-14, Index(2), &info);
  CHECK(r.max_rank() <= 2);
  CHECK(info.cap_hit);
}

TEST_CASE("round: zero tensor collapses to the canonical rank-one zero") {
  const TTTensor z = scale(tt_ones({3, 3, 3}), Complex(0, 0));
  const TTTensor zr = round(add(z, z), 1e-10);
  CHECK(zr.ranks() == std::vector<Index>{1, 1, 1, 1});
  CHECK(frobenius_norm(zr) == 0.0);
}

TEST_CASE("ttmc with unitary factors preserves the norm") {
  std::mt19937_64 rng(151);
  const TTTensor a = random_tt(rng, {4, 4, 4}, {1, 3, 3, 1});
  std::vector<std::pair<Matrix, Index>> qs;
  for (Index k = 1; k <= 3; ++k) {
    Matrix g(4, 4);
    for (Index i = 0; i < 4; ++i)
      for (Index j = 0; j < 4; ++j) g(i, j) = ttest::rand_complex(rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    qs.emplace_back(Matrix(qr.householderQ()), k);
  }
  const TTTensor b = ttmc(a, qs);
  CHECK(frobenius_norm(b) == Catch::Approx(frobenius_norm(a)).epsilon(1e-12));
}
