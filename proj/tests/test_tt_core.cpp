#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Eigenvalues>

#include "support/test_support.hpp"
#include "ttinv/tt_algebra.hpp"

using namespace ttinv;
using ttest::all_indices;
using ttest::dense_bruteforce;
using ttest::random_dense;
using ttest::random_tt;
using ttest::tt_entry_bruteforce;

TEST_CASE("element: rank-one all-ones tensor") {
  const TTTensor t = tt_ones({2, 2, 2});
  CHECK(element(t, {1, 2, 1}) == Complex(1, 0));
  CHECK_THROWS_AS(element(t, {1, 3, 1}), Error);
  CHECK_THROWS_AS(element(t, {1, 2}), Error);
}

TEST_CASE("element: rank-(1,2,1) sum-of-eigenvalues tensor") {
  // eigenvalues of tridiag(-1,2,-1) at n=2 are {1,3}; the explicit
  // rank-(1,2,1) two-block construction stores lambda = 1 rows
  Matrix a(2, 2);
  a << 2, -1, -1, 2;
  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  const double mu1 = es.eigenvalues()(0).real();  // 1
  const double mu2 = es.eigenvalues()(1).real();  // 3
  CHECK(mu1 == Catch::Approx(1.0).margin(1e-12));
  CHECK(mu2 == Catch::Approx(3.0).margin(1e-12));

  TTCore c0(1, 2, 2), c1(2, 2, 1);
  for (Index i = 0; i < 2; ++i) {
    const double mu = i == 0 ? mu1 : mu2;
    c0.at(0, i, 0) = Complex(1, 0);
    c0.at(0, i, 1) = Complex(mu, 0);
    c1.at(0, i, 0) = Complex(mu, 0);
    c1.at(1, i, 0) = Complex(1, 0);
  }
  const TTTensor t({c0, c1});
  CHECK(element(t, {1, 1}) == Complex(2, 0));  // mu1 + mu1
  CHECK(element(t, {2, 2}) == Complex(6, 0));  // mu2 + mu2
  CHECK(element(t, {1, 2}) == Complex(4, 0));
}

TEST_CASE("element matches brute-force contraction on a random TT") {
  std::mt19937_64 rng(42);
  const TTTensor t = random_tt(rng, {3, 3, 3, 3}, {1, 2, 2, 2, 1});
  for (const auto& idx : all_indices({3, 3, 3, 3})) {
    const Complex a = element(t, idx);
    const Complex b = tt_entry_bruteforce(t, idx);
    CHECK(std::abs(a - b) <= 1e-12);
  }
}

TEST_CASE("to_dense: rank-one outer product and round trip") {
  std::mt19937_64 rng(1);
  std::vector<std::vector<Complex>> vecs{{ttest::rand_complex(rng), ttest::rand_complex(rng)},
                                         {ttest::rand_complex(rng), ttest::rand_complex(rng),
                                          ttest::rand_complex(rng)}};
  const TTTensor t = tt_rank_one(vecs);
  const DenseTensor d = to_dense(t);
  for (Index i = 1; i <= 2; ++i)
    for (Index j = 1; j <= 3; ++j)
      CHECK(std::abs(d({i, j}) - vecs[0][static_cast<size_t>(i - 1)] *
                                     vecs[1][static_cast<size_t>(j - 1)]) <= 1e-14);

  const TTTensor t2 = random_tt(rng, {4, 3, 4}, {1, 3, 2, 1});
  const DenseTensor d2 = to_dense(t2);
  const TTTensor back = from_dense(d2, 0.0);
  const double num = frobenius_norm(subtract(back, t2));
  CHECK(num <= 1e-12 * frobenius_norm(t2));
}

TEST_CASE("to_dense: cap error") {
  const TTTensor t = tt_ones({3, 3});
  CHECK_THROWS_AS(to_dense(t, 8), Error);
  try {
    to_dense(t, 8);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::size_cap);
  }
}

TEST_CASE("from_dense: rank-one input yields unit ranks at eps = 0") {
  std::mt19937_64 rng(3);
  std::vector<std::vector<Complex>> vecs;
  for (Index n : {3, 4, 2}) {
    std::vector<Complex> v;
    for (Index i = 0; i < n; ++i) v.push_back(ttest::rand_complex(rng));
    vecs.push_back(v);
  }
  const DenseTensor d = to_dense(tt_rank_one(vecs));
  const TTTensor t = from_dense(d, 0.0);
  CHECK(t.ranks() == std::vector<Index>{1, 1, 1, 1});
}

TEST_CASE("from_dense: sum-of-eigenvalues tensor has ranks at most 2") {
  // dense d=3, n=4 tensor of mu_{j1}+mu_{j2}+mu_{j3} from the 1-D
  // eigendecomposition; its exact TT ranks are (1,2,2,1)
  Matrix a = Matrix::Zero(4, 4);
  for (Index i = 0; i < 4; ++i) {
    a(i, i) = 2;
    if (i + 1 < 4) a(i, i + 1) = a(i + 1, i) = -1;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  DenseTensor d({4, 4, 4});
  for (const auto& idx : all_indices({4, 4, 4})) {
    double sum = 0;
    for (Index k = 0; k < 3; ++k) sum += es.eigenvalues()(idx[static_cast<size_t>(k)] - 1).real();
    d(idx) = Complex(sum, 0);
  }
  const TTTensor t = from_dense(d, 0.0);
  const auto r = t.ranks();
  CHECK(r[1] <= 2);
  CHECK(r[2] <= 2);
  // reconstruction is exact
  const DenseTensor back = to_dense(t);
  CHECK(ttest::max_abs_dev(back.entries(), d.entries()) <= 1e-10);
}

TEST_CASE("from_dense: eps contract on random input") {
  std::mt19937_64 rng(7);
  const DenseTensor d = random_dense(rng, {5, 5, 5});
  const TTTensor t = from_dense(d, 1e-6);
  const DenseTensor back = to_dense(t);
  double err = 0;
  for (size_t i = 0; i < d.entries().size(); ++i) err += std::norm(d.entries()[i] - back.entries()[i]);
  CHECK(std::sqrt(err) <= 1e-6 * d.frobenius_norm());
}

TEST_CASE("matricize: d=2 identity mapping and index formula") {
  std::mt19937_64 rng(11);
  const DenseTensor d2 = random_dense(rng, {3, 4});
  Index rows = 0, cols = 0;
  const auto flat = matricize(d2, 1, &rows, &cols);
  REQUIRE(rows == 3);
  REQUIRE(cols == 4);
  for (Index i = 1; i <= 3; ++i)
    for (Index j = 1; j <= 4; ++j)
      CHECK(flat[static_cast<size_t>((i - 1) * 4 + (j - 1))] == d2({i, j}));

  // d=3, n=(2,2,2), k=1: entry (1,3) is A(1,2,1) per the bijection
  const DenseTensor d3 = random_dense(rng, {2, 2, 2});
  const auto m = matricize(d3, 1, &rows, &cols);
  REQUIRE(rows == 2);
  REQUIRE(cols == 4);
  CHECK(m[static_cast<size_t>(0 * 4 + 2)] == d3({1, 2, 1}));

  CHECK_THROWS_AS(matricize(d3, 3, nullptr, nullptr), Error);
  CHECK_THROWS_AS(matricize(d3, 0, nullptr, nullptr), Error);
}

TEST_CASE("matricize: rank-one tensor has numerical rank one at every split") {
  std::mt19937_64 rng(13);
  std::vector<std::vector<Complex>> vecs;
  for (Index n : {3, 3, 3}) {
    std::vector<Complex> v;
    for (Index i = 0; i < n; ++i) v.push_back(ttest::rand_complex(rng));
    vecs.push_back(v);
  }
  const DenseTensor d = to_dense(tt_rank_one(vecs));
  for (Index k = 1; k <= 2; ++k) {
    Index rows = 0, cols = 0;
    const auto flat = matricize(d, k, &rows, &cols);
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
      for (Index j = 0; j < cols; ++j) m(i, j) = flat[static_cast<size_t>(i * cols + j)];
    Eigen::JacobiSVD<Matrix> svd(m);
    const auto& s = svd.singularValues();
    CHECK(s(0) > 0);
    for (Index i = 1; i < s.size(); ++i) CHECK(s(i) <= 1e-12 * s(0));
  }
}

TEST_CASE("matricize is a bijection back to the dense tensor") {
  std::mt19937_64 rng(17);
  const DenseTensor d = random_dense(rng, {3, 2, 4});
  Index rows = 0, cols = 0;
  const auto flat = matricize(d, 2, &rows, &cols);
  // reshaping back is the identity on the row-major buffer
  CHECK(flat == d.entries());
}

TEST_CASE("frobenius_norm: ones tensor, conjugation, dense agreement") {
  CHECK(frobenius_norm(tt_ones({2, 2, 2})) == Catch::Approx(std::sqrt(8.0)).epsilon(1e-14));

  std::mt19937_64 rng(19);
  const TTTensor t = random_tt(rng, {3, 3, 3, 3}, {1, 3, 4, 2, 1});
  const double n1 = frobenius_norm(t);
  CHECK(frobenius_norm(conjugate(t)) == Catch::Approx(n1).epsilon(1e-14));
  const double nd = to_dense(t).frobenius_norm();
  CHECK(std::abs(n1 - nd) <= 1e-12 * nd);
}

TEST_CASE("conjugate: real unchanged, scalar case, dense check") {
  const TTTensor ones = tt_ones({2, 3});
  const TTTensor r = scale(ones, Complex(2.5, 0));
  const DenseTensor rc = to_dense(conjugate(r));
  for (const auto& z : rc.entries()) CHECK(z == Complex(2.5, 0));

  const TTTensor c = scale(ones, Complex(1, 2));
  CHECK(element(conjugate(c), {1, 1}) == Complex(1, -2));

  std::mt19937_64 rng(23);
  const TTTensor t = random_tt(rng, {3, 4, 2}, {1, 2, 3, 1});
  const DenseTensor d = to_dense(t);
  const DenseTensor dc = to_dense(conjugate(t));
  for (size_t i = 0; i < d.entries().size(); ++i)
    CHECK(dc.entries()[i] == std::conj(d.entries()[i]));
}

TEST_CASE("constructors reject invalid rank chains") {
  std::vector<TTCore> cores;
  cores.emplace_back(1, 2, 3);
  cores.emplace_back(2, 2, 1);  // mismatch: 3 != 2
  CHECK_THROWS_AS(TTTensor(std::move(cores)), Error);

  std::vector<TTCore> cores2;
  cores2.emplace_back(2, 2, 1);  // boundary rank must be 1
  CHECK_THROWS_AS(TTTensor(std::move(cores2)), Error);
}

TEST_CASE("element/to_dense agreement property") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 5; ++trial) {
    const TTTensor t = random_tt(rng, {4, 3, 5}, {1, 3, 2, 1});
    const DenseTensor d = to_dense(t);
    double mx = 0;
    for (const auto& z : d.entries()) mx = std::max(mx, std::abs(z));
    for (const auto& idx : all_indices({4, 3, 5}))
      CHECK(std::abs(element(t, idx) - d(idx)) <= 1e-12 * std::max(1.0, mx));
  }
}
