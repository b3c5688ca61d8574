#include <catch2/catch_amalgamated.hpp>

#include "support/test_support.hpp"
#include "ttinv/hadamard_inverse.hpp"

using namespace ttinv;

TEST_CASE("ones_tensor basics") {
  const TTTensor e = ones_tensor({2, 2, 2});
  CHECK(frobenius_norm(e) == Catch::Approx(std::sqrt(8.0)).epsilon(1e-14));
  CHECK(element(e, {2, 1, 2}) == Complex(1, 0));

  std::mt19937_64 rng(3);
  const TTTensor a = ttest::random_tt(rng, {2, 2, 2}, {1, 2, 2, 1});
  CHECK(frobenius_norm(subtract(hadamard(a, e), a)) <= 1e-13 * frobenius_norm(a));
}

TEST_CASE("residual: fixed points and scaling") {
  const TTTensor e = ones_tensor({2, 3, 2});
  CHECK(frobenius_norm(residual(e, e, 1e-12)) <= 1e-13 * frobenius_norm(e));

  const TTTensor two = scale(e, Complex(2, 0));
  const TTTensor r = residual(two, e, 1e-12);
  CHECK(frobenius_norm(r) / frobenius_norm(e) == Catch::Approx(1.0).epsilon(1e-12));

  // near-exact inverse from the dense reciprocal has a tiny residual
  std::mt19937_64 rng(5);
  DenseTensor d = ttest::random_dense_magnitude(rng, {3, 3, 3}, 1.0, 2.0);
  DenseTensor dinv = d;
  for (auto& z : dinv.entries()) z = Complex(1, 0) / z;
  const TTTensor l = from_dense(d, 0.0);
  const TTTensor x = from_dense(dinv, 0.0);
  CHECK(frobenius_norm(residual(l, x, 1e-14)) <= 1e-10 * frobenius_norm(ones_tensor({3, 3, 3})));

  CHECK_THROWS_AS(residual(l, ones_tensor({3, 3}), 1e-12), Error);
}

TEST_CASE("default_initial_guess: constant and complex-constant tensors") {
  const TTTensor e = ones_tensor({2, 2, 2});
  const TTTensor l = scale(e, Complex(4, 0));
  const TTTensor x0 = default_initial_guess(l);
  // conj(L)/M with M = max|l|^2 = 16 gives exactly 1/4
  CHECK(std::abs(element(x0, {1, 1, 1}) - Complex(0.25, 0)) <= 1e-12);

  const TTTensor lc = scale(e, Complex(1, 1));
  const TTTensor x0c = default_initial_guess(lc);
  CHECK(std::abs(element(x0c, {1, 1, 1}) - Complex(0.5, -0.5)) <= 1e-12);

  CHECK_THROWS_AS(default_initial_guess(scale(e, Complex(0, 0))), Error);
}

TEST_CASE("default_initial_guess: elementwise contraction bound holds") {
  std::mt19937_64 rng(7);
  const DenseTensor d = ttest::random_dense_magnitude(rng, {4, 4, 4}, 0.5, 3.0);
  const TTTensor l = from_dense(d, 0.0);
  const TTTensor x0 = default_initial_guess(l);
  const DenseTensor x0d = to_dense(x0);
  for (size_t i = 0; i < d.entries().size(); ++i) {
    const Complex err = Complex(1, 0) - d.entries()[i] * x0d.entries()[i];
    CHECK(std::abs(err) < 1.0);
  }
}

TEST_CASE("newton_solve: scalar recurrence on a constant tensor") {
  const TTTensor e = ones_tensor({2, 2, 2});
  const TTTensor l = scale(e, Complex(2, 0));
  InversionConfig cfg;
  cfg.tol = 1e-10;
  cfg.round_eps = 1e-12;
  auto [x, rep] = newton_solve(l, scale(e, Complex(0.4, 0)), cfg);
  REQUIRE(rep.converged);
  CHECK(std::abs(element(x, {1, 1, 1}) - Complex(0.5, 0)) <= 1e-10);
  // residuals follow r_{k+1} = r_k^2 from r_0 = 0.2
  REQUIRE(rep.residual_history.size() >= 4);
  double expect = 0.2;
  for (size_t i = 0; i + 1 < rep.residual_history.size() && expect > 1e-9; ++i) {
    CHECK(rep.residual_history[i] == Catch::Approx(expect).epsilon(1e-6));
    expect *= expect;
  }
}

TEST_CASE("newton_solve: random real tensor against the dense reciprocal") {
  std::mt19937_64 rng(11);
  DenseTensor d({4, 4, 4, 4});
  std::uniform_real_distribution<double> u(1.0, 2.0);
  for (auto& z : d.entries()) z = Complex(u(rng), 0);
  const TTTensor l = from_dense(d, 0.0);
  InversionConfig cfg;
  cfg.tol = 1e-8;
  cfg.round_eps = 1e-9;
  auto [x, rep] = hadamard_inverse(l, cfg);
  REQUIRE(rep.converged);
  const DenseTensor xd = to_dense(x);
  double mx = 0;
  for (size_t i = 0; i < d.entries().size(); ++i)
    mx = std::max(mx, std::abs(xd.entries()[i] - 1.0 / d.entries()[i]) *
                          std::abs(d.entries()[i]));
  CHECK(mx <= 1e-6);
}

TEST_CASE("newton_solve: complex constant tensor") {
  const TTTensor e = ones_tensor({2, 2});
  const TTTensor l = scale(e, Complex(1, 1));
  InversionConfig cfg;
  cfg.tol = 1e-10;
  cfg.round_eps = 1e-12;
  auto [x, rep] = hadamard_inverse(l, cfg);
  REQUIRE(rep.converged);
  CHECK(std::abs(element(x, {1, 1}) - Complex(0.5, -0.5)) <= 1e-9);
}

TEST_CASE("newton_solve: iteration cap reports rather than throws") {
  const TTTensor e = ones_tensor({2, 2});
  const TTTensor l = scale(e, Complex(100, 0));
  InversionConfig cfg;
  cfg.tol = 1e-10;
  cfg.round_eps = 1e-12;
  cfg.max_iter = 2;  // far too few from a crude start
  auto [x, rep] = newton_solve(l, scale(e, Complex(1e-4, 0)), cfg);
  CHECK_FALSE(rep.converged);
  CHECK(rep.iterations == 2);
  CHECK(rep.residual_history.size() == 3);
}

TEST_CASE("config validation enforces the rounding floor") {
  InversionConfig cfg;
  cfg.tol = 1e-8;
  cfg.round_eps = 5e-9;  // tol < 10*round_eps
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.round_eps = 1e-9;
  CHECK_NOTHROW(cfg.validate());
  cfg.tol = 0.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("gradient_descent: exact one-step cases") {
  const TTTensor e = ones_tensor({2, 2, 2});
  const TTTensor zero = scale(e, Complex(0, 0));
  const TTTensor x1 = gradient_descent(e, zero, 1.0, 1, 1e-12);
  CHECK(frobenius_norm(subtract(x1, e)) <= 1e-12 * frobenius_norm(e));

  const TTTensor l2 = scale(e, Complex(2, 0));
  const TTTensor x2 = gradient_descent(l2, zero, 0.25, 1, 1e-12);
  CHECK(std::abs(element(x2, {1, 1, 1}) - Complex(0.5, 0)) <= 1e-12);
}

TEST_CASE("gradient_descent: monotone residual decay at the safe step size") {
  std::mt19937_64 rng(13);
  DenseTensor d({3, 3, 3});
  std::uniform_real_distribution<double> u(1.0, 2.0);
  for (auto& z : d.entries()) z = Complex(u(rng), 0);
  double lmax = 0;
  for (const auto& z : d.entries()) lmax = std::max(lmax, std::abs(z));
  const TTTensor l = from_dense(d, 0.0);
  const double alpha = 1.0 / (lmax * lmax);
  TTTensor x = scale(ones_tensor({3, 3, 3}), Complex(0, 0));
  double prev = std::numeric_limits<double>::infinity();
  for (int step = 0; step < 20; ++step) {
    x = gradient_descent(l, x, alpha, 1, 1e-13);
    const double r = frobenius_norm(residual(l, x, 1e-13));
    CHECK(r <= prev * (1 + 1e-12));
    prev = r;
  }
}

TEST_CASE("quadratic tail of the residual history") {
  std::mt19937_64 rng(17);
  const DenseTensor d = ttest::random_dense_magnitude(rng, {4, 4, 4}, 1.0, 2.0);
  const TTTensor l = from_dense(d, 0.0);
  InversionConfig cfg;
  cfg.tol = 1e-9;
  cfg.round_eps = 1e-10;
  auto [x, rep] = hadamard_inverse(l, cfg);
  REQUIRE(rep.converged);
  for (size_t i = 0; i + 1 < rep.residual_history.size(); ++i) {
    const double r = rep.residual_history[i];
    const double rn = rep.residual_history[i + 1];
    if (r < 0.1 && rn > 20 * cfg.round_eps)
      CHECK(rn <= 10.0 * r * r + 1e-12);
  }
}

TEST_CASE("conjugation symmetry of the inverse") {
  std::mt19937_64 rng(19);
  const DenseTensor d = ttest::random_dense_magnitude(rng, {3, 3, 3}, 1.0, 2.0);
  const TTTensor l = from_dense(d, 0.0);
  InversionConfig cfg;
  cfg.tol = 1e-9;
  cfg.round_eps = 1e-10;
  auto [x, rep] = hadamard_inverse(l, cfg);
  auto [xc, repc] = hadamard_inverse(conjugate(l), cfg);
  REQUIRE(rep.converged);
  REQUIRE(repc.converged);
  const DenseTensor a = to_dense(xc), b = to_dense(conjugate(x));
  CHECK(ttest::max_abs_dev(a.entries(), b.entries()) <= 1e-7);
}

TEST_CASE("oracle equivalence on tensors bounded away from zero") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 3; ++trial) {
    const DenseTensor d = ttest::random_dense_magnitude(rng, {3, 4, 3}, 0.7, 2.5);
    const TTTensor l = from_dense(d, 0.0);
    InversionConfig cfg;
    cfg.tol = 1e-8;
    cfg.round_eps = 1e-9;
    auto [x, rep] = hadamard_inverse(l, cfg);
    REQUIRE(rep.converged);
    const DenseTensor xd = to_dense(x);
    for (size_t i = 0; i < d.entries().size(); ++i) {
      const Complex truth = Complex(1, 0) / d.entries()[i];
      CHECK(std::abs(xd.entries()[i] - truth) <= 10 * cfg.tol * std::abs(truth));
    }
  }
}
