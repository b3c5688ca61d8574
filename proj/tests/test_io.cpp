#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "support/test_support.hpp"
#include "ttinv/io.hpp"
#include "ttinv/kron_sum.hpp"
#include "ttinv/tt_matrix.hpp"

using namespace ttinv;

namespace {

std::string temp_path(const char* stem) {
  return (std::filesystem::temp_directory_path() / stem).string();
}

}  // namespace

TEST_CASE("ttj round trip is bit exact") {
  std::mt19937_64 rng(7);
  const TTTensor t = ttest::random_tt(rng, {3, 5, 2, 4}, {1, 2, 4, 3, 1});
  const std::string path = temp_path("ttinv_io_a.ttj");
  save_tt(t, path);
  const TTTensor back = load_tt(path);
  REQUIRE(back.mode_sizes() == t.mode_sizes());
  REQUIRE(back.ranks() == t.ranks());
  for (Index k = 0; k < t.order(); ++k)
    for (size_t i = 0; i < t.core(k).data.size(); ++i)
      CHECK(back.core(k).data[i] == t.core(k).data[i]);
  std::remove(path.c_str());
}

TEST_CASE("ttj carries awkward doubles exactly") {
  // denormals, negative zero, long mantissas
  TTCore c(1, 4, 1);
  c.data = {Complex(0.1 + 0.2, -0.0), Complex(5e-324, 1e308),
            Complex(-1.0 / 3.0, 0x1.fffffffffffffp-1), Complex(0, 0)};
  const TTTensor t({c});
  const std::string path = temp_path("ttinv_io_b.ttj");
  save_tt(t, path);
  const TTTensor back = load_tt(path);
  for (size_t i = 0; i < 4; ++i) {
    CHECK(back.core(0).data[i].real() == c.data[i].real());
    CHECK(back.core(0).data[i].imag() == c.data[i].imag());
  }
  std::remove(path.c_str());
}

TEST_CASE("dense tensor files use the same schema without ranks") {
  std::mt19937_64 rng(11);
  const DenseTensor d = ttest::random_dense(rng, {3, 4});
  const std::string path = temp_path("ttinv_io_c.ttj");
  save_dense(d, path);
  const DenseTensor back = load_dense(path);
  REQUIRE(back.mode_sizes() == d.mode_sizes());
  for (size_t i = 0; i < d.entries().size(); ++i) CHECK(back.entries()[i] == d.entries()[i]);
  // a dense file must not load as a TT tensor
  CHECK_THROWS_AS(load_tt(path), Error);
  std::remove(path.c_str());
}

TEST_CASE("TT matrix files round trip") {
  std::mt19937_64 rng(13);
  const TTTensor x = ttest::random_tt(rng, {3, 4}, {1, 2, 1});
  const TTMatrix m = expanding(x);
  const std::string path = temp_path("ttinv_io_d.ttj");
  save_tt_matrix(m, path);
  const TTMatrix back = load_tt_matrix(path);
  REQUIRE(back.row_sizes() == m.row_sizes());
  REQUIRE(back.col_sizes() == m.col_sizes());
  for (Index k = 0; k < m.order(); ++k)
    for (size_t i = 0; i < m.core(k).data.size(); ++i)
      CHECK(back.core(k).data[i] == m.core(k).data[i]);
  std::remove(path.c_str());
}

TEST_CASE("io errors carry the io code") {
  CHECK_THROWS_AS(load_tt("/nonexistent/definitely/missing.ttj"), Error);
  try {
    load_tt("/nonexistent/definitely/missing.ttj");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::io);
  }

  const std::string path = temp_path("ttinv_io_e.ttj");
  {
    std::ofstream out(path);
    out << "{\"order\": 2, \"modes\": [2, 2], \"dtype\": \"complex128\"}";
  }
  CHECK_THROWS_AS(load_tt(path), Error);  // missing ranks/cores
  std::remove(path.c_str());
}

TEST_CASE("json text round trip") {
  std::mt19937_64 rng(17);
  const TTTensor t = ttest::random_tt(rng, {2, 2}, {1, 2, 1});
  const TTTensor back = tt_from_json(tt_to_json(t));
  for (Index k = 0; k < t.order(); ++k)
    for (size_t i = 0; i < t.core(k).data.size(); ++i)
      CHECK(back.core(k).data[i] == t.core(k).data[i]);
}
