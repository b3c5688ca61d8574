#include "ttinv/io.hpp"

#include <fstream>

#include <json.hpp>

#include "ttinv/tt_matrix.hpp"

namespace ttinv {

namespace {

using nlohmann::json;

json complex_array(const std::vector<Complex>& v) {
  json arr = json::array();
  for (const Complex& z : v) {
    arr.push_back(z.real());
    arr.push_back(z.imag());
  }
  return arr;
}

std::vector<Complex> parse_complex_array(const json& arr, Index expected) {
  require(arr.is_array() && static_cast<Index>(arr.size()) == 2 * expected, ErrorCode::io,
          "ttj: core array has wrong length");
  std::vector<Complex> v(static_cast<size_t>(expected));
  for (Index i = 0; i < expected; ++i)
    v[static_cast<size_t>(i)] =
        Complex(arr[static_cast<size_t>(2 * i)].get<double>(),
                arr[static_cast<size_t>(2 * i + 1)].get<double>());
  return v;
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::io, "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    fail(ErrorCode::io, "cannot parse " + path + ": " + e.what());
  }
  return j;
}

void write_json(const json& j, const std::string& path) {
  std::ofstream out(path);
  require(out.good(), ErrorCode::io, "cannot open " + path + " for writing");
  out << j.dump(1) << "\n";
  require(out.good(), ErrorCode::io, "write failed for " + path);
}

json tt_to_json_impl(const TTTensor& t) {
  json j;
  j["order"] = t.order();
  j["modes"] = t.mode_sizes();
  j["ranks"] = t.ranks();
  j["dtype"] = "complex128";
  json cores = json::array();
  for (const auto& c : t.cores()) cores.push_back(complex_array(c.data));
  j["cores"] = std::move(cores);
  return j;
}

TTTensor tt_from_json_impl(const json& j) {
  require(j.contains("order") && j.contains("modes") && j.contains("ranks") && j.contains("cores"),
          ErrorCode::io, "ttj: missing required field");
  require(j.value("dtype", "complex128") == "complex128", ErrorCode::io,
          "ttj: unsupported dtype");
  const auto modes = j["modes"].get<std::vector<Index>>();
  const auto ranks = j["ranks"].get<std::vector<Index>>();
  const Index d = j["order"].get<Index>();
  require(static_cast<Index>(modes.size()) == d && static_cast<Index>(ranks.size()) == d + 1,
          ErrorCode::io, "ttj: inconsistent shape metadata");
  require(static_cast<Index>(j["cores"].size()) == d, ErrorCode::io, "ttj: wrong core count");
  std::vector<TTCore> cores;
  cores.reserve(static_cast<size_t>(d));
  for (Index k = 0; k < d; ++k) {
    TTCore c(ranks[static_cast<size_t>(k)], modes[static_cast<size_t>(k)],
             ranks[static_cast<size_t>(k + 1)]);
    c.data = parse_complex_array(j["cores"][static_cast<size_t>(k)], c.r0 * c.n * c.r1);
    cores.push_back(std::move(c));
  }
  return TTTensor(std::move(cores));
}

}  // namespace

void save_tt(const TTTensor& t, const std::string& path) { write_json(tt_to_json_impl(t), path); }

TTTensor load_tt(const std::string& path) { return tt_from_json_impl(load_json(path)); }

std::string tt_to_json(const TTTensor& t) { return tt_to_json_impl(t).dump(1); }

TTTensor tt_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    fail(ErrorCode::io, std::string("ttj: parse error: ") + e.what());
  }
  return tt_from_json_impl(j);
}

void save_dense(const DenseTensor& d, const std::string& path) {
  json j;
  j["order"] = d.order();
  j["modes"] = d.mode_sizes();
  j["dtype"] = "complex128";
  j["cores"] = json::array({complex_array(d.entries())});
  write_json(j, path);
}

DenseTensor load_dense(const std::string& path) {
  json j = load_json(path);
  require(!j.contains("ranks"), ErrorCode::io, "expected a dense tensor file, found TT ranks");
  require(j.contains("modes") && j.contains("cores") && j["cores"].size() == 1, ErrorCode::io,
          "dense ttj: missing fields");
  const auto modes = j["modes"].get<std::vector<Index>>();
  auto entries = parse_complex_array(j["cores"][0], product(modes));
  return DenseTensor(modes, std::move(entries));
}

void save_tt_matrix(const TTMatrix& m, const std::string& path) {
  json j;
  j["order"] = m.order();
  j["row_modes"] = m.row_sizes();
  j["col_modes"] = m.col_sizes();
  std::vector<Index> modes;
  for (Index k = 0; k < m.order(); ++k) modes.push_back(m.core(k).m * m.core(k).n);
  j["modes"] = modes;
  j["ranks"] = m.ranks();
  j["dtype"] = "complex128";
  json cores = json::array();
  for (const auto& c : m.cores()) cores.push_back(complex_array(c.data));
  j["cores"] = std::move(cores);
  write_json(j, path);
}

TTMatrix load_tt_matrix(const std::string& path) {
  json j = load_json(path);
  require(j.contains("row_modes") && j.contains("col_modes"), ErrorCode::io,
          "expected a TT matrix file");
  const auto rows = j["row_modes"].get<std::vector<Index>>();
  const auto cols = j["col_modes"].get<std::vector<Index>>();
  const auto ranks = j["ranks"].get<std::vector<Index>>();
  const Index d = j["order"].get<Index>();
  require(static_cast<Index>(rows.size()) == d && static_cast<Index>(cols.size()) == d &&
              static_cast<Index>(ranks.size()) == d + 1 &&
              static_cast<Index>(j["cores"].size()) == d,
          ErrorCode::io, "TT matrix file: inconsistent metadata");
  std::vector<TTMatrixCore> cores;
  cores.reserve(static_cast<size_t>(d));
  for (Index k = 0; k < d; ++k) {
    TTMatrixCore c(ranks[static_cast<size_t>(k)], rows[static_cast<size_t>(k)],
                   cols[static_cast<size_t>(k)], ranks[static_cast<size_t>(k + 1)]);
    c.data = parse_complex_array(j["cores"][static_cast<size_t>(k)], c.r0 * c.m * c.n * c.r1);
    cores.push_back(std::move(c));
  }
  return TTMatrix(std::move(cores));
}

}  // namespace ttinv
