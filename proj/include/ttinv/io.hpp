#pragma once

#include <string>

#include "ttinv/dense_tensor.hpp"
#include "ttinv/tt_tensor.hpp"

namespace ttinv {

class TTMatrix;

// ".ttj" tensor files: a JSON document with fields
//   order (int), modes (int list), ranks (int list), dtype = "complex128",
//   cores = list of flat arrays of alternating re/im doubles, each core
//   row-major in (r_{k-1}, n_k, r_k).
// Dense tensors use the same schema with ranks omitted and a single flat
// entry array. TT matrices add row_modes/col_modes; their cores are
// row-major in (r_{k-1}, m_k, n_k, r_k).

void save_tt(const TTTensor& t, const std::string& path);
TTTensor load_tt(const std::string& path);

void save_dense(const DenseTensor& d, const std::string& path);
DenseTensor load_dense(const std::string& path);

void save_tt_matrix(const TTMatrix& m, const std::string& path);
TTMatrix load_tt_matrix(const std::string& path);

std::string tt_to_json(const TTTensor& t);
TTTensor tt_from_json(const std::string& text);

}  // namespace ttinv
