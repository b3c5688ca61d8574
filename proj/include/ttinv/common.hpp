#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ttinv {

using Complex = std::complex<double>;
using Index = std::int64_t;

enum class ErrorCode {
  argument,         // bad argument / shape mismatch
  bounds,           // index out of range
  size_cap,         // dense-size or enumeration budget exceeded
  numeric,          // NaN/Inf or numerically degenerate input
  state,            // operation not valid for the object's state
  diagonalization,  // defective or ill-conditioned pencil
  regime,           // parameters outside a method's validity regime
  io,               // file or format problem
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

inline Index product(const std::vector<Index>& v) {
  Index p = 1;
  for (Index x : v) p *= x;
  return p;
}

// Default cap on dense materialization (number of tensor entries).
inline constexpr Index kDefaultDenseCap = 10'000'000;

}  // namespace ttinv
