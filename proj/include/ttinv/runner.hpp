#pragma once

#include <string>

#include "ttinv/common.hpp"

namespace ttinv {

// Command runners shared by the C API and the CLI. Each takes the JSON
// configuration text (the same schema the CLI reads from --config files),
// writes its output files under out_dir, and returns the run report as a
// JSON document. Failures throw ttinv::Error.
//
// Configuration keys (all optional unless noted):
//   problem      "poisson" | "bgk" | "fp"        (required for problem runs)
//   d, n         dimension and grid points per dimension
//   n_list       list of n values (solve convergence series)
//   reference_n  reference resolution for bgk convergence errors
//   domain       [a, b] interval, same in every dimension
//   dt, t_end    time step and final time (bgk, fp)
//   tol          Newton relative-residual target        (default 1e-6)
//   round_eps    TT-rounding tolerance                  (default 1e-8)
//   max_rank     hard rank cap, 0 = none
//   dense_cap    dense materialization cap              (default 1e7)
//   seed         RNG seed for heuristics and roundtrip  (default 0)
//   threads      BLAS threads, recorded in the report   (default 1)
//   report_every sampling stride for time series rows   (default 1)
//   bgk          {"K", "mu", "Kn", "Bo"}
//   certify      {"k": [..], "eps": [..], "method", "budget", "starts"}
//   svd          {"k": int}
//   roundtrip    {"modes": [..], "ranks": [..]} or {"file": path}
//   verify_dense force/suppress the dense residual check in invert

std::string run_invert(const std::string& config_json, const std::string& out_dir);
std::string run_solve(const std::string& config_json, const std::string& out_dir);
std::string run_certify(const std::string& config_json, const std::string& out_dir);
std::string run_svd_decay(const std::string& config_json, const std::string& out_dir);
std::string run_roundtrip(const std::string& config_json, const std::string& out_dir);

/// Map an error to the CLI/process exit code: 0 ok, 2 usage, 3 numeric,
/// 4 resource cap.
int exit_code_for(ErrorCode code);

/// Apply the requested BLAS thread count (recorded in reports).
void set_threads(int threads);

}  // namespace ttinv
