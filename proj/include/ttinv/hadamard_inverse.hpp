#pragma once

#include <optional>

#include "ttinv/tt_algebra.hpp"

namespace ttinv {

struct InversionConfig {
  double tol = 1e-6;        // relative residual target ||L.X - E||_F / ||E||_F
  double round_eps = 1e-8;  // rounding tolerance applied to each iterate
  Index max_iter = 100;
  std::optional<Index> max_rank;  // hard cap on iterate ranks
  Index warm_start_steps = 0;     // gradient-descent steps before Newton
  double warm_start_alpha = 0.0;  // 0 picks 0.5 / max|l|^2

  void validate() const;
};

struct InversionReport {
  Index iterations = 0;
  std::vector<double> residual_history;  // relative residuals, one per iteration
  std::vector<Index> final_ranks;
  bool converged = false;
  bool cap_hit = false;
};

/// Rank-one TT tensor of all ones (the Newton iteration's right-hand side).
TTTensor ones_tensor(const std::vector<Index>& mode_sizes);

/// Rounded TT representation of L.X - ones.
TTTensor residual(const TTTensor& l, const TTTensor& x, double round_eps);

/// Upper bound on max |l| from per-core spectral norms of the mode slices.
double magnitude_upper_bound(const TTTensor& l);

/// Initial iterate conj(L)/M with M an upper bound on max |l|^2, so that
/// |1 - l*x0| < 1 elementwise whenever l is nonzero.
TTTensor default_initial_guess(const TTTensor& l);

/// Newton iteration X <- round(X . (2*ones - L.X)) until the relative
/// residual drops below cfg.tol. Non-convergence is reported, not thrown.
std::pair<TTTensor, InversionReport> newton_solve(const TTTensor& l, const TTTensor& x0,
                                                  const InversionConfig& cfg);

/// Gradient descent X <- X - alpha * conj(L).(L.X - ones); linear rate but
/// smaller intermediate ranks than Newton. Used as a warm start.
TTTensor gradient_descent(const TTTensor& l, const TTTensor& x0, double alpha, Index steps,
                          double round_eps);

/// Convenience: default initial guess (plus optional warm start) + Newton.
std::pair<TTTensor, InversionReport> hadamard_inverse(const TTTensor& l,
                                                      const InversionConfig& cfg);

}  // namespace ttinv
