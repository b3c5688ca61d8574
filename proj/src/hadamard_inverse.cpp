#include "ttinv/hadamard_inverse.hpp"

#include <algorithm>
#include <cmath>

#include "backend.hpp"

namespace ttinv {

void InversionConfig::validate() const {
  require(tol > 0.0 && tol < 1.0, ErrorCode::argument, "InversionConfig: tol must be in (0,1)");
  require(round_eps > 0.0 && round_eps <= tol, ErrorCode::argument,
          "InversionConfig: need 0 < round_eps <= tol");
  require(tol >= 10.0 * round_eps, ErrorCode::argument,
          "InversionConfig: tol must be at least 10*round_eps (rounding floor)");
  require(max_iter >= 1, ErrorCode::argument, "InversionConfig: max_iter must be positive");
  require(warm_start_steps >= 0, ErrorCode::argument, "InversionConfig: negative warm start");
  require(warm_start_alpha >= 0.0, ErrorCode::argument, "InversionConfig: negative step size");
}

TTTensor ones_tensor(const std::vector<Index>& mode_sizes) { return tt_ones(mode_sizes); }

TTTensor residual(const TTTensor& l, const TTTensor& x, double round_eps) {
  require(l.mode_sizes() == x.mode_sizes(), ErrorCode::argument, "residual: shape mismatch");
  TTTensor r = subtract(hadamard(l, x), tt_ones(l.mode_sizes()));
  return round(r, round_eps);
}

double magnitude_upper_bound(const TTTensor& l) {
  double bound = 1.0;
  for (const auto& c : l.cores()) {
    double mx = 0.0;
    Matrix slice(c.r0, c.r1);
    for (Index i = 0; i < c.n; ++i) {
      for (Index p = 0; p < c.r0; ++p)
        for (Index q = 0; q < c.r1; ++q) slice(p, q) = c.at(p, i, q);
      const Eigen::VectorXd s = backend::singular_values(slice);
      if (s.size() > 0) mx = std::max(mx, s(0));
    }
    bound *= mx;
  }
  return bound;
}

TTTensor default_initial_guess(const TTTensor& l) {
  const double m = magnitude_upper_bound(l);
  require(m > 0.0, ErrorCode::numeric, "default_initial_guess: tensor is identically zero");
  return scale(conjugate(l), Complex(1.0 / (m * m), 0.0));
}

std::pair<TTTensor, InversionReport> newton_solve(const TTTensor& l, const TTTensor& x0,
                                                  const InversionConfig& cfg) {
  cfg.validate();
  require(l.mode_sizes() == x0.mode_sizes(), ErrorCode::argument, "newton_solve: shape mismatch");
  const TTTensor ones = tt_ones(l.mode_sizes());
  const double norm_e = std::sqrt(static_cast<double>(l.size()));

  InversionReport rep;
  TTTensor x = round(x0, cfg.round_eps, cfg.max_rank);
  double r_prev = 1.0;
  for (Index it = 0; it <= cfg.max_iter; ++it) {
    // The residual may be rounded more loosely early on; the extra
    // perturbation is O(eta * r) and is absorbed by the next step.
    const double eta = std::clamp(0.25 * r_prev, cfg.round_eps, 0.05);
    TTTensor res = round(subtract(hadamard(l, x), ones), eta);
    const double r = frobenius_norm(res) / norm_e;
    rep.residual_history.push_back(r);
    require(std::isfinite(r), ErrorCode::numeric, "newton_solve: residual is not finite");
    if (r <= cfg.tol) {
      rep.converged = true;
      break;
    }
    if (it == cfg.max_iter) break;
    // X <- X . (E - R), rounded; near convergence E - R collapses to
    // low rank, which keeps the Hadamard product affordable.
    TTTensor w = round(subtract(ones, res), cfg.round_eps);
    RoundInfo info;
    x = round(hadamard(x, w), cfg.round_eps, cfg.max_rank, &info);
    rep.cap_hit = rep.cap_hit || info.cap_hit;
    rep.iterations += 1;
    r_prev = r;
  }
  rep.final_ranks = x.ranks();
  return {std::move(x), std::move(rep)};
}

TTTensor gradient_descent(const TTTensor& l, const TTTensor& x0, double alpha, Index steps,
                          double round_eps) {
  require(alpha > 0.0, ErrorCode::argument, "gradient_descent: alpha must be positive");
  const TTTensor ones = tt_ones(l.mode_sizes());
  const TTTensor lc = conjugate(l);
  TTTensor x = x0;
  for (Index k = 0; k < steps; ++k) {
    TTTensor res = round(subtract(hadamard(l, x), ones), round_eps);
    x = round(subtract(x, scale(hadamard(lc, res), Complex(alpha, 0.0))), round_eps);
  }
  return x;
}

std::pair<TTTensor, InversionReport> hadamard_inverse(const TTTensor& l,
                                                      const InversionConfig& cfg) {
  cfg.validate();
  TTTensor x0 = default_initial_guess(l);
  if (cfg.warm_start_steps > 0) {
    const double m = magnitude_upper_bound(l);
    const double alpha = cfg.warm_start_alpha > 0.0 ? cfg.warm_start_alpha : 0.5 / (m * m);
    x0 = gradient_descent(l, x0, alpha, cfg.warm_start_steps, cfg.round_eps);
  }
  return newton_solve(l, x0, cfg);
}

}  // namespace ttinv
