#pragma once

#include <optional>

#include "ttinv/kron_sum.hpp"

namespace ttinv {

enum class CondVariant { cond1, cond2 };

enum class CertMethod { exact_enumeration, separable_bound, alternating_heuristic };

const char* to_string(CondVariant v);
const char* to_string(CertMethod m);

/// Per-split certificate for the disk condition. When certified, the
/// singular values of the matricization of the Hadamard inverse at
/// split_k decay like sigma_{j+1} <= q^j sigma_1 with q = decay_q.
struct DiskCertificate {
  Index split_k = 1;  // 1-based split, 1 <= k <= d-1
  Index order_d = 2;
  Complex center{0, 0};   // disk center c
  double radius = 0;      // disk radius D
  double min_c = 0;       // min of |sum + c|^2 over the complementary block
  double gap = 0;         // D' = sqrt(min_c) - D when certified
  bool certified = false; // min_c > D^2
  double decay_q = 1;     // D/(D+D'), the eta->0 limit; < 1 when certified
  double tau = 1;         // same limit, used in the rank bound
  CondVariant variant = CondVariant::cond1;
  CertMethod method = CertMethod::exact_enumeration;
  bool sound = false;     // true only for exact enumeration / separable bound
};

/// Exact separable extremes (re_min, re_max, im_min, im_max) of the sums
/// sum_{s<=k} mu^(s)/lambda^(s) over the left index block.
struct BlockExtremes {
  double re_min, re_max, im_min, im_max;
};
BlockExtremes ratio_extremes(const SpectralFactorization& fact, Index k);

/// Smallest closed disk (c, D) containing the rectangle
/// [re_min, re_max] x [im_min, im_max].
std::pair<Complex, double> make_disk(const BlockExtremes& e);

/// Verify the disk condition at split k. `exact` enumerates the
/// complementary block (budget-limited, with interval pruning);
/// `separable` certifies from per-mode interval bounds (sound, possibly
/// conservative); `heuristic` runs multistart per-mode coordinate descent
/// and is never marked sound. cond-2 is tried with the blocks swapped
/// when cond-1 fails.
DiskCertificate verify_condition(const SpectralFactorization& fact, Index k, CertMethod method,
                                 Index budget = 10'000'000, Index heuristic_starts = 20,
                                 std::uint64_t heuristic_seed = 0);

/// The certified decay factor q = D/(D+D'); state error when uncertified.
double decay_factor(const DiskCertificate& cert);

/// TT-rank bound r_k <= ceil(log_{tau^2}((1-tau^2) eps^2/(d-1) + tau^{2n}))
/// with n = min(rows, cols) of the full matricization at the split.
Index rank_bound(const DiskCertificate& cert, double eps, Index rows, Index cols);

/// Dense oracle: singular values (descending) of the matricization of the
/// elementwise reciprocal of L at split k.
std::vector<double> empirical_sv_decay(const TTTensor& l, Index k,
                                       Index dense_cap = kDefaultDenseCap);

enum class PdeKind { poisson, bgk, fokker_planck };

struct TheoremParams {
  Index k = 1;  // split, 1-based
  Index d = 2;  // order
  // poisson: condition number mu_1/mu_n of the 1-D stiffness factor
  double kappa = 1.0;
  // bgk / fokker-planck
  double dt = 0.0, h = 1.0;
  // bgk: extremes of the spectrum of V (x) (h grad) (purely grid-dependent)
  double re_min = 0, re_max = 0, im_min = 0, im_max = 0;
  // fokker-planck: extremes of the real spectrum of the tridiagonal A
  double mu_min = 0, mu_max = 0;
};

struct TheoremDecay {
  double q = 1.0;
  bool certified = false;  // q < 1 within the theorem's regime
};

/// Closed-form decay factors of the per-PDE theorems, evaluated from the
/// spectra extremes by the same disk geometry the verification uses;
/// outside the regime the returned q is >= 1 and flagged uncertified.
TheoremDecay theorem_decay_factor(PdeKind kind, const TheoremParams& p);

}  // namespace ttinv
