#include "ttinv/rank_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "backend.hpp"

namespace ttinv {

const char* to_string(CondVariant v) { return v == CondVariant::cond1 ? "cond-1" : "cond-2"; }

const char* to_string(CertMethod m) {
  switch (m) {
    case CertMethod::exact_enumeration: return "exact-enumeration";
    case CertMethod::separable_bound: return "separable-bound";
    case CertMethod::alternating_heuristic: return "alternating-heuristic";
  }
  return "?";
}

namespace {

double min_abs_interval(double lo, double hi) {
  if (lo <= 0.0 && hi >= 0.0) return 0.0;
  return std::min(std::abs(lo), std::abs(hi));
}

// per-mode ratio vectors mu/lambda for modes [begin, end)
std::vector<std::vector<Complex>> ratio_block(const SpectralFactorization& fact, Index begin,
                                              Index end) {
  std::vector<std::vector<Complex>> block;
  for (Index s = begin; s < end; ++s) {
    const Vector& mu = fact.mu[static_cast<size_t>(s)];
    const Vector& la = fact.lambda[static_cast<size_t>(s)];
    require(la.cwiseAbs().minCoeff() > 0.0, ErrorCode::numeric,
            "ratio extremes: zero lambda entry (singular M factor)");
    std::vector<Complex> vals(static_cast<size_t>(mu.size()));
    for (Index i = 0; i < mu.size(); ++i) vals[static_cast<size_t>(i)] = mu(i) / la(i);
    block.push_back(std::move(vals));
  }
  return block;
}

BlockExtremes block_extremes(const std::vector<std::vector<Complex>>& block) {
  BlockExtremes e{0, 0, 0, 0};
  for (const auto& vals : block) {
    double rl = std::numeric_limits<double>::infinity(), rh = -rl, il = rl, ih = -rl;
    for (const Complex& z : vals) {
      rl = std::min(rl, z.real());
      rh = std::max(rh, z.real());
      il = std::min(il, z.imag());
      ih = std::max(ih, z.imag());
    }
    e.re_min += rl;
    e.re_max += rh;
    e.im_min += il;
    e.im_max += ih;
  }
  return e;
}

// Exact minimum of |sum + c|^2 over the Cartesian product of the block,
// depth-first with interval pruning on the reachable suffix box.
class ExactMin {
public:
  ExactMin(const std::vector<std::vector<Complex>>& block, Complex c) : block_(block), c_(c) {
    const Index m = static_cast<Index>(block.size());
    suffix_.assign(static_cast<size_t>(m + 1), BlockExtremes{0, 0, 0, 0});
    for (Index s = m - 1; s >= 0; --s) {
      BlockExtremes e = suffix_[static_cast<size_t>(s + 1)];
      double rl = std::numeric_limits<double>::infinity(), rh = -rl, il = rl, ih = -rl;
      for (const Complex& z : block_[static_cast<size_t>(s)]) {
        rl = std::min(rl, z.real());
        rh = std::max(rh, z.real());
        il = std::min(il, z.imag());
        ih = std::max(ih, z.imag());
      }
      suffix_[static_cast<size_t>(s)] =
          BlockExtremes{e.re_min + rl, e.re_max + rh, e.im_min + il, e.im_max + ih};
    }
  }

  double run() {
    best_ = std::numeric_limits<double>::infinity();
    descend(0, c_);
    return best_;
  }

private:
  void descend(size_t level, Complex partial) {
    if (level == block_.size()) {
      best_ = std::min(best_, std::norm(partial));
      return;
    }
    const BlockExtremes& box = suffix_[level];
    const double lo_re = partial.real() + box.re_min, hi_re = partial.real() + box.re_max;
    const double lo_im = partial.imag() + box.im_min, hi_im = partial.imag() + box.im_max;
    const double reach = std::norm(Complex(min_abs_interval(lo_re, hi_re),
                                           min_abs_interval(lo_im, hi_im)));
    if (reach >= best_) return;
    for (const Complex& z : block_[level]) descend(level + 1, partial + z);
  }

  const std::vector<std::vector<Complex>>& block_;
  Complex c_;
  std::vector<BlockExtremes> suffix_;
  double best_ = 0;
};

// Multistart coordinate descent over the block indices; returns the best
// objective found (an upper bound on the true minimum, hence not sound).
double heuristic_min(const std::vector<std::vector<Complex>>& block, Complex c, Index starts,
                     std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double best = std::numeric_limits<double>::infinity();
  const size_t m = block.size();
  for (Index st = 0; st < starts; ++st) {
    std::vector<size_t> idx(m);
    for (size_t s = 0; s < m; ++s)
      idx[s] = std::uniform_int_distribution<size_t>(0, block[s].size() - 1)(rng);
    Complex total = c;
    for (size_t s = 0; s < m; ++s) total += block[s][idx[s]];
    bool changed = true;
    while (changed) {
      changed = false;
      for (size_t s = 0; s < m; ++s) {
        const Complex rest = total - block[s][idx[s]];
        size_t jbest = idx[s];
        double vbest = std::norm(rest + block[s][idx[s]]);
        for (size_t j = 0; j < block[s].size(); ++j) {
          const double v = std::norm(rest + block[s][j]);
          if (v < vbest) {
            vbest = v;
            jbest = j;
          }
        }
        if (jbest != idx[s]) {
          idx[s] = jbest;
          total = rest + block[s][jbest];
          changed = true;
        }
      }
    }
    best = std::min(best, std::norm(total));
  }
  return best;
}

// Lower bound on min |sum + c|^2 from the per-mode interval box.
double separable_min(const std::vector<std::vector<Complex>>& block, Complex c) {
  const BlockExtremes e = block_extremes(block);
  const double re = min_abs_interval(c.real() + e.re_min, c.real() + e.re_max);
  const double im = min_abs_interval(c.imag() + e.im_min, c.imag() + e.im_max);
  return re * re + im * im;
}

struct SideResult {
  Complex center;
  double radius;
  double min_c;
};

// cond-1 when negate_disk_side == false: disk over modes [0,k), minimum
// over modes [k,d). cond-2 negates the right block for the disk and
// minimizes |sum - c|^2 over the left block, which equals |(-sum) + c|^2
// with the signs folded into the value tables.
SideResult run_side(const SpectralFactorization& fact, Index k, CondVariant variant,
                    CertMethod method, Index budget, Index starts, std::uint64_t seed) {
  const Index d = fact.order();
  std::vector<std::vector<Complex>> disk_block, min_block;
  if (variant == CondVariant::cond1) {
    disk_block = ratio_block(fact, 0, k);
    min_block = ratio_block(fact, k, d);
  } else {
    disk_block = ratio_block(fact, k, d);
    for (auto& vals : disk_block)
      for (auto& z : vals) z = -z;
    min_block = ratio_block(fact, 0, k);
    for (auto& vals : min_block)
      for (auto& z : vals) z = -z;
  }
  const auto [c, radius] = make_disk(block_extremes(disk_block));

  Index combos = 1;
  bool overflow = false;
  for (const auto& vals : min_block) {
    combos *= static_cast<Index>(vals.size());
    if (combos > budget) {
      overflow = true;
      break;
    }
  }

  double mc = 0;
  switch (method) {
    case CertMethod::exact_enumeration:
      require(!overflow, ErrorCode::size_cap,
              "verify_condition: enumeration budget exceeded (" + std::to_string(budget) +
                  " tuples); use the separable or heuristic method");
      mc = ExactMin(min_block, c).run();
      break;
    case CertMethod::separable_bound:
      mc = separable_min(min_block, c);
      break;
    case CertMethod::alternating_heuristic:
      mc = heuristic_min(min_block, c, starts, seed);
      break;
  }
  return SideResult{c, radius, mc};
}

}  // namespace

BlockExtremes ratio_extremes(const SpectralFactorization& fact, Index k) {
  require(k >= 1 && k <= fact.order() - 1, ErrorCode::argument,
          "ratio_extremes: split index out of range");
  return block_extremes(ratio_block(fact, 0, k));
}

std::pair<Complex, double> make_disk(const BlockExtremes& e) {
  require(e.re_min <= e.re_max && e.im_min <= e.im_max, ErrorCode::argument,
          "make_disk: empty rectangle");
  const Complex c((e.re_min + e.re_max) / 2.0, (e.im_min + e.im_max) / 2.0);
  const double d = std::hypot((e.re_max - e.re_min) / 2.0, (e.im_max - e.im_min) / 2.0);
  return {c, d};
}

DiskCertificate verify_condition(const SpectralFactorization& fact, Index k, CertMethod method,
                                 Index budget, Index heuristic_starts, std::uint64_t seed) {
  const Index d = fact.order();
  require(d >= 2, ErrorCode::argument, "verify_condition: needs at least two modes");
  require(k >= 1 && k <= d - 1, ErrorCode::argument, "verify_condition: split out of range");

  DiskCertificate cert;
  cert.split_k = k;
  cert.order_d = d;
  cert.method = method;

  for (CondVariant variant : {CondVariant::cond1, CondVariant::cond2}) {
    const SideResult side =
        run_side(fact, k, variant, method, budget, heuristic_starts, seed);
    cert.center = side.center;
    cert.radius = side.radius;
    cert.min_c = side.min_c;
    cert.variant = variant;
    if (side.min_c > side.radius * side.radius) {
      cert.certified = true;
      cert.gap = std::sqrt(side.min_c) - side.radius;
      cert.decay_q = side.radius > 0 ? side.radius / std::sqrt(side.min_c) : 0.0;
      cert.tau = cert.decay_q;
      cert.sound = method != CertMethod::alternating_heuristic;
      return cert;
    }
  }
  // uncertified: keep the cond-1 numbers for the report
  const SideResult side =
      run_side(fact, k, CondVariant::cond1, method, budget, heuristic_starts, seed);
  cert.center = side.center;
  cert.radius = side.radius;
  cert.min_c = side.min_c;
  cert.variant = CondVariant::cond1;
  cert.certified = false;
  cert.decay_q = 1.0;
  cert.tau = 1.0;
  cert.gap = 0.0;
  // an exact enumeration soundly refutes; bounds and heuristics do not
  cert.sound = method == CertMethod::exact_enumeration;
  return cert;
}

double decay_factor(const DiskCertificate& cert) {
  require(cert.certified, ErrorCode::state,
          "decay_factor: certificate is uncertified (min_C <= D^2)");
  return cert.decay_q;
}

Index rank_bound(const DiskCertificate& cert, double eps, Index rows, Index cols) {
  require(cert.certified, ErrorCode::state, "rank_bound: certificate is uncertified");
  require(eps > 0.0 && eps < 1.0, ErrorCode::argument, "rank_bound: eps must be in (0,1)");
  require(rows >= 1 && cols >= 1, ErrorCode::argument, "rank_bound: bad matricization shape");
  const double tau = cert.tau;
  require(tau < 1.0, ErrorCode::state, "rank_bound: tau must be below 1");
  if (tau <= 0.0) return 1;
  const double n = static_cast<double>(std::min(rows, cols));
  const double tau2 = tau * tau;
  const double a = (1.0 - tau2) * eps * eps / static_cast<double>(cert.order_d - 1);
  const double b = std::exp(2.0 * n * std::log(tau));  // underflows to 0 for large n
  const double val = std::log(a + b) / std::log(tau2);
  return std::max<Index>(1, static_cast<Index>(std::ceil(val)));
}

std::vector<double> empirical_sv_decay(const TTTensor& l, Index k, Index dense_cap) {
  require(k >= 1 && k <= l.order() - 1, ErrorCode::argument,
          "empirical_sv_decay: split out of range");
  DenseTensor dense = to_dense(l, dense_cap);
  for (auto& z : dense.entries()) {
    require(std::abs(z) > 0.0, ErrorCode::numeric, "empirical_sv_decay: zero entry in L");
    z = Complex(1, 0) / z;
  }
  Index rows = 0, cols = 0;
  const std::vector<Complex> flat = matricize(dense, k, &rows, &cols);
  using RowMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMat> m(flat.data(), rows, cols);
  const Eigen::VectorXd s = backend::singular_values(Matrix(m));
  return std::vector<double>(s.data(), s.data() + s.size());
}

TheoremDecay theorem_decay_factor(PdeKind kind, const TheoremParams& p) {
  require(p.d >= 2 && p.k >= 1 && p.k <= p.d - 1, ErrorCode::argument,
          "theorem_decay_factor: bad split/order");
  const double k = static_cast<double>(p.k);
  const double d = static_cast<double>(p.d);
  TheoremDecay out;
  switch (kind) {
    case PdeKind::poisson: {
      require(p.kappa >= 1.0, ErrorCode::argument, "poisson decay: kappa must be >= 1");
      out.q = (k * p.kappa - k) / (k * p.kappa + 2.0 * d - k);
      break;
    }
    case PdeKind::bgk: {
      require(p.h > 0 && p.dt >= 0, ErrorCode::argument, "bgk decay: need h > 0, dt >= 0");
      const double rho = p.dt / p.h;
      const double radius = 0.25 * rho * k * std::hypot(p.re_max - p.re_min, p.im_max - p.im_min);
      const double re_mid = 0.5 * (p.re_min + p.re_max);
      const double im_mid = 0.5 * (p.im_min + p.im_max);
      const double re_lo = 1.0 + 0.5 * rho * ((d - k) * p.re_min + k * re_mid);
      const double re_hi = 1.0 + 0.5 * rho * ((d - k) * p.re_max + k * re_mid);
      const double im_lo = 0.5 * rho * ((d - k) * p.im_min + k * im_mid);
      const double im_hi = 0.5 * rho * ((d - k) * p.im_max + k * im_mid);
      const double dist =
          std::hypot(min_abs_interval(re_lo, re_hi), min_abs_interval(im_lo, im_hi));
      out.q = dist > 0 ? radius / dist : std::numeric_limits<double>::infinity();
      break;
    }
    case PdeKind::fokker_planck: {
      // factor spectrum is beta - (rho/4) mu with mu the real spectrum of
      // the zero-diagonal tridiagonal proof matrix
      require(p.h > 0 && p.dt >= 0, ErrorCode::argument, "fp decay: need h > 0, dt >= 0");
      const double rho = p.dt / p.h;
      const double beta = 1.0 / d - p.dt / 2.0 + p.dt / (2.0 * p.h * p.h);
      const double radius = 0.125 * rho * k * (p.mu_max - p.mu_min);
      const double mid = 0.5 * (p.mu_max + p.mu_min);
      const double lo = d * beta - 0.25 * rho * ((d - k) * p.mu_max + k * mid);
      const double hi = d * beta - 0.25 * rho * ((d - k) * p.mu_min + k * mid);
      const double dist = min_abs_interval(lo, hi);
      out.q = dist > 0 ? radius / dist : std::numeric_limits<double>::infinity();
      break;
    }
  }
  out.certified = out.q < 1.0;
  return out;
}

}  // namespace ttinv
