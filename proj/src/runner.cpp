#include "ttinv/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <optional>
#include <fstream>
#include <random>

#include <json.hpp>

#include "ttinv/hadamard_inverse.hpp"
#include "ttinv/io.hpp"
#include "ttinv/pde.hpp"
#include "ttinv/rank_analysis.hpp"
#include "ttinv/tt_matrix.hpp"

#ifdef TTINV_WITH_LAPACKE
extern "C" void openblas_set_num_threads(int);
#endif

namespace ttinv {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Full round-trip decimal formatting keeps CSV bodies byte-stable.
std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

struct Config {
  std::string problem;
  Index d = 3, n = 8;
  std::vector<Index> n_list;
  Index reference_n = 0;
  bool has_domain = false;
  double domain_a = 0, domain_b = 0;
  double dt = 0.0025, t_end = 1.0;
  Index steps_override = 0;
  double tol = 1e-6, round_eps = 1e-8;
  std::optional<Index> max_rank;
  Index dense_cap = kDefaultDenseCap;
  std::uint64_t seed = 0;
  int threads = 1;
  Index report_every = 1;
  BGKParams bgk;
  std::vector<Index> cert_k;
  std::vector<double> cert_eps{1e-4, 1e-6};
  CertMethod cert_method = CertMethod::exact_enumeration;
  Index cert_budget = 10'000'000;
  Index cert_starts = 20;
  Index svd_k = 1;
  json roundtrip;
  std::optional<bool> verify_dense;
  json echo;
};

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (key == a) ok = true;
    require(ok, ErrorCode::argument, "config: unknown key \"" + key + "\" in " + where);
  }
}

Config parse_config(const std::string& text) {
  json j;
  try {
    j = text.empty() ? json::object() : json::parse(text);
  } catch (const std::exception& e) {
    fail(ErrorCode::argument, std::string("config: invalid JSON: ") + e.what());
  }
  require(j.is_object(), ErrorCode::argument, "config: expected a JSON object");
  check_keys(j,
             {"problem", "d", "n", "n_list", "reference_n", "domain", "dt", "t_end", "steps",
              "tol", "round_eps", "max_rank", "dense_cap", "seed", "threads", "report_every",
              "bgk", "certify", "svd", "roundtrip", "verify_dense"},
             "top level");
  Config c;
  c.echo = j;
  c.problem = j.value("problem", "");
  c.d = j.value("d", Index(3));
  c.n = j.value("n", Index(8));
  if (j.contains("n_list")) c.n_list = j["n_list"].get<std::vector<Index>>();
  c.reference_n = j.value("reference_n", Index(0));
  if (j.contains("domain")) {
    const auto dom = j["domain"].get<std::vector<double>>();
    require(dom.size() == 2 && dom[0] < dom[1], ErrorCode::argument,
            "config: domain must be [a, b] with a < b");
    c.has_domain = true;
    c.domain_a = dom[0];
    c.domain_b = dom[1];
  }
  c.dt = j.value("dt", 0.0025);
  c.t_end = j.value("t_end", 1.0);
  c.steps_override = j.value("steps", Index(0));
  c.tol = j.value("tol", 1e-6);
  c.round_eps = j.value("round_eps", 1e-8);
  if (j.contains("max_rank") && j["max_rank"].get<Index>() > 0)
    c.max_rank = j["max_rank"].get<Index>();
  c.dense_cap = j.value("dense_cap", kDefaultDenseCap);
  c.seed = j.value("seed", std::uint64_t(0));
  c.threads = j.value("threads", 1);
  c.report_every = std::max<Index>(1, j.value("report_every", Index(1)));
  if (j.contains("bgk")) {
    const json& b = j["bgk"];
    check_keys(b, {"K", "mu", "Kn", "Bo"}, "bgk");
    c.bgk.K = b.value("K", 1.0);
    c.bgk.mu_exp = b.value("mu", 0.5);
    c.bgk.Kn = b.value("Kn", 1.0);
    c.bgk.Bo = b.value("Bo", 3.65);
  }
  c.bgk.dt = c.dt;
  if (j.contains("certify")) {
    const json& ct = j["certify"];
    check_keys(ct, {"k", "eps", "method", "budget", "starts"}, "certify");
    if (ct.contains("k")) c.cert_k = ct["k"].get<std::vector<Index>>();
    if (ct.contains("eps")) c.cert_eps = ct["eps"].get<std::vector<double>>();
    const std::string m = ct.value("method", "exact");
    if (m == "exact") c.cert_method = CertMethod::exact_enumeration;
    else if (m == "separable") c.cert_method = CertMethod::separable_bound;
    else if (m == "heuristic") c.cert_method = CertMethod::alternating_heuristic;
    else fail(ErrorCode::argument, "config: certify.method must be exact|separable|heuristic");
    c.cert_budget = ct.value("budget", Index(10'000'000));
    c.cert_starts = ct.value("starts", Index(20));
  }
  if (j.contains("svd")) {
    check_keys(j["svd"], {"k"}, "svd");
    c.svd_k = j["svd"].value("k", Index(1));
  }
  if (j.contains("roundtrip")) c.roundtrip = j["roundtrip"];
  if (j.contains("verify_dense")) c.verify_dense = j["verify_dense"].get<bool>();
  return c;
}

InversionConfig inversion_config(const Config& c) {
  InversionConfig ic;
  ic.tol = c.tol;
  ic.round_eps = c.round_eps;
  ic.max_iter = 200;
  ic.max_rank = c.max_rank;
  return ic;
}

struct Problem {
  PdeKind kind;
  GridSpec grid_x;      // spatial grid (all kinds)
  GridSpec grid_v;      // velocity grid (bgk only)
  KroneckerSumOperator op;  // the theorem's (left) operator
};

Problem build_problem(const Config& c, Index n) {
  require(!c.problem.empty(), ErrorCode::argument, "config: \"problem\" is required");
  Problem p;
  if (c.problem == "poisson") {
    p.kind = PdeKind::poisson;
    p.grid_x = GridSpec{c.d, n, c.has_domain ? c.domain_a : -1.0,
                        c.has_domain ? c.domain_b : 1.0, Boundary::dirichlet};
    p.op = poisson_operator(p.grid_x);
  } else if (c.problem == "bgk") {
    p.kind = PdeKind::bgk;
    const double a = c.has_domain ? c.domain_a : -std::numbers::pi;
    const double b = c.has_domain ? c.domain_b : std::numbers::pi;
    p.grid_x = GridSpec{c.d, n, a, b, Boundary::periodic};
    p.grid_v = GridSpec{c.d, n, a, b, Boundary::periodic};
    p.op = bgk_operator(p.grid_x, p.grid_v, c.dt);
  } else if (c.problem == "fp") {
    p.kind = PdeKind::fokker_planck;
    p.grid_x = GridSpec{c.d, n, c.has_domain ? c.domain_a : -5.0,
                        c.has_domain ? c.domain_b : 5.0, Boundary::dirichlet};
    p.op = fp_operator(p.grid_x, c.dt);
  } else {
    fail(ErrorCode::argument, "config: problem must be poisson|bgk|fp");
  }
  return p;
}

TheoremParams theorem_params_for(const Problem& p, const Config& c, Index k) {
  switch (p.kind) {
    case PdeKind::poisson: return poisson_theorem_params(p.grid_x, k);
    case PdeKind::bgk: return bgk_theorem_params(p.grid_x, p.grid_v, c.dt, k);
    case PdeKind::fokker_planck: return fp_theorem_params(p.grid_x, c.dt, k);
  }
  fail(ErrorCode::argument, "unknown problem kind");
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  require(out.good(), ErrorCode::io, "cannot open " + path + " for writing");
  out << text;
  require(out.good(), ErrorCode::io, "write failed for " + path);
}

std::string finish_report(json& report, const std::string& out_dir, Clock::time_point t0) {
  report["runtime_seconds"] = seconds_since(t0);
  const std::string path = out_dir + "/report.json";
  write_text(path, report.dump(1) + "\n");
  report["outputs"].push_back(path);
  return report.dump(1);
}

json base_report(const char* command, const Config& c, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  json report;
  report["command"] = command;
  report["config"] = c.echo;
  report["threads"] = c.threads;
  report["outputs"] = json::array();
  report["metrics"] = json::object();
  return report;
}

json certificate_json(const DiskCertificate& cert) {
  json j;
  j["split_k"] = cert.split_k;
  j["order_d"] = cert.order_d;
  j["center_re"] = cert.center.real();
  j["center_im"] = cert.center.imag();
  j["radius"] = cert.radius;
  j["min_c"] = cert.min_c;
  j["gap"] = cert.gap;
  j["certified"] = cert.certified;
  if (cert.certified) {
    j["decay_q"] = cert.decay_q;
    j["tau"] = cert.tau;
  } else {
    j["decay_q"] = "uncertified";
  }
  j["condition_variant"] = to_string(cert.variant);
  j["method"] = to_string(cert.method);
  j["sound"] = cert.sound;
  return j;
}

TTTensor random_tt(const std::vector<Index>& modes, const std::vector<Index>& ranks,
                   std::uint64_t seed) {
  require(ranks.size() == modes.size() + 1, ErrorCode::argument,
          "roundtrip: ranks must have length order + 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<TTCore> cores;
  for (size_t k = 0; k < modes.size(); ++k) {
    TTCore c(ranks[k], modes[k], ranks[k + 1]);
    for (auto& z : c.data) z = Complex(u(rng), u(rng));
    cores.push_back(std::move(c));
  }
  return TTTensor(std::move(cores));
}

// Hadamard-inverse pipeline pieces shared by invert/solve.
struct Inverted {
  SpectralFactorization fact;
  TTTensor lambda;
  TTTensor xinv;
  InversionReport rep;
};

Inverted invert_operator(const KroneckerSumOperator& op, const Config& c) {
  Inverted out;
  out.fact = joint_diagonalize(op);
  out.lambda = lambda_tensor(out.fact);
  auto [xinv, rep] = hadamard_inverse(out.lambda, inversion_config(c));
  require(rep.converged, ErrorCode::numeric,
          "Hadamard-inverse Newton iteration did not converge within the iteration cap (last "
          "residual " +
              (rep.residual_history.empty() ? std::string("n/a")
                                            : fmt(rep.residual_history.back())) +
              ")");
  out.xinv = std::move(xinv);
  out.rep = std::move(rep);
  return out;
}

json inversion_metrics(const Inverted& inv) {
  json m;
  m["iterations"] = inv.rep.iterations;
  m["converged"] = inv.rep.converged;
  m["cap_hit"] = inv.rep.cap_hit;
  m["residual_history"] = inv.rep.residual_history;
  m["final_ranks"] = inv.rep.final_ranks;
  m["averaged_tt_rank"] = averaged_rank(inv.xinv);
  return m;
}

}  // namespace

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::numeric:
    case ErrorCode::diagonalization: return 3;
    case ErrorCode::size_cap: return 4;
    default: return 2;
  }
}

void set_threads(int threads) {
  if (threads < 1) return;
#ifdef TTINV_WITH_LAPACKE
  openblas_set_num_threads(threads);
#endif
}

std::string run_invert(const std::string& config_json, const std::string& out_dir) {
  const auto t0 = Clock::now();
  Config c = parse_config(config_json);
  set_threads(c.threads);
  json report = base_report("invert", c, out_dir);

  Problem p = build_problem(c, c.n);
  Inverted inv = invert_operator(p.op, c);
  TTMatrix b = assemble_inverse(inv.fact, inv.xinv);

  const std::string inv_path = out_dir + "/inverse.ttj";
  const std::string had_path = out_dir + "/hadamard_inverse.ttj";
  save_tt_matrix(b, inv_path);
  save_tt(inv.xinv, had_path);
  report["outputs"].push_back(inv_path);
  report["outputs"].push_back(had_path);

  json& m = report["metrics"];
  m = inversion_metrics(inv);
  const auto [lo, hi] = lambda_entry_range(inv.fact);
  const double kappa = lo > 0 ? hi / lo : std::numeric_limits<double>::infinity();
  m["kappa_bound"] = kappa;
  m["accuracy_bound"] =
      accuracy_bound(inv.fact, kappa,
                     inv.rep.residual_history.empty() ? 0.0 : inv.rep.residual_history.back());

  const Index total = product(p.op.mode_sizes());
  const bool want_dense = c.verify_dense.value_or(total <= 1024);
  if (want_dense) {
    require(total <= 4096, ErrorCode::size_cap, "invert: dense verification needs n^d <= 4096");
    const Matrix bl = b.to_dense_matrix(c.dense_cap) * p.op.dense();
    const double res = (bl - Matrix::Identity(total, total)).norm() /
                       std::sqrt(static_cast<double>(total));
    m["dense_inverse_residual"] = res;
  }
  return finish_report(report, out_dir, t0);
}

namespace {

// Relative l2 distance on coincident coarse-grid points; the reference is
// restricted by index striding (grids share every stride-th point).
double restricted_error(const DenseTensor& coarse, const DenseTensor& ref, Index nx_c, Index nv_c,
                        Index nx_r, Index nv_r, Index d) {
  require(nx_r % nx_c == 0 && nv_r % nv_c == 0, ErrorCode::argument,
          "bgk series: reference n must be a multiple of each n");
  const Index sx = nx_r / nx_c, sv = nv_r / nv_c;
  double num = 0.0, den = 0.0;
  const Index per_mode = nv_c * nx_c;
  const Index total = coarse.size();
  std::vector<Index> idx(static_cast<size_t>(d));
  for (Index flat = 0; flat < total; ++flat) {
    Index rem = flat;
    for (Index k = d - 1; k >= 0; --k) {
      idx[static_cast<size_t>(k)] = rem % per_mode;
      rem /= per_mode;
    }
    Index rflat = 0;
    for (Index k = 0; k < d; ++k) {
      const Index iv = idx[static_cast<size_t>(k)] / nx_c;
      const Index ix = idx[static_cast<size_t>(k)] % nx_c;
      rflat = rflat * (nv_r * nx_r) + (iv * sv) * nx_r + ix * sx;
    }
    const Complex a = coarse.entries()[static_cast<size_t>(flat)];
    const Complex r = ref.entries()[static_cast<size_t>(rflat)];
    num += std::norm(a - r);
    den += std::norm(r);
  }
  require(den > 0, ErrorCode::numeric, "bgk series: reference vanishes on the coarse grid");
  return std::sqrt(num / den);
}

TTTensor run_bgk_to_time(const Config& c, Index n, Index* steps_out, Index* avg_rank,
                         double round_eps) {
  Config cc = c;
  Problem p = build_problem(cc, n);
  BGKParams params = c.bgk;
  params.dt = c.dt;
  BGKWorkspace ws = bgk_setup(p.grid_x, p.grid_v, params, inversion_config(c));
  TTTensor f = maxwellian(bgk_initial_fields(p.grid_x), p.grid_x, p.grid_v, params.Bo);
  Index steps = c.steps_override;
  if (steps == 0) {
    require(c.dt > 0, ErrorCode::argument, "bgk: dt == 0 requires an explicit \"steps\" count");
    steps = static_cast<Index>(std::llround(c.t_end / c.dt));
  }
  Index ar = averaged_rank(ws.xinv);
  for (Index s = 0; s < steps; ++s) f = bgk_step(f, ws, round_eps);
  if (steps_out) *steps_out = steps;
  if (avg_rank) *avg_rank = ar;
  return f;
}

}  // namespace

std::string run_solve(const std::string& config_json, const std::string& out_dir) {
  const auto t0 = Clock::now();
  Config c = parse_config(config_json);
  set_threads(c.threads);
  json report = base_report("solve", c, out_dir);
  json& m = report["metrics"];
  std::string csv;
  json row_seconds = json::array();

  if (c.problem == "poisson") {
    csv = "n,relative_error,averaged_tt_rank\n";
    std::vector<Index> ns = c.n_list.empty() ? std::vector<Index>{c.n} : c.n_list;
    json errors = json::array();
    for (Index n : ns) {
      const auto trow = Clock::now();
      Problem p = build_problem(c, n);
      Inverted inv = invert_operator(p.op, c);
      TTTensor u = round(solve(inv.fact, inv.xinv, poisson_rhs(p.grid_x), c.round_eps),
                         c.round_eps);
      const double err = relative_error(u, poisson_exact(p.grid_x));
      const Index ar = averaged_rank(inv.xinv);
      csv += std::to_string(n) + "," + fmt(err) + "," + std::to_string(ar) + "\n";
      row_seconds.push_back(seconds_since(trow));
      errors.push_back(err);
      if (n == ns.back()) {
        m["inversion"] = inversion_metrics(inv);
        const std::string upath = out_dir + "/solution.ttj";
        save_tt(u, upath);
        report["outputs"].push_back(upath);
      }
    }
    m["relative_errors"] = errors;
  } else if (c.problem == "fp") {
    csv = "t,relative_error,averaged_tt_rank\n";
    Problem p = build_problem(c, c.n);
    require(c.dt > 0, ErrorCode::argument, "fp: dt must be positive");
    FPWorkspace ws = fp_setup(p.grid_x, c.dt, inversion_config(c));
    FPState state{fp_exact(p.grid_x, 0.0), 0.0, 2.0};
    const Index steps = c.steps_override > 0
                            ? c.steps_override
                            : static_cast<Index>(std::llround(c.t_end / c.dt));
    const double hd = std::pow(p.grid_x.h(), static_cast<double>(c.d));
    const double mass0 = sum_entries(state.rho).real() * hd;
    double max_err = 0.0, final_err = 0.0, max_mass_drift = 0.0;
    for (Index s = 1; s <= steps; ++s) {
      const auto trow = Clock::now();
      state = fp_step(state, ws, c.round_eps);
      final_err = relative_error(state.rho, fp_exact(p.grid_x, state.t));
      max_err = std::max(max_err, final_err);
      const double mass = sum_entries(state.rho).real() * hd;
      max_mass_drift = std::max(max_mass_drift, std::abs(mass - mass0) / std::abs(mass0));
      if (s % c.report_every == 0 || s == steps) {
        csv += fmt(state.t) + "," + fmt(final_err) + "," +
               std::to_string(averaged_rank(state.rho)) + "\n";
        row_seconds.push_back(seconds_since(trow));
      }
    }
    m["inversion_iterations"] = ws.inversion.iterations;
    m["xinv_averaged_tt_rank"] = averaged_rank(ws.xinv);
    m["final_relative_error"] = final_err;
    m["max_relative_error"] = max_err;
    m["non_accumulation_ratio"] = max_err > 0 ? final_err / max_err : 0.0;
    m["max_mass_drift"] = max_mass_drift;
    const std::string rpath = out_dir + "/solution.ttj";
    save_tt(state.rho, rpath);
    report["outputs"].push_back(rpath);
  } else if (c.problem == "bgk") {
    if (!c.n_list.empty()) {
      // spatial convergence series against a fine reference run
      const Index ref_n = c.reference_n > 0 ? c.reference_n : 128;
      csv = "n,relative_error,averaged_tt_rank\n";
      Index ref_steps = 0, ref_rank = 0;
      const TTTensor fref = run_bgk_to_time(c, ref_n, &ref_steps, &ref_rank, c.round_eps);
      const DenseTensor fref_d = to_dense(fref, c.dense_cap);
      json errors = json::array();
      for (Index n : c.n_list) {
        const auto trow = Clock::now();
        Index steps = 0, ar = 0;
        const TTTensor f = run_bgk_to_time(c, n, &steps, &ar, c.round_eps);
        const DenseTensor fd = to_dense(f, c.dense_cap);
        const double err = restricted_error(fd, fref_d, n, n, ref_n, ref_n, c.d);
        csv += std::to_string(n) + "," + fmt(err) + "," + std::to_string(ar) + "\n";
        row_seconds.push_back(seconds_since(trow));
        errors.push_back(err);
      }
      m["relative_errors"] = errors;
      m["reference_n"] = ref_n;
    } else {
      // time series; the error column tracks the per-step relative change
      csv = "t,relative_error,averaged_tt_rank\n";
      Problem p = build_problem(c, c.n);
      BGKParams params = c.bgk;
      params.dt = c.dt;
      BGKWorkspace ws = bgk_setup(p.grid_x, p.grid_v, params, inversion_config(c));
      TTTensor f = maxwellian(bgk_initial_fields(p.grid_x), p.grid_x, p.grid_v, params.Bo);
      Index steps = c.steps_override;
      if (steps == 0) {
        require(c.dt > 0, ErrorCode::argument, "bgk: dt == 0 requires an explicit \"steps\"");
        steps = static_cast<Index>(std::llround(c.t_end / c.dt));
      }
      for (Index s = 1; s <= steps; ++s) {
        const auto trow = Clock::now();
        const TTTensor fprev = f;
        f = bgk_step(f, ws, c.round_eps);
        const double change = frobenius_norm(subtract(f, fprev)) / frobenius_norm(fprev);
        if (s % c.report_every == 0 || s == steps) {
          csv += fmt(c.dt * static_cast<double>(s)) + "," + fmt(change) + "," +
                 std::to_string(averaged_rank(f)) + "\n";
          row_seconds.push_back(seconds_since(trow));
        }
      }
      m["xinv_averaged_tt_rank"] = averaged_rank(ws.xinv);
      const std::string fpath = out_dir + "/solution.ttj";
      save_tt(f, fpath);
      report["outputs"].push_back(fpath);
    }
  } else {
    fail(ErrorCode::argument, "config: problem must be poisson|bgk|fp");
  }

  const std::string csv_path = out_dir + "/series.csv";
  write_text(csv_path, csv);
  report["outputs"].push_back(csv_path);
  m["row_seconds"] = row_seconds;
  return finish_report(report, out_dir, t0);
}

std::string run_certify(const std::string& config_json, const std::string& out_dir) {
  const auto t0 = Clock::now();
  Config c = parse_config(config_json);
  set_threads(c.threads);
  json report = base_report("certify", c, out_dir);

  Problem p = build_problem(c, c.n);
  SpectralFactorization fact = joint_diagonalize(p.op);
  const Index d = fact.order();
  std::vector<Index> ks = c.cert_k;
  if (ks.empty())
    for (Index k = 1; k <= d - 1; ++k) ks.push_back(k);

  json certs = json::array();
  std::string csv =
      "k,condition_variant,method,sound,certified,center_re,center_im,radius,min_c,gap,decay_q,"
      "theorem_q";
  for (double eps : c.cert_eps) csv += ",rank_bound_eps" + fmt(eps);
  csv += "\n";

  for (Index k : ks) {
    require(k >= 1 && k <= d - 1, ErrorCode::argument,
            "certify: split k = " + std::to_string(k) + " out of range (1.." +
                std::to_string(d - 1) + ")");
    DiskCertificate cert =
        verify_condition(fact, k, c.cert_method, c.cert_budget, c.cert_starts, c.seed);
    const TheoremDecay thm = theorem_decay_factor(p.kind, theorem_params_for(p, c, k));
    json cj = certificate_json(cert);
    cj["theorem_q"] = thm.q;
    cj["theorem_certified"] = thm.certified;

    double rows = 1, cols = 1;
    for (Index s = 0; s < k; ++s) rows *= static_cast<double>(fact.mu[static_cast<size_t>(s)].size());
    for (Index s = k; s < d; ++s) cols *= static_cast<double>(fact.mu[static_cast<size_t>(s)].size());
    const Index rows_i = static_cast<Index>(std::min(rows, 1e15));
    const Index cols_i = static_cast<Index>(std::min(cols, 1e15));
    json bounds = json::object();
    csv += std::to_string(k) + "," + to_string(cert.variant) + "," + to_string(cert.method) +
           "," + (cert.sound ? "true" : "false") + "," + (cert.certified ? "true" : "false") +
           "," + fmt(cert.center.real()) + "," + fmt(cert.center.imag()) + "," +
           fmt(cert.radius) + "," + fmt(cert.min_c) + "," + fmt(cert.gap) + "," +
           (cert.certified ? fmt(cert.decay_q) : std::string("uncertified")) + "," + fmt(thm.q);
    for (double eps : c.cert_eps) {
      if (cert.certified) {
        const Index rb = rank_bound(cert, eps, rows_i, cols_i);
        bounds["eps" + fmt(eps)] = rb;
        csv += "," + std::to_string(rb);
      } else {
        csv += ",";
      }
    }
    csv += "\n";
    cj["rank_bounds"] = bounds;
    certs.push_back(cj);
  }

  const std::string jpath = out_dir + "/certificates.json";
  const std::string cpath = out_dir + "/certificates.csv";
  write_text(jpath, certs.dump(1) + "\n");
  write_text(cpath, csv);
  report["outputs"].push_back(jpath);
  report["outputs"].push_back(cpath);
  report["certificates"] = certs;
  return finish_report(report, out_dir, t0);
}

std::string run_svd_decay(const std::string& config_json, const std::string& out_dir) {
  const auto t0 = Clock::now();
  Config c = parse_config(config_json);
  set_threads(c.threads);
  json report = base_report("svd-decay", c, out_dir);

  Problem p = build_problem(c, c.n);
  SpectralFactorization fact = joint_diagonalize(p.op);
  const TTTensor lam = lambda_tensor(fact);
  const std::vector<double> svs = empirical_sv_decay(lam, c.svd_k, c.dense_cap);
  DiskCertificate cert =
      verify_condition(fact, c.svd_k, c.cert_method, c.cert_budget, c.cert_starts, c.seed);

  std::string csv = "j,sigma_ratio,envelope\n";
  require(!svs.empty() && svs[0] > 0, ErrorCode::numeric, "svd-decay: zero leading singular value");
  double envelope = 1.0;
  for (size_t j = 0; j < svs.size(); ++j) {
    csv += std::to_string(j + 1) + "," + fmt(svs[j] / svs[0]) + "," +
           (cert.certified ? fmt(envelope) : std::string("")) + "\n";
    envelope *= cert.certified ? cert.decay_q : 1.0;
  }
  const std::string cpath = out_dir + "/svd_decay.csv";
  write_text(cpath, csv);
  report["outputs"].push_back(cpath);
  report["metrics"]["certified"] = cert.certified;
  if (cert.certified) report["metrics"]["decay_q"] = cert.decay_q;
  report["metrics"]["singular_values"] = svs.size();
  return finish_report(report, out_dir, t0);
}

std::string run_roundtrip(const std::string& config_json, const std::string& out_dir) {
  const auto t0 = Clock::now();
  Config c = parse_config(config_json);
  set_threads(c.threads);
  json report = base_report("roundtrip", c, out_dir);

  TTTensor t;
  if (c.roundtrip.contains("file")) {
    t = load_tt(c.roundtrip["file"].get<std::string>());
  } else {
    require(c.roundtrip.contains("modes"), ErrorCode::argument,
            "roundtrip: needs \"file\" or \"modes\"");
    const auto modes = c.roundtrip["modes"].get<std::vector<Index>>();
    std::vector<Index> ranks;
    if (c.roundtrip.contains("ranks")) {
      ranks = c.roundtrip["ranks"].get<std::vector<Index>>();
    } else {
      ranks.assign(modes.size() + 1, 2);
      ranks.front() = ranks.back() = 1;
    }
    t = random_tt(modes, ranks, c.seed);
  }
  const std::string path = out_dir + "/roundtrip.ttj";
  save_tt(t, path);
  const TTTensor back = load_tt(path);
  require(back.mode_sizes() == t.mode_sizes() && back.ranks() == t.ranks(), ErrorCode::io,
          "roundtrip: reloaded shape differs");
  double max_diff = 0.0;
  bool bit_exact = true;
  for (Index k = 0; k < t.order(); ++k) {
    const auto& a = t.core(k).data;
    const auto& b = back.core(k).data;
    for (size_t i = 0; i < a.size(); ++i) {
      max_diff = std::max(max_diff, std::abs(a[i] - b[i]));
      if (a[i] != b[i]) bit_exact = false;
    }
  }
  report["outputs"].push_back(path);
  report["metrics"]["bit_exact"] = bit_exact;
  report["metrics"]["max_abs_diff"] = max_diff;
  require(bit_exact, ErrorCode::io, "roundtrip: serialized values did not round-trip bit-exactly");
  return finish_report(report, out_dir, t0);
}

}  // namespace ttinv
