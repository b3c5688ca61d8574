// Command-line front end for the ttinv shared library. Everything runs
// through the C API; this translation unit only handles argument parsing,
// config-file overrides, and exit codes.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ttinv.h"

namespace {

using nlohmann::json;

struct CommonFlags {
  std::string config_path;
  std::string out_dir = "ttinv-out";
  double tol = 0;
  double round_eps = 0;
  std::int64_t max_rank = -1;
  std::int64_t dense_cap = -1;
  std::int64_t seed = -1;
  int threads = -1;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "JSON configuration file");
  cmd->add_option("--out", f.out_dir, "output directory (default ttinv-out)");
  cmd->add_option("--tol", f.tol, "Newton relative-residual tolerance");
  cmd->add_option("--round-eps", f.round_eps, "TT-rounding tolerance");
  cmd->add_option("--max-rank", f.max_rank, "hard cap on TT ranks (0 = none)");
  cmd->add_option("--dense-cap", f.dense_cap, "dense materialization cap (entries)");
  cmd->add_option("--seed", f.seed, "RNG seed for heuristics and roundtrip");
  cmd->add_option("--threads", f.threads, "BLAS threads (TTINV_THREADS overrides)");
}

int load_config(const CLI::App* cmd, const CommonFlags& f, std::string& out) {
  json cfg = json::object();
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in.good()) {
      std::cerr << "error: cannot open config file " << f.config_path << "\n";
      return 2;
    }
    try {
      in >> cfg;
    } catch (const std::exception& e) {
      std::cerr << "error: cannot parse " << f.config_path << ": " << e.what() << "\n";
      return 2;
    }
  }
  if (cmd->count("--tol")) cfg["tol"] = f.tol;
  if (cmd->count("--round-eps")) cfg["round_eps"] = f.round_eps;
  if (cmd->count("--max-rank")) cfg["max_rank"] = f.max_rank;
  if (cmd->count("--dense-cap")) cfg["dense_cap"] = f.dense_cap;
  if (cmd->count("--seed")) cfg["seed"] = f.seed;
  if (cmd->count("--threads")) cfg["threads"] = f.threads;
  if (const char* env = std::getenv("TTINV_THREADS")) {
    try {
      cfg["threads"] = std::stoi(env);
    } catch (...) {
      std::cerr << "error: TTINV_THREADS is not an integer\n";
      return 2;
    }
  }
  out = cfg.dump();
  return 0;
}

int dispatch(int (*runner)(const char*, const char*, ttinv_report**), const CLI::App* cmd,
             const CommonFlags& f) {
  std::string cfg;
  if (int rc = load_config(cmd, f, cfg)) return rc;
  ttinv_report* report = nullptr;
  const int status = runner(cfg.c_str(), f.out_dir.c_str(), &report);
  if (status != TTINV_OK) {
    std::cerr << "error: " << ttinv_last_error() << "\n";
    ttinv_report_release(report);
    return ttinv_exit_code(status);
  }
  std::cout << ttinv_report_json(report);
  ttinv_report_release(report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ttinv: TT-format inversion of Kronecker-sum operators"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ttinv_version()));

  struct Sub {
    const char* name;
    const char* help;
    int (*runner)(const char*, const char*, ttinv_report**);
  };
  const Sub subs[] = {
      {"invert", "compute and store the TT inverse of the configured operator", &ttinv_run_invert},
      {"solve", "solve the configured PDE problem and emit an error series", &ttinv_run_solve},
      {"certify", "emit low-rank certificates for the configured operator", &ttinv_run_certify},
      {"svd-decay", "dense singular-value decay study at one split", &ttinv_run_svd_decay},
      {"roundtrip", "serialize a TT tensor and verify the bit-exact round trip",
       &ttinv_run_roundtrip},
  };

  CommonFlags flags[std::size(subs)];
  CLI::App* cmds[std::size(subs)];
  for (size_t i = 0; i < std::size(subs); ++i) {
    cmds[i] = app.add_subcommand(subs[i].name, subs[i].help);
    add_common(cmds[i], flags[i]);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  for (size_t i = 0; i < std::size(subs); ++i)
    if (cmds[i]->parsed()) return dispatch(subs[i].runner, cmds[i], flags[i]);
  return 2;
}
