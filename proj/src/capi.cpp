#include "ttinv.h"

#include <cstring>
#include <string>

#include "ttinv/hadamard_inverse.hpp"
#include "ttinv/io.hpp"
#include "ttinv/runner.hpp"
#include "ttinv/tt_algebra.hpp"

using namespace ttinv;

struct ttinv_tensor {
  TTTensor value;
};

struct ttinv_report {
  std::string json;
};

namespace {

thread_local std::string g_last_error;

int code_of(const Error& e) {
  switch (e.code()) {
    case ErrorCode::argument: return TTINV_ERR_ARGUMENT;
    case ErrorCode::bounds: return TTINV_ERR_BOUNDS;
    case ErrorCode::size_cap: return TTINV_ERR_RESOURCE;
    case ErrorCode::numeric:
    case ErrorCode::diagonalization: return TTINV_ERR_NUMERIC;
    case ErrorCode::state: return TTINV_ERR_STATE;
    case ErrorCode::regime: return TTINV_ERR_ARGUMENT;
    case ErrorCode::io: return TTINV_ERR_IO;
  }
  return TTINV_ERR_INTERNAL;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    return TTINV_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return code_of(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return TTINV_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return TTINV_ERR_INTERNAL;
  }
}

int require_handle(const void* p, const char* what) {
  if (p) return TTINV_OK;
  g_last_error = std::string(what) + ": null handle";
  return TTINV_ERR_ARGUMENT;
}

int run_command(std::string (*runner)(const std::string&, const std::string&),
                const char* config_json, const char* out_dir, ttinv_report** out) {
  if (int rc = require_handle(out_dir, "out_dir")) return rc;
  return guarded([&] {
    const std::string text = runner(config_json ? config_json : "", out_dir);
    if (out) *out = new ttinv_report{text};
  });
}

}  // namespace

extern "C" {

const char* ttinv_version(void) { return "0.1.0"; }

const char* ttinv_last_error(void) { return g_last_error.c_str(); }

int ttinv_tensor_create(const int64_t* modes, int64_t order, const int64_t* ranks,
                        const double* data, ttinv_tensor** out) {
  if (int rc = require_handle(modes, "modes")) return rc;
  if (int rc = require_handle(ranks, "ranks")) return rc;
  if (int rc = require_handle(data, "data")) return rc;
  if (int rc = require_handle(out, "out")) return rc;
  return guarded([&] {
    require(order >= 1, ErrorCode::argument, "tensor_create: order must be at least 1");
    std::vector<TTCore> cores;
    size_t off = 0;
    for (int64_t k = 0; k < order; ++k) {
      TTCore c(ranks[k], modes[k], ranks[k + 1]);
      for (auto& z : c.data) {
        z = Complex(data[off], data[off + 1]);
        off += 2;
      }
      cores.push_back(std::move(c));
    }
    *out = new ttinv_tensor{TTTensor(std::move(cores))};
  });
}

int ttinv_tensor_load(const char* path, ttinv_tensor** out) {
  if (int rc = require_handle(path, "path")) return rc;
  if (int rc = require_handle(out, "out")) return rc;
  return guarded([&] { *out = new ttinv_tensor{load_tt(path)}; });
}

int ttinv_tensor_save(const ttinv_tensor* t, const char* path) {
  if (int rc = require_handle(t, "tensor")) return rc;
  if (int rc = require_handle(path, "path")) return rc;
  return guarded([&] { save_tt(t->value, path); });
}

int ttinv_tensor_order(const ttinv_tensor* t, int64_t* out) {
  if (int rc = require_handle(t, "tensor")) return rc;
  if (int rc = require_handle(out, "out")) return rc;
  *out = t->value.order();
  return TTINV_OK;
}

int ttinv_tensor_mode_sizes(const ttinv_tensor* t, int64_t* out) {
  if (int rc = require_handle(t, "tensor")) return rc;
  if (int rc = require_handle(out, "out")) return rc;
  const auto m = t->value.mode_sizes();
  std::memcpy(out, m.data(), m.size() * sizeof(int64_t));
  return TTINV_OK;
}

int ttinv_tensor_ranks(const ttinv_tensor* t, int64_t* out) {
  if (int rc = require_handle(t, "tensor")) return rc;
  if (int rc = require_handle(out, "out")) return rc;
  const auto r = t->value.ranks();
  std::memcpy(out, r.data(), r.size() * sizeof(int64_t));
  return TTINV_OK;
}

int ttinv_tensor_element(const ttinv_tensor* t, const int64_t* idx, double* re, double* im) {
  if (int rc = require_handle(t, "tensor")) return rc;
  if (int rc = require_handle(idx, "idx")) return rc;
  return guarded([&] {
    const std::vector<Index> v(idx, idx + t->value.order());
    const Complex z = element(t->value, v);
    if (re) *re = z.real();
    if (im) *im = z.imag();
  });
}

int ttinv_tensor_norm(const ttinv_tensor* t, double* out) {
  if (int rc = require_handle(t, "tensor")) return rc;
  if (int rc = require_handle(out, "out")) return rc;
  return guarded([&] { *out = frobenius_norm(t->value); });
}

int ttinv_tensor_add(const ttinv_tensor* a, const ttinv_tensor* b, ttinv_tensor** out) {
  if (int rc = require_handle(a, "a")) return rc;
  if (int rc = require_handle(b, "b")) return rc;
  if (int rc = require_handle(out, "out")) return rc;
  return guarded([&] { *out = new ttinv_tensor{add(a->value, b->value)}; });
}

int ttinv_tensor_scale(const ttinv_tensor* a, double re, double im, ttinv_tensor** out) {
  if (int rc = require_handle(a, "a")) return rc;
  if (int rc = require_handle(out, "out")) return rc;
  return guarded([&] { *out = new ttinv_tensor{scale(a->value, Complex(re, im))}; });
}

int ttinv_tensor_hadamard(const ttinv_tensor* a, const ttinv_tensor* b, ttinv_tensor** out) {
  if (int rc = require_handle(a, "a")) return rc;
  if (int rc = require_handle(b, "b")) return rc;
  if (int rc = require_handle(out, "out")) return rc;
  return guarded([&] { *out = new ttinv_tensor{hadamard(a->value, b->value)}; });
}

int ttinv_tensor_round(const ttinv_tensor* a, double eps, int64_t max_rank, ttinv_tensor** out) {
  if (int rc = require_handle(a, "a")) return rc;
  if (int rc = require_handle(out, "out")) return rc;
  return guarded([&] {
    std::optional<Index> cap;
    if (max_rank > 0) cap = max_rank;
    *out = new ttinv_tensor{round(a->value, eps, cap)};
  });
}

int ttinv_tensor_hadamard_inverse(const ttinv_tensor* l, double tol, double round_eps,
                                  int64_t max_rank, ttinv_tensor** out, ttinv_report** report) {
  if (int rc = require_handle(l, "l")) return rc;
  if (int rc = require_handle(out, "out")) return rc;
  return guarded([&] {
    InversionConfig cfg;
    cfg.tol = tol;
    cfg.round_eps = round_eps;
    if (max_rank > 0) cfg.max_rank = max_rank;
    auto [x, rep] = hadamard_inverse(l->value, cfg);
    if (report) {
      std::string text = "{\n \"iterations\": " + std::to_string(rep.iterations) +
                         ",\n \"converged\": " + (rep.converged ? "true" : "false") +
                         ",\n \"cap_hit\": " + (rep.cap_hit ? "true" : "false") +
                         ",\n \"residual_history\": [";
      for (size_t i = 0; i < rep.residual_history.size(); ++i) {
        if (i) text += ", ";
        text += std::to_string(rep.residual_history[i]);
      }
      text += "]\n}\n";
      *report = new ttinv_report{std::move(text)};
    }
    require(rep.converged, ErrorCode::numeric,
            "hadamard_inverse: Newton iteration did not converge");
    *out = new ttinv_tensor{std::move(x)};
  });
}

void ttinv_tensor_release(ttinv_tensor* t) { delete t; }

int ttinv_run_invert(const char* config_json, const char* out_dir, ttinv_report** out) {
  return run_command(&run_invert, config_json, out_dir, out);
}

int ttinv_run_solve(const char* config_json, const char* out_dir, ttinv_report** out) {
  return run_command(&run_solve, config_json, out_dir, out);
}

int ttinv_run_certify(const char* config_json, const char* out_dir, ttinv_report** out) {
  return run_command(&run_certify, config_json, out_dir, out);
}

int ttinv_run_svd_decay(const char* config_json, const char* out_dir, ttinv_report** out) {
  return run_command(&run_svd_decay, config_json, out_dir, out);
}

int ttinv_run_roundtrip(const char* config_json, const char* out_dir, ttinv_report** out) {
  return run_command(&run_roundtrip, config_json, out_dir, out);
}

const char* ttinv_report_json(const ttinv_report* r) { return r ? r->json.c_str() : ""; }

void ttinv_report_release(ttinv_report* r) { delete r; }

int ttinv_exit_code(int status) {
  switch (status) {
    case TTINV_OK: return 0;
    case TTINV_ERR_NUMERIC: return 3;
    case TTINV_ERR_RESOURCE: return 4;
    default: return 2;
  }
}

}  // extern "C"
