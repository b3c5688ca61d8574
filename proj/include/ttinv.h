/* ttinv — tensor-train inversion of Kronecker-sum operators.
 *
 * C interface to the shared library. All objects are opaque handles
 * created and released through these functions; every call returns a
 * status code (TTINV_OK on success) and leaves a human-readable message
 * for the calling thread in ttinv_last_error() on failure.
 *
 * Tensor indices are 1-based, matching the usual tensor notation.
 * Complex buffers interleave re/im doubles in row-major core order
 * (r_{k-1}, n_k, r_k), the same layout the .ttj files use.
 */

#ifndef TTINV_H
#define TTINV_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define TTINV_API __declspec(dllexport)
#else
#define TTINV_API __attribute__((visibility("default")))
#endif

/* status codes; nonzero values group into the CLI exit classes */
enum {
  TTINV_OK = 0,
  TTINV_ERR_ARGUMENT = 1, /* bad arguments, shapes, config keys */
  TTINV_ERR_BOUNDS = 2,   /* index out of range */
  TTINV_ERR_NUMERIC = 3,  /* divergence, NaN, defective pencil */
  TTINV_ERR_RESOURCE = 4, /* dense cap or enumeration budget exceeded */
  TTINV_ERR_IO = 5,       /* file or format problem */
  TTINV_ERR_STATE = 6,    /* operation invalid for the object state */
  TTINV_ERR_INTERNAL = 7
};

typedef struct ttinv_tensor ttinv_tensor;
typedef struct ttinv_report ttinv_report;

TTINV_API const char* ttinv_version(void);

/* Message for the last failing call on this thread; never NULL. */
TTINV_API const char* ttinv_last_error(void);

/* ---- TT tensors ------------------------------------------------------- */

/* Create from explicit cores: modes has length `order`, ranks length
 * order+1 (ranks[0] = ranks[order] = 1), data holds the concatenated
 * cores as interleaved re/im doubles. */
TTINV_API int ttinv_tensor_create(const int64_t* modes, int64_t order, const int64_t* ranks,
                                  const double* data, ttinv_tensor** out);

TTINV_API int ttinv_tensor_load(const char* path, ttinv_tensor** out);
TTINV_API int ttinv_tensor_save(const ttinv_tensor* t, const char* path);

TTINV_API int ttinv_tensor_order(const ttinv_tensor* t, int64_t* out);
TTINV_API int ttinv_tensor_mode_sizes(const ttinv_tensor* t, int64_t* out);
TTINV_API int ttinv_tensor_ranks(const ttinv_tensor* t, int64_t* out);

/* idx is 1-based with one entry per mode. */
TTINV_API int ttinv_tensor_element(const ttinv_tensor* t, const int64_t* idx, double* re,
                                   double* im);
TTINV_API int ttinv_tensor_norm(const ttinv_tensor* t, double* out);

TTINV_API int ttinv_tensor_add(const ttinv_tensor* a, const ttinv_tensor* b, ttinv_tensor** out);
TTINV_API int ttinv_tensor_scale(const ttinv_tensor* a, double re, double im, ttinv_tensor** out);
TTINV_API int ttinv_tensor_hadamard(const ttinv_tensor* a, const ttinv_tensor* b,
                                    ttinv_tensor** out);

/* TT-rounding at relative accuracy eps; max_rank = 0 disables the cap. */
TTINV_API int ttinv_tensor_round(const ttinv_tensor* a, double eps, int64_t max_rank,
                                 ttinv_tensor** out);

/* Newton Hadamard inverse of a TT tensor with no zero entries. The
 * optional report (pass NULL to skip) carries the iteration metrics as
 * JSON. Non-convergence returns TTINV_ERR_NUMERIC. */
TTINV_API int ttinv_tensor_hadamard_inverse(const ttinv_tensor* l, double tol, double round_eps,
                                            int64_t max_rank, ttinv_tensor** out,
                                            ttinv_report** report);

TTINV_API void ttinv_tensor_release(ttinv_tensor* t);

/* ---- command runners --------------------------------------------------- */

/* config_json uses the documented CLI configuration schema; output files
 * are written under out_dir and listed in the report. */
TTINV_API int ttinv_run_invert(const char* config_json, const char* out_dir, ttinv_report** out);
TTINV_API int ttinv_run_solve(const char* config_json, const char* out_dir, ttinv_report** out);
TTINV_API int ttinv_run_certify(const char* config_json, const char* out_dir, ttinv_report** out);
TTINV_API int ttinv_run_svd_decay(const char* config_json, const char* out_dir,
                                  ttinv_report** out);
TTINV_API int ttinv_run_roundtrip(const char* config_json, const char* out_dir,
                                  ttinv_report** out);

/* The report document as JSON text; owned by the report handle. */
TTINV_API const char* ttinv_report_json(const ttinv_report* r);
TTINV_API void ttinv_report_release(ttinv_report* r);

/* Map a status code to the scripting exit class: 0 ok, 2 usage,
 * 3 numeric failure, 4 resource cap. */
TTINV_API int ttinv_exit_code(int status);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* TTINV_H */
