#ifndef GMHD_H
#define GMHD_H

#include <stdint.h>
#include <stddef.h>

typedef enum GmhdStatus {
  GMHD_STATUS_OK = 0,
  GMHD_STATUS_NULL_POINTER = 1,
  GMHD_STATUS_INVALID_ARGUMENT = 2,
  GMHD_STATUS_GRID = 3,
  GMHD_STATUS_GRID_TOO_SMALL = 4,
  GMHD_STATUS_MALFORMED_FIELD = 5,
  GMHD_STATUS_PRECONDITION = 6,
  GMHD_STATUS_DOMAIN = 7,
  GMHD_STATUS_INFEASIBLE = 8,
  GMHD_STATUS_UNSUPPORTED = 9,
  GMHD_STATUS_INCONSISTENT = 10,
  GMHD_STATUS_BLOW_UP = 11,
  GMHD_STATUS_CONFIG = 12,
  GMHD_STATUS_IO = 13,
  GMHD_STATUS_PANIC = 14,
} GmhdStatus;

// Opaque construction parameters.
typedef struct GmhdParams GmhdParams;

// Opaque result of one run.
typedef struct GmhdReport GmhdReport;

// Plain copy of the parameter values.
typedef struct GmhdParamValues {
  double alpha1;
  double alpha2;
  double epsilon;
  uint32_t r;
  double beta1;
  double beta2;
  double theta1;
  double theta2;
  double gamma;
  double zeta;
  // `K`, saturated to the `int64_t` range.
  int64_t k_base;
  double t_final;
  double delta;
  double predicted_exponent;
} GmhdParamValues;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failing call on this thread, or null. The pointer
// stays valid until the next failing call on the same thread.
const char *gmhd_last_error(void);

// Library version as a static NUL-terminated string.
const char *gmhd_version(void);

// Derives the default feasible parameters. Pass NaN for `theta1` to use
// the default choice.
//
// # Safety
// `out` must be a valid pointer to writable storage for one handle.
enum GmhdStatus gmhd_params_derive(double alpha1,
                                   double alpha2,
                                   double epsilon,
                                   uint32_t r,
                                   double theta1,
                                   struct GmhdParams **out);

// # Safety
// `p` must be null or a handle from [`gmhd_params_derive`] not yet freed.
void gmhd_params_free(struct GmhdParams *p);

// # Safety
// `p` must be a live handle and `out` valid for writes.
enum GmhdStatus gmhd_params_values(const struct GmhdParams *p, struct GmhdParamValues *out);

// Closed-form `‖b₁₀(t)‖` in `Ḃ^{-s}_{∞,∞}` (caloric power α₂).
//
// # Safety
// `p` must be a live handle and `out` valid for writes.
enum GmhdStatus gmhd_b10_besov(const struct GmhdParams *p, double t, double s, double *out);

// `p^p e^{-p} κ^{-s}` with `p = s/(2α)`; NaN outside `κ, s, α > 0`.
double gmhd_plane_wave_besov(double kappa, double s, double alpha);

// Runs one experiment described by a JSON config (same keys as the CLI
// config file; missing keys take their defaults).
//
// # Safety
// `config_json` must be a NUL-terminated string and `out` valid for writes.
enum GmhdStatus gmhd_run(const char *config_json, struct GmhdReport **out);

// # Safety
// `r` must be null or a handle from [`gmhd_run`] not yet freed.
void gmhd_report_free(struct GmhdReport *r);

// Full report as JSON, owned by the handle.
//
// # Safety
// `r` must be a live handle.
const char *gmhd_report_json(const struct GmhdReport *r);

// Number of tracked Besov indices.
//
// # Safety
// `r` must be a live handle.
uintptr_t gmhd_report_index_count(const struct GmhdReport *r);

// `s`, `‖b(0)‖`, `‖b(T)‖` and their ratio for index `i`.
//
// # Safety
// `r` must be a live handle; each output pointer must be valid or null.
enum GmhdStatus gmhd_report_index(const struct GmhdReport *r,
                                  uintptr_t i,
                                  double *s,
                                  double *b_initial,
                                  double *b_final,
                                  double *inflation_factor);

// Runs the verification suite; `passed` receives 1 if every check
// passed. When some check fails, [`gmhd_last_error`] holds the failing
// check names, one per line.
//
// # Safety
// `config_json` must be a NUL-terminated string and `passed` valid.
enum GmhdStatus gmhd_verify(const char *config_json, int32_t *passed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GMHD_H */
