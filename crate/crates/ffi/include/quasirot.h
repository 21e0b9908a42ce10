#ifndef QUASIROT_H
#define QUASIROT_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes; the first five match the command-line exit codes.
 */
typedef enum QrStatus {
  QR_STATUS_OK = 0,
  QR_STATUS_VERDICT_FAIL = 1,
  QR_STATUS_INVALID = 2,
  QR_STATUS_QUADRATURE = 3,
  QR_STATUS_IO = 4,
  QR_STATUS_NULL_POINTER = 5,
  QR_STATUS_INVALID_ARGUMENT = 6,
  QR_STATUS_PANIC = 7,
} QrStatus;

typedef enum QrType {
  QR_TYPE_ELLIPTIC = 0,
  QR_TYPE_HYPERBOLIC_A = 1,
  QR_TYPE_HYPERBOLIC_B = 2,
  QR_TYPE_PARABOLIC = 3,
} QrType;

typedef enum QrVerdict {
  QR_VERDICT_QUASI_MINIMAL = 0,
  QR_VERDICT_NOT_QUASI_MINIMAL = 1,
  QR_VERDICT_MINIMAL = 2,
  QR_VERDICT_INVALID = 3,
} QrVerdict;

typedef struct QrCurve QrCurve;

typedef struct QrProfile QrProfile;

typedef struct QrReport QrReport;

/**
 * Integration constants. `has_u0 == 0` means the base point is the left end.
 */
typedef struct QrConstants {
  int has_u0;
  double u0;
  double phi0;
  double offsets[2];
  double c;
} QrConstants;

typedef struct QrSurfaceJet {
  double z[4];
  double first_e;
  double first_f;
  double first_g;
  double gauss;
  double h1;
  double h2;
  double hh;
} QrSurfaceJet;

typedef struct QrReportSummary {
  enum QrVerdict verdict;
  double qm_residual_max;
  double arc_residual_max;
  double consistency_max;
  double gram_deviation_max;
  double min_h_coefficient;
} QrReportSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. Valid until the
 * next call into the library from the same thread.
 */
const char *qr_last_error(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library.
 */
void qr_string_free(char *s);

/**
 * Parses a profile `kind:p1,p2,...` on the domain `[lo, hi]`.
 *
 * # Safety
 * `spec` must be a NUL-terminated string and `out` a valid pointer.
 */
enum QrStatus qr_profile_parse(const char *spec, double lo, double hi, struct QrProfile **out);

/**
 * # Safety
 * `p` must be NULL or a handle from [`qr_profile_parse`].
 */
void qr_profile_free(struct QrProfile *p);

/**
 * Writes `(p, p', p'')` at `u` into `jet[0..3]`.
 *
 * # Safety
 * `p` must be a valid profile handle and `jet` point to 3 doubles.
 */
enum QrStatus qr_profile_eval(const struct QrProfile *p, double u, double *jet);

/**
 * Generates a quasi-minimal generating curve. `constants` may be NULL.
 *
 * # Safety
 * Pointers must be valid; `out` receives a new curve handle.
 */
enum QrStatus qr_curve_generate(enum QrType kind,
                                const struct QrProfile *profile,
                                double a,
                                double b,
                                int eta,
                                const struct QrConstants *constants,
                                size_t n_samples,
                                double tol,
                                struct QrCurve **out);

/**
 * Reads a curve from its JSON form.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum QrStatus qr_curve_from_json(const char *json, struct QrCurve **out);

/**
 * JSON form of a curve; release with [`qr_string_free`].
 *
 * # Safety
 * `c` must be a valid curve handle and `out` a valid pointer.
 */
enum QrStatus qr_curve_to_json(const struct QrCurve *c, char **out);

/**
 * # Safety
 * `c` must be NULL or a curve handle.
 */
void qr_curve_free(struct QrCurve *c);

/**
 * Number of samples, 0 for NULL.
 *
 * # Safety
 * `c` must be NULL or a valid curve handle.
 */
size_t qr_curve_len(const struct QrCurve *c);

/**
 * Sample `k`: parameter, angle and the stored coordinate triple
 * (`x1,x2,r` elliptic, `r,x2,x4` hyperbolic, `x1,f,g` parabolic).
 *
 * # Safety
 * `c` must be a valid handle, `u`/`phi` valid pointers, `coords` 3 doubles.
 */
enum QrStatus qr_curve_node(const struct QrCurve *c,
                            size_t k,
                            double *u,
                            double *phi,
                            double *coords);

/**
 * Surface point `z(u, v)` into `out[0..4]`.
 *
 * # Safety
 * `c` must be a valid handle and `out` point to 4 doubles.
 */
enum QrStatus qr_surface_point(const struct QrCurve *c, double u, double v, double *out);

/**
 * # Safety
 * `c` must be a valid handle and `out` a valid pointer.
 */
enum QrStatus qr_surface_jet(const struct QrCurve *c, double u, double v, struct QrSurfaceJet *out);

/**
 * Verifies a curve. `tol <= 0` uses the curve's own tolerance.
 *
 * # Safety
 * `c` must be a valid handle and `out` a valid pointer.
 */
enum QrStatus qr_verify(const struct QrCurve *c, double tol, struct QrReport **out);

/**
 * # Safety
 * `r` must be a valid report handle and `out` a valid pointer.
 */
enum QrStatus qr_report_summary(const struct QrReport *r, struct QrReportSummary *out);

/**
 * Full report as JSON; release with [`qr_string_free`].
 *
 * # Safety
 * `r` must be a valid report handle and `out` a valid pointer.
 */
enum QrStatus qr_report_to_json(const struct QrReport *r, char **out);

/**
 * # Safety
 * `r` must be NULL or a report handle.
 */
void qr_report_free(struct QrReport *r);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QUASIROT_H */
