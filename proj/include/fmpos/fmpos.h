#ifndef FMPOS_H
#define FMPOS_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Every function returning fmpos_status leaves a human-readable
 * message in fmpos_last_error() on failure. */
typedef enum fmpos_status {
  FMPOS_OK = 0,
  FMPOS_ERR_INVALID_ARGUMENT = 1,
  FMPOS_ERR_DIMENSION_MISMATCH = 2,
  FMPOS_ERR_NON_HERMITIAN = 3,
  FMPOS_ERR_NON_FINITE = 4,
  FMPOS_ERR_NEGATIVE_WEIGHT = 5,
  FMPOS_ERR_NON_PSD_WEIGHT = 6,
  FMPOS_ERR_ATOM_AT_ORIGIN = 7,
  FMPOS_ERR_ATOM_OUT_OF_BOX = 8,
  FMPOS_ERR_UNDER_RESOLVED = 9,
  FMPOS_ERR_UNBOUNDED_SYMBOL = 10,
  FMPOS_ERR_QUADRATURE_FAILURE = 11,
  FMPOS_ERR_CONFIG_INVALID = 12,
  FMPOS_ERR_IO = 13,
  FMPOS_ERR_INTERNAL = 14,
  FMPOS_ERR_BAD_HANDLE = 15
} fmpos_status;

/* Opaque handles. Destroy functions accept NULL. */
typedef struct fmpos_symbol fmpos_symbol;
typedef struct fmpos_field fmpos_field;
typedef struct fmpos_report fmpos_report;

/* Library version string; static storage, do not free. */
const char* fmpos_version(void);

/* Message for the most recent failure on this thread; valid until the next
 * failing call. Static storage, do not free. */
const char* fmpos_last_error(void);

/* Frees any char* output parameter produced by this library. */
void fmpos_string_free(char* s);

/* --- Symbols ---------------------------------------------------------------
 * Built from a JSON spec. Scalar families (gaussian, cos, bochner,
 * levy-khintchine, ...) produce m = 1; matrix families (entries, diagonal,
 * bochner-matrix, example-f0, ...) produce m > 1. */
fmpos_status fmpos_symbol_create(const char* spec_json, fmpos_symbol** out);

/* dim, m and whether a finite sup-norm bound is attached. Any out pointer
 * may be NULL. */
fmpos_status fmpos_symbol_info(const fmpos_symbol* s, int* dim, int* m,
                               int* bounded);

/* Evaluates at x (length dim); writes the m*m value row-major into re and im
 * (each of length m*m). im may be NULL to request the real part only. */
fmpos_status fmpos_symbol_eval(const fmpos_symbol* s, const double* x, int dim,
                               double* re, double* im);

void fmpos_symbol_destroy(fmpos_symbol* s);

/* --- Sampled positivity tests ----------------------------------------------
 * plan_json configures the randomized sampling plan (trials, min_points,
 * max_points, radius, seed, tol, ...); NULL selects the defaults.
 * On return *passed is 0 or 1 and *verdict_json (if non-NULL) receives a JSON
 * verdict with the witness for failures; free it with fmpos_string_free.
 * fmpos_test_cpsd requires a scalar symbol. */
fmpos_status fmpos_test_psd(const fmpos_symbol* s, const char* plan_json,
                            int* passed, char** verdict_json);
fmpos_status fmpos_test_cpsd(const fmpos_symbol* s, const char* plan_json,
                             int* passed, char** verdict_json);

/* --- Grid fields -----------------------------------------------------------
 * Uniform lattice on [-length/2, length/2)^dim with samples points per axis
 * (a power of two >= 8), components complex channels, all initialized to 0. */
fmpos_status fmpos_field_create(int dim, int samples, double length,
                                int components, fmpos_field** out);

/* Builds a field from a JSON field spec (bump-mixture, basis, constant). */
fmpos_status fmpos_field_create_from_spec(const char* field_json, int dim,
                                          int samples, double length,
                                          int components, fmpos_field** out);

fmpos_status fmpos_field_size(const fmpos_field* f, long* points,
                              int* components);

/* Copies one component into re/im, each of length points. im may be NULL. */
fmpos_status fmpos_field_read(const fmpos_field* f, int component, double* re,
                              double* im);

/* Overwrites one component; im NULL means imaginary parts are set to 0. */
fmpos_status fmpos_field_write(fmpos_field* f, int component, const double* re,
                               const double* im);

/* Flat binary container round-trip (magic "MPLB"): header carries dim,
 * components, samples, length; payload is interleaved little-endian re/im. */
fmpos_status fmpos_field_save(const fmpos_field* f, const char* path);
fmpos_status fmpos_field_load(const char* path, fmpos_field** out);

/* CSV of the 1-D slice along axis 0 through the origin of the other axes;
 * free with fmpos_string_free. */
fmpos_status fmpos_field_csv(const fmpos_field* f, char** csv);

void fmpos_field_destroy(fmpos_field* f);

/* --- Fourier multiplier engine ---------------------------------------------
 * The symbol must be bounded and continuous and its m must equal the field's
 * component count. *out is freshly allocated. */
fmpos_status fmpos_apply(const fmpos_symbol* s, const fmpos_field* in,
                         fmpos_field** out);

/* Applies the multiplier to a nonnegative field and checks the output stays
 * nonnegative to the relative tolerance tol. */
fmpos_status fmpos_positivity_trial(const fmpos_symbol* s,
                                    const fmpos_field* in, double tol,
                                    int* passed, char** verdict_json);

/* Kernel total variation, operator mass, lattice sup of the symbol, and a
 * measured L2 ratio, as a JSON object. */
fmpos_status fmpos_norm_report(const fmpos_symbol* s, int dim, int samples,
                               double length, uint64_t seed, int batch,
                               char** report_json);

/* --- Scenario harness ------------------------------------------------------
 * config_json must carry at least {"kind": ...}; defaults fill the rest.
 * The report records every check with per-trial series and witnesses. */
fmpos_status fmpos_scenario_run(const char* config_json, fmpos_report** out);
fmpos_status fmpos_report_passed(const fmpos_report* r, int* passed);
fmpos_status fmpos_report_json(const fmpos_report* r, char** json);
fmpos_status fmpos_report_csv(const fmpos_report* r, char** csv);
void fmpos_report_destroy(fmpos_report* r);

#ifdef __cplusplus
}
#endif

#endif /* FMPOS_H */
