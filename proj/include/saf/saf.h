#pragma once

/*
 * C interface to the self-adjoint extension library.
 *
 * Every function returns a saf_status; on failure saf_last_error() holds a
 * thread-local message. Handles are opaque and released with the matching
 * *_destroy function. Arrays and strings returned through out-parameters are
 * allocated by the library and released with saf_free.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SAF_API __declspec(dllexport)
#else
#define SAF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum saf_status {
    SAF_OK = 0,
    SAF_POLE_AT_ATOM = 1,
    SAF_DEGENERATE_VALUE = 2,
    SAF_NON_CONVERGENT = 3,
    SAF_NOT_HERMITIAN = 4,
    SAF_DEPENDENT_FUNCTIONALS = 5,
    SAF_DIMENSION_MISMATCH = 6,
    SAF_SHOOTING_BLOWUP = 7,
    SAF_CHARACTERISTIC_ZERO = 8,
    SAF_INVALID_DATA = 9,
    SAF_NEAR_EIGENVALUE = 10,
    SAF_ATOM_IN_WINDOW = 11,
    SAF_ATOM_COLLISION = 12,
    SAF_CONFIG_ERROR = 13,
    SAF_INTERNAL = 99
} saf_status;

typedef struct saf_herglotz saf_herglotz;
typedef struct saf_model saf_model;
typedef struct saf_assembly saf_assembly;
typedef struct saf_report saf_report;

/* Right-hand side x(t) on [0,1]. */
typedef void (*saf_function)(double t, void* user, double* re, double* im);

SAF_API const char* saf_version(void);
SAF_API const char* saf_last_error(void);
SAF_API const char* saf_status_name(saf_status status);
SAF_API void saf_free(void* p);

/* Complex literals "a+bi"; formatting gives the shortest round-tripping digits
   and drops an exactly zero imaginary part. */
SAF_API saf_status saf_parse_complex(const char* text, double* re, double* im);
SAF_API saf_status saf_format_complex(double re, double im, char** out);

/* Herglotz data f(λ) = h0·λ + h + Σ w_j (1/(t_j − λ) − t_j/(1 + t_j²)). */
SAF_API saf_status saf_herglotz_create(double h0, double h, const double* positions, const double* weights,
                                       size_t count, saf_herglotz** out);
SAF_API saf_status saf_herglotz_infinity(saf_herglotz** out);
/* "inf", "h0=..,h=..,atoms=[[t,w],..]", a JSON object, or a JSON file path. */
SAF_API saf_status saf_herglotz_parse(const char* spec, saf_herglotz** out);
SAF_API void saf_herglotz_destroy(saf_herglotz* fd);
SAF_API saf_status saf_herglotz_to_json(const saf_herglotz* fd, char** out);
SAF_API saf_status saf_herglotz_eval(const saf_herglotz* fd, double re, double im, double* out_re, double* out_im,
                                     int* out_infinite);
SAF_API saf_status saf_herglotz_asymptotics(const saf_herglotz* fd, double* h0, double* h);
/* Recovers atoms of fd in [lo, hi] from Im f near the real axis. */
SAF_API saf_status saf_herglotz_invert(const saf_herglotz* fd, double lo, double hi, double** positions,
                                       double** weights, size_t* count);

/* ω = (f − i)/(f + i); infinite f maps to ω = 1. */
SAF_API saf_status saf_cayley_f_to_omega(double f_re, double f_im, int f_infinite, double* w_re, double* w_im);
SAF_API saf_status saf_cayley_omega_to_f(double w_re, double w_im, double* f_re, double* f_im, int* f_infinite);

/* Model from a descriptor {"model": "first_order"|"sturm_liouville", "n": .., "q": ..}. */
SAF_API saf_status saf_model_create(const char* descriptor_json, saf_model** out);
SAF_API void saf_model_destroy(saf_model* model);

typedef struct saf_resolvent_result {
    double c_re;
    double c_im;
    double residual_ode;
    double residual_bc;
} saf_resolvent_result;

/* y = R_f(λ)x; nodes and values (re/im) of y on the model grid are optional. */
SAF_API saf_status saf_resolvent(const saf_model* model, const saf_herglotz* fd, double lambda_re, double lambda_im,
                                 saf_function x, void* user, saf_resolvent_result* out, double** nodes,
                                 double** y_re, double** y_im, size_t* count);

/* Real roots of the characteristic function in [lo, hi]. */
SAF_API saf_status saf_char_roots(const saf_model* model, const saf_herglotz* fd, double lo, double hi, double tol,
                                  double** roots, size_t* count);

/* Extension pencil for a Sturm–Liouville model's potential. */
SAF_API saf_status saf_assembly_create(const saf_model* sl_model, const saf_herglotz* fd, int n_mesh,
                                       saf_assembly** out);
SAF_API void saf_assembly_destroy(saf_assembly* assembly);
SAF_API saf_status saf_assembly_layout(const saf_assembly* assembly, int* n_base, int* m, int* aug);
SAF_API saf_status saf_assembly_eigs(const saf_assembly* assembly, double lo, double hi, double** eigenvalues,
                                     double** residuals, size_t* count);
/* Base block of (Ã − λ)⁻¹(x, 0, 0) at the mesh nodes 0..N. */
SAF_API saf_status saf_assembly_resolve(const saf_assembly* assembly, double lambda_re, double lambda_im,
                                        saf_function x, void* user, double** base_re, double** base_im,
                                        size_t* count);
SAF_API saf_status saf_assembly_compression(const saf_assembly* assembly, const saf_model* sl_model,
                                            double lambda_re, double lambda_im, saf_function x, void* user,
                                            double* distance);
/* Rank of the resolvent images of the mesh hat functions at the given λ. */
SAF_API saf_status saf_assembly_minimality(const saf_assembly* assembly, const double* lambda_re,
                                           const double* lambda_im, size_t count, int* rank, int* total);
/* Writes <prefix>_K.mtx, <prefix>_M.mtx and <prefix>.json. */
SAF_API saf_status saf_assembly_export(const saf_assembly* assembly, const char* prefix);

/* Verification suite. config_json may be NULL for the defaults; seed_override
   replaces the config seed when has_seed_override is nonzero. */
SAF_API saf_status saf_verify_run(const char* config_json, int has_seed_override, uint64_t seed_override,
                                  const char* inject_defect, saf_report** out);
SAF_API void saf_report_destroy(saf_report* report);
SAF_API int saf_report_pass(const saf_report* report);
SAF_API saf_status saf_report_text(const saf_report* report, char** out);
SAF_API saf_status saf_report_json(const saf_report* report, char** out);
SAF_API saf_status saf_report_csv(const saf_report* report, char** out);

#ifdef __cplusplus
}
#endif
