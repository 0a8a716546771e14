/*
 * musielak: numerics for Musielak-Orlicz function spaces on grid-discretized
 * boxes. Phi-function families M(x,t), modulars and Luxemburg norms, Young
 * conjugation, structural-condition checkers, and Poincare-type inequality
 * verification.
 *
 * All functions return mo_status; results travel through out-parameters.
 * Objects are opaque handles freed by their mo_*_free function. Structured
 * reports are returned as JSON strings owned by the caller (release with
 * mo_string_free). Error details for the calling thread are available via
 * mo_last_error_message().
 *
 * Handles are immutable after creation and safe to share across threads.
 */
#ifndef MUSIELAK_H
#define MUSIELAK_H

#include <stddef.h>

#if defined(_WIN32)
#define MO_API __declspec(dllexport)
#else
#define MO_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mo_status {
  MO_OK = 0,
  MO_ERR_INVALID_ARGUMENT = 1,
  MO_ERR_DOMAIN = 2,           /* point outside a field/grid domain, grid mismatch */
  MO_ERR_RANGE = 3,            /* evaluation overflow */
  MO_ERR_GEOMETRY = 4,         /* support escapes the domain box */
  MO_ERR_UNSUPPORTED_ORDER = 5,
  MO_ERR_NO_CONVERGENCE = 6,
  MO_ERR_CONFIG = 7,
  MO_ERR_IO = 8,
  MO_ERR_INTERNAL = 9
} mo_status;

typedef struct mo_phi mo_phi;
typedef struct mo_domain mo_domain;
typedef struct mo_grid_function mo_grid_function;

typedef struct mo_norm_result {
  double value;
  double bracket_lo;
  double bracket_hi;
  double modular_at_value;
  int iterations;
} mo_norm_result;

typedef struct mo_conjugate_result {
  double value;
  double argmax;
  double bracket_width;
} mo_conjugate_result;

MO_API const char* mo_version(void);
/* Message for the most recent failure on this thread ("" if none). */
MO_API const char* mo_last_error_message(void);
MO_API void mo_string_free(char* s);

/* ---- Phi-functions -------------------------------------------------- */

/* spec_json: {"family":"power_variable","p":{...}} etc.; see README.
 * dom supplies the box over which field bounds (affine p, weights) are
 * inferred; may be NULL when every field is constant or carries its own
 * bounds. */
MO_API mo_status mo_phi_create_json(const char* spec_json, const mo_domain* dom, mo_phi** out);
/* x-independent Orlicz function from a user callback t -> M(t). */
MO_API mo_status mo_phi_create_custom(double (*eval)(double t, void* ctx), void* ctx, mo_phi** out);
MO_API void mo_phi_free(mo_phi* phi);

/* M(x,t); dim is the length of x. */
MO_API mo_status mo_phi_evaluate(const mo_phi* phi, const double* x, int dim, double t, double* out);
/* Defining-property validation; options_json may be NULL. */
MO_API mo_status mo_phi_validate(const mo_phi* phi, const double* sample_points, int n_points, int dim,
                                 const char* options_json, char** report_json);

/* ---- Domains and grid functions ------------------------------------- */

MO_API mo_status mo_domain_create(int dim, const double* lower, const double* upper, const int* nodes,
                                  mo_domain** out);
MO_API void mo_domain_free(mo_domain* dom);
MO_API mo_status mo_domain_diameter(const mo_domain* dom, double* out);
MO_API mo_status mo_domain_num_nodes(const mo_domain* dom, size_t* out);

/* kind: "smooth_exp" or "poly" (poly uses exponent poly_k). */
MO_API mo_status mo_grid_function_make_bump(const mo_domain* dom, const double* center, const double* widths,
                                            const char* kind, int poly_k, mo_grid_function** out);
/* prod_a sin(pi (x_a - lo_a)/(hi_a - lo_a)). */
MO_API mo_status mo_grid_function_make_sine(const mo_domain* dom, mo_grid_function** out);
MO_API mo_status mo_grid_function_make_constant(const mo_domain* dom, double value, mo_grid_function** out);
/* Nodal values in lexicographic order (length = node count). */
MO_API mo_status mo_grid_function_from_values(const mo_domain* dom, const double* values, size_t count,
                                              mo_grid_function** out);
MO_API void mo_grid_function_free(mo_grid_function* u);

MO_API mo_status mo_grid_function_values(const mo_grid_function* u, double* buffer, size_t capacity);
MO_API mo_status mo_grid_function_derivative(const mo_grid_function* u, const int* alpha, int dim,
                                             mo_grid_function** out);
MO_API mo_status mo_grid_function_scale(const mo_grid_function* u, double s, mo_grid_function** out);
MO_API mo_status mo_grid_function_mollify(const mo_grid_function* u, double epsilon, const double* shift,
                                          mo_grid_function** out);
MO_API mo_status mo_grid_function_export_csv(const mo_grid_function* u, const char* path);

/* ---- Modulars and norms ---------------------------------------------- */

/* integral of M(x, c|u|); c = 1 gives the plain modular. */
MO_API mo_status mo_modular(const mo_phi* phi, const mo_grid_function* u, double c, double* out);
MO_API mo_status mo_modular_gap(const mo_phi* phi, const mo_grid_function* u, const mo_grid_function* v,
                                double lambda, double* out);
MO_API mo_status mo_luxemburg_norm(const mo_phi* phi, const mo_grid_function* u, double tol,
                                   mo_norm_result* out);
MO_API mo_status mo_sobolev_norm(const mo_phi* phi, const mo_grid_function* u, int m, double tol,
                                 mo_norm_result* out);

/* ---- Young conjugation ----------------------------------------------- */

MO_API mo_status mo_conjugate(const mo_phi* phi, const double* x, int dim, double s, double tol,
                              mo_conjugate_result* out);
/* Arrays xs (n*dim), us (n), vs (n): checks u v <= M(x,u) + M*(x,v). */
MO_API mo_status mo_young_check(const mo_phi* phi, const double* xs, const double* us, const double* vs, int n,
                                int dim, double tol, char** report_json);
MO_API mo_status mo_holder_check(const mo_phi* phi, const mo_grid_function* u, const mo_grid_function* v,
                                 double tol, char** report_json);
MO_API mo_status mo_biconjugate_audit(const mo_phi* phi, const double* x, int dim, double t, double tol,
                                      char** report_json);

/* ---- Structural conditions ------------------------------------------- */

/* params_json: {"varphi":{"kind":"constant_one"|"log_holder","C0":..},"c":..,
 *               "seed":..}; NULL for defaults. */
MO_API mo_status mo_check_m1(const mo_phi* phi, const mo_domain* dom, const char* params_json,
                             char** report_json);
/* Custom comparison function phi(tau, s). */
MO_API mo_status mo_check_m1_callback(const mo_phi* phi, const mo_domain* dom,
                                      double (*varphi)(double tau, double s, void* ctx), void* ctx, double c,
                                      char** report_json);
MO_API mo_status mo_check_log_holder(const mo_phi* phi, const mo_domain* dom, double C0, char** report_json);
/* t0 may be NULL (searched); params_json may be NULL. */
MO_API mo_status mo_check_y(const mo_phi* phi, const mo_domain* dom, int axis, double segment_a, double segment_b,
                            const double* t0, const char* params_json, char** report_json);
MO_API mo_status mo_check_local_integrability(const mo_phi* phi, const mo_domain* dom, double c,
                                              const double* k_lo, const double* k_hi, int dim,
                                              char** report_json);

/* ---- Poincare-type inequalities -------------------------------------- */

MO_API mo_status mo_poincare_constant(const mo_domain* dom, int m, double* out);
/* c_override may be NULL (defaults to the domain constant). */
MO_API mo_status mo_verify_modular_poincare(const mo_phi* phi, const mo_grid_function* u, int m,
                                            const double* c_override, double tol, char** report_json);
MO_API mo_status mo_verify_norm_poincare(const mo_phi* phi, const mo_grid_function* u, int m, double tol,
                                         char** report_json);
/* params_json: {"c":..,"scalings":[..],"bumps":"default"}; NULL for defaults. */
MO_API mo_status mo_counterexample_search(const mo_phi* phi, const mo_domain* dom, const char* params_json,
                                          char** report_json);
/* params_json: {"m":1,"norm":true,"threads":0,...}; NULL for defaults. */
MO_API mo_status mo_sweep(const mo_phi* const* phis, int n_phis, const mo_domain* dom, const char* params_json,
                          char** report_json);

/* ---- Batch runner ----------------------------------------------------- */

/* Executes a full run config (see README for the schema). exit_code follows
 * the CLI convention: 0 all pass, 1 theorem-check failure, 2 config or
 * evaluation error. options_json: {"out_dir":"...","threads":N,
 * "tolerance":x,"seed":N,"stamp":true}; NULL for defaults. */
MO_API mo_status mo_run_config(const char* config_json, const char* options_json, int* exit_code,
                               char** summary_json);
MO_API mo_status mo_describe_config(const char* config_json, char** text);

#ifdef __cplusplus
}
#endif

#endif /* MUSIELAK_H */
