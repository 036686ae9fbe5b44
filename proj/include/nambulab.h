#ifndef NAMBULAB_H
#define NAMBULAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define NL_API __declspec(dllexport)
#else
#define NL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Every call returns one of these. Details of the last failure on the
   calling thread are available from nl_last_error(). */
typedef enum nl_status {
    NL_OK = 0,
    NL_CONFIG = 1,     /* bad definition, unknown builtin, bad option */
    NL_PARSE = 2,      /* malformed expression */
    NL_DOMAIN = 3,     /* evaluation left the real domain */
    NL_SINGULAR = 4,   /* |detB| below threshold */
    NL_RELATION = 5,   /* loaded system breaks a vanishing bracket */
    NL_ARGUMENT = 6,   /* null pointer, wrong length, out-of-range index */
    NL_IO = 7,
    NL_INTERNAL = 8
} nl_status;

typedef enum nl_flow_status {
    NL_FLOW_COMPLETED = 0,
    NL_FLOW_DOMAIN_EXIT = 1,
    NL_FLOW_SINGULAR = 2
} nl_flow_status;

typedef struct nl_params nl_params;
typedef struct nl_system nl_system;
typedef struct nl_field nl_field;
typedef struct nl_trajectory nl_trajectory;

NL_API const char* nl_last_error(void);
/* Strings handed out through char** are owned by the caller. */
NL_API void nl_free_string(char* s);

/* parameters: real values by name; "gauge" and "variant" take text */
NL_API nl_params* nl_params_new(void);
NL_API void nl_params_free(nl_params* p);
NL_API nl_status nl_params_set(nl_params* p, const char* name, double value);
NL_API nl_status nl_params_set_text(nl_params* p, const char* name, const char* value);

/* systems */
NL_API nl_status nl_builtin_names(char** json_array);
/* Missing parameters fall back to the builtin defaults. p may be NULL. */
NL_API nl_status nl_system_builtin(const char* name, const nl_params* p, nl_system** out);
NL_API nl_status nl_system_load(const char* path, nl_system** out);
NL_API nl_status nl_system_load_text(const char* json, nl_system** out);
NL_API void nl_system_free(nl_system* s);
NL_API size_t nl_system_dof(const nl_system* s);
NL_API const char* nl_system_name(const nl_system* s);
/* 2n-1 constants: H, H_1.., A_1.. */
NL_API size_t nl_system_constant_count(const nl_system* s);
NL_API const char* nl_system_constant_name(const nl_system* s, size_t k);
NL_API const char* nl_system_coordinate(const nl_system* s, size_t i);
NL_API nl_status nl_system_admissible(const nl_system* s, const double* x, size_t len, int* ok);

/* scalar fields over a system's coordinates and parameters */
NL_API nl_status nl_field_compile(const nl_system* s, const char* text, nl_field** out);
NL_API void nl_field_free(nl_field* f);
NL_API nl_status nl_field_eval(const nl_field* f, const double* x, size_t len, double* value);
/* grad receives len values */
NL_API nl_status nl_field_grad(const nl_field* f, const double* x, size_t len, double* value, double* grad);

/* brackets and tensors */
NL_API nl_status nl_poisson_bracket(const nl_field* f, const nl_field* g, const double* x, size_t len, double* out);
NL_API nl_status nl_det_b(const nl_system* s, const double* x, size_t len, double* out);
/* out receives (2n)^2 entries, row-major */
NL_API nl_status nl_lambda(const nl_system* s, size_t k, const double* x, size_t len, int oracle, double* out);
/* {system, k, point, entries, det, rank, residuals} */
NL_API nl_status nl_tensor_json(const nl_system* s, size_t k, const double* x, size_t len, int oracle, char** json);

/* Verification suite. tol_ids/tol_values override entries of the default
   tolerance table (or single relation records by full id). */
NL_API nl_status nl_verify(const nl_system* s, uint64_t seed, size_t samples, const char* const* tol_ids,
                           const double* tol_values, size_t tol_count, char** report_json, int* failed);
NL_API nl_status nl_default_tolerances(char** json);

/* RK4. k < 0 selects the canonical flow xi_H. */
NL_API nl_status nl_integrate(const nl_system* s, int k, const double* x0, size_t len, double t_final, double dt,
                              nl_trajectory** out);
NL_API void nl_trajectory_free(nl_trajectory* t);
NL_API nl_flow_status nl_trajectory_status(const nl_trajectory* t);
NL_API const char* nl_trajectory_message(const nl_trajectory* t);
NL_API size_t nl_trajectory_length(const nl_trajectory* t);
/* x receives 2n values */
NL_API nl_status nl_trajectory_state(const nl_trajectory* t, size_t i, double* time, double* x);
NL_API nl_status nl_trajectory_csv(const nl_trajectory* t, char** csv);
/* per-constant max relative drift */
NL_API nl_status nl_trajectory_drift_json(const nl_trajectory* t, char** json);

/* temp file + rename */
NL_API nl_status nl_write_file(const char* path, const char* text);

#ifdef __cplusplus
}
#endif

#endif
