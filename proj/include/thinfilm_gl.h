#ifndef THINFILM_GL_H
#define THINFILM_GL_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define TFGL_API __declspec(dllexport)
#else
#define TFGL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Values other than TFGL_OK leave output handles untouched;
   tfgl_last_error() then describes the failure on the calling thread. */
typedef enum tfgl_status {
  TFGL_OK = 0,
  TFGL_INVALID_ARGUMENT = 1,
  TFGL_INVALID_THICKNESS = 2,
  TFGL_INVALID_CONFIG = 3,
  TFGL_PARSE_ERROR = 4,
  TFGL_SOLVER_FAILURE = 5,
  TFGL_EMPTY_LAMBDA = 6,
  TFGL_UNDEFINED_CRITICAL_FIELD = 7,
  TFGL_INVALID_HYPOTHESIS = 8,
  TFGL_DEGENERATE_PLAQUETTE = 9,
  TFGL_SINGULAR_EVALUATION = 10,
  TFGL_OUT_OF_DOMAIN = 11,
  TFGL_IO_ERROR = 12,
  TFGL_INTERNAL_ERROR = 99
} tfgl_status;

typedef struct tfgl_config tfgl_config;
typedef struct tfgl_result tfgl_result;
typedef struct tfgl_xi tfgl_xi;

TFGL_API const char* tfgl_version(void);
TFGL_API const char* tfgl_status_name(tfgl_status status);
TFGL_API const char* tfgl_last_error(void);

/* Configuration. */
TFGL_API tfgl_status tfgl_config_default(tfgl_config** out);
TFGL_API tfgl_status tfgl_config_preset(const char* name, tfgl_config** out);
TFGL_API tfgl_status tfgl_config_load(const char* path, tfgl_config** out);
TFGL_API tfgl_status tfgl_config_parse(const char* text, tfgl_config** out);
/* Applies a config file on top of cfg (e.g. user overrides of a preset). */
TFGL_API tfgl_status tfgl_config_merge_file(tfgl_config* cfg, const char* path);
/* Overrides one key with a literal in config syntax, e.g. ("domain.n", "65"). */
TFGL_API tfgl_status tfgl_config_set(tfgl_config* cfg, const char* key, const char* literal);
/* Copies the canonical config text into buf (NUL-terminated, truncated to
   cap); *needed receives the full size including the terminator. */
TFGL_API tfgl_status tfgl_config_to_toml(const tfgl_config* cfg, char* buf, size_t cap,
                                         size_t* needed);
TFGL_API void tfgl_config_free(tfgl_config* cfg);

/* Commands. Each writes its artefacts into out_dir and returns a result
   carrying a JSON summary and the overall verdict. */
TFGL_API tfgl_status tfgl_run_solve_xi(const tfgl_config* cfg, const char* out_dir,
                                       tfgl_result** out);
TFGL_API tfgl_status tfgl_run_minimize(const tfgl_config* cfg, uint64_t seed,
                                       const char* out_dir, tfgl_result** out);
TFGL_API tfgl_status tfgl_run_gamma_check(const tfgl_config* cfg, const char* regime,
                                          const char* out_dir, tfgl_result** out);
TFGL_API tfgl_status tfgl_run_equilibrium(const tfgl_config* cfg, const char* out_dir,
                                          tfgl_result** out);
TFGL_API tfgl_status tfgl_run_preset(const tfgl_config* cfg, const char* out_dir,
                                     tfgl_result** out);
TFGL_API tfgl_status tfgl_read_report(const char* dir, tfgl_result** out);

TFGL_API int tfgl_result_passed(const tfgl_result* res);
/* Valid until tfgl_result_free. */
TFGL_API const char* tfgl_result_json(const tfgl_result* res);
TFGL_API void tfgl_result_free(tfgl_result* res);

/* Direct access to the auxiliary problem. */
TFGL_API tfgl_status tfgl_xi_solve(const tfgl_config* cfg, tfgl_xi** out);
TFGL_API size_t tfgl_xi_num_nodes(const tfgl_xi* xi);
TFGL_API tfgl_status tfgl_xi_node(const tfgl_xi* xi, size_t node, double* x1, double* x2,
                                  double* value, int* interior);
TFGL_API double tfgl_xi_hc1(const tfgl_xi* xi);
TFGL_API double tfgl_xi_max_abs(const tfgl_xi* xi);
TFGL_API size_t tfgl_xi_lambda_count(const tfgl_xi* xi);
TFGL_API tfgl_status tfgl_xi_lambda_point(const tfgl_xi* xi, size_t k, double* x1, double* x2,
                                          int* degree_sign);
TFGL_API void tfgl_xi_free(tfgl_xi* xi);

/* Dirichlet Green's function of the unit disk. */
TFGL_API tfgl_status tfgl_green_disk(double x1, double x2, double y1, double y2, double* out);

#ifdef __cplusplus
}
#endif

#endif
