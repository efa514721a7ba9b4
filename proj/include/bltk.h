/* Public C interface to the boundary-layer toolkit: opaque run handles over
 * the staged pipeline (validate, roots, solve_inner, solve_outer, flatness,
 * report) plus a couple of direct utility entry points.
 *
 * All functions returning int use the pipeline exit codes:
 *   0 ok, 1 constraint failure, 2 input error, 3 pipeline-order error,
 *   4 numerical failure.
 * On any nonzero return, bltk_last_error() describes the problem (thread-local
 * storage; valid until the next call on the same thread).
 */
#ifndef BLTK_H
#define BLTK_H

#ifdef _WIN32
#define BLTK_API __declspec(dllexport)
#else
#define BLTK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

enum {
  BLTK_OK = 0,
  BLTK_ERR_CONSTRAINT = 1,
  BLTK_ERR_INPUT = 2,
  BLTK_ERR_ORDER = 3,
  BLTK_ERR_NUMERIC = 4
};

typedef struct bltk_run bltk_run;

BLTK_API const char* bltk_version(void);
BLTK_API const char* bltk_last_error(void);

/* Opens a run over a JSON config file.  overrides is an optional array of
 * n_overrides "dot.path=value" strings; out_dir and eps_list (comma-separated
 * |eps| values for the solve stages) may be NULL.  *out receives the handle on
 * success. */
BLTK_API int bltk_run_open(const char* config_path,
                           const char* const* overrides, int n_overrides,
                           const char* out_dir, const char* eps_list,
                           bltk_run** out);

/* Executes one stage ("validate", "roots", "solve_inner", "solve_outer",
 * "flatness", "report", or "all") and returns its exit code. */
BLTK_API int bltk_run_stage(bltk_run* run, const char* stage);

/* Artifact tag (content hash of config + code version) of an open run. */
BLTK_API const char* bltk_run_tag(const bltk_run* run);

BLTK_API void bltk_run_close(bltk_run* run);

/* Convenience: open + validate + close in one call. */
BLTK_API int bltk_validate_file(const char* config_path);

/* Euler Gamma function (real positive arguments), exposed for binding smoke
 * tests. */
BLTK_API double bltk_gamma(double x);

#ifdef __cplusplus
}
#endif

#endif /* BLTK_H */
