#ifndef LARCKIT_H
#define LARCKIT_H

/* C interface to the larckit controllability toolkit.
 *
 * Systems are opaque handles created from the JSON configuration format;
 * every command returns a heap-allocated JSON (or CSV) string that the caller
 * releases with lk_string_free. All functions are thread-safe as long as the
 * same lk_system is not mutated concurrently; error messages are per-thread.
 */

#if defined(_WIN32) || defined(__CYGWIN__)
#ifdef LARCKIT_BUILD
#define LARCKIT_API __declspec(dllexport)
#else
#define LARCKIT_API __declspec(dllimport)
#endif
#else
#define LARCKIT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lk_status {
  LK_OK = 0,
  LK_ERR_NUMERIC = 1,          /* numerical failure / exhausted search */
  LK_ERR_PARSE = 2,            /* malformed configuration or inputs */
  LK_HYPOTHESES_UNMET = 3,     /* analyze: report produced, verdict negative */
  LK_ERR_INVALID_ARGUMENT = 4, /* precondition violation */
  LK_ERR_NULL = 5              /* required pointer was NULL */
} lk_status;

typedef struct lk_system lk_system;

LARCKIT_API const char* lk_version(void);

/* Message from the most recent failing call on this thread ("" if none). */
LARCKIT_API const char* lk_last_error(void);

/* Cap the linear-algebra thread count (process-wide); n < 1 means 1. */
LARCKIT_API void lk_set_threads(int n);

LARCKIT_API lk_status lk_system_from_json(const char* json_text,
                                          lk_system** out_system);
LARCKIT_API lk_status lk_system_from_file(const char* path,
                                          lk_system** out_system);
LARCKIT_API void lk_system_free(lk_system* system);

LARCKIT_API int lk_system_dim(const lk_system* system);      /* -1 on NULL */
LARCKIT_API int lk_system_modes(const lk_system* system);    /* -1 on NULL */
LARCKIT_API int lk_system_controls(const lk_system* system); /* -1 on NULL */

/* Option overrides applied on top of the configuration file: keys gap_tol,
 * independence_bound (alias bound), independence_tau (alias tau), edge_tol,
 * rank_tol, max_passes, block_tol. */
LARCKIT_API lk_status lk_set_option(lk_system* system, const char* key,
                                    double value);
LARCKIT_API lk_status lk_set_seed(lk_system* system,
                                  unsigned long long seed);
LARCKIT_API lk_status lk_set_truncations(lk_system* system,
                                         const int* truncations, int count);
LARCKIT_API lk_status lk_set_certificates(lk_system* system, int enabled);

/* Full analysis. Writes the report in every non-parse outcome; returns LK_OK
 * for verdict CONTROLLABLE-BY-THM2 and LK_HYPOTHESES_UNMET for
 * HYPOTHESES-UNMET (the report is still valid in that case). */
LARCKIT_API lk_status lk_analyze(const lk_system* system, char** out_report);

LARCKIT_API lk_status lk_closure(const lk_system* system, char** out_report);
LARCKIT_API lk_status lk_closure_csv(const lk_system* system, char** out_csv);

/* Torus phase alignment on the first n_modes eigenvalues (n_modes <= 0: all;
 * target holds one phase per used mode). horizon <= 0 selects the heuristic
 * horizon with automatic extension. */
LARCKIT_API lk_status lk_kronecker(const lk_system* system,
                                   const double* target, int n_modes,
                                   double delta, double horizon,
                                   char** out_report);

/* Return time into the strong eps-neighborhood of exp(i t_minus H0) on
 * n_vectors seeded random unit vectors. */
LARCKIT_API lk_status lk_recurrence(const lk_system* system, double t_minus,
                                    double eps, int n_vectors,
                                    char** out_report);

/* Block decomposition + per-block closures for the chosen generators
 * (0 = drift, j >= 1 = control j); count 0 selects all of them. */
LARCKIT_API lk_status lk_blocks(const lk_system* system, const int* generators,
                                int count, char** out_report);

/* schedule_json: {"segments":[{"duration":t,"amplitudes":[...]}...],
 * "initial":[[...],...]} (see the documentation for entry formats). */
LARCKIT_API lk_status lk_simulate(const lk_system* system,
                                  const char* schedule_json,
                                  char** out_report);
LARCKIT_API lk_status lk_simulate_csv(const lk_system* system,
                                      const char* schedule_json,
                                      char** out_csv);

LARCKIT_API void lk_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* LARCKIT_H */
