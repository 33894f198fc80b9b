/* Public C API of the SIDSP solver shared library.
 *
 * Handles are opaque; every function returns a status code and reports
 * details through sidsp_last_error() (thread-local). Strings returned
 * through char** out-parameters are heap-allocated and must be released
 * with sidsp_string_free().
 *
 * Instance handles are immutable once created and may be shared across
 * threads; concurrent sidsp_solve calls on the same instance are safe.
 */
#ifndef SIDSP_H
#define SIDSP_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SIDSP_API __declspec(dllexport)
#else
#define SIDSP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct sidsp_instance sidsp_instance;
typedef struct sidsp_schedule sidsp_schedule;

typedef enum sidsp_status {
  SIDSP_OK = 0,
  SIDSP_ERR_ARGUMENT = 1,   /* null pointer, unknown heuristic/profile, ... */
  SIDSP_ERR_PARSE = 2,      /* malformed JSON */
  SIDSP_ERR_INVARIANT = 3,  /* well-formed JSON violating a model invariant */
  SIDSP_ERR_STATE = 4,      /* e.g. preprocessing an already-preprocessed instance */
  SIDSP_ERR_IO = 5,
  SIDSP_ERR_INTERNAL = 6,
} sidsp_status;

SIDSP_API const char* sidsp_version(void);

/* Message for the most recent failure on this thread; empty string if none. */
SIDSP_API const char* sidsp_last_error(void);

SIDSP_API void sidsp_string_free(char* s);

/* ---- instances ---- */

SIDSP_API sidsp_status sidsp_instance_from_json(const char* json, sidsp_instance** out);
SIDSP_API sidsp_status sidsp_instance_from_file(const char* path, sidsp_instance** out);
SIDSP_API sidsp_status sidsp_instance_to_json(const sidsp_instance* inst, char** out_json);

/* profile is "low" or "high"; overrides_json may be NULL. */
SIDSP_API sidsp_status sidsp_instance_generate(const char* profile, uint64_t seed,
                                               const char* overrides_json,
                                               sidsp_instance** out);

/* Returns a new handle with the same-power gap absorbed; required before
 * solving or validating. */
SIDSP_API sidsp_status sidsp_instance_preprocess(const sidsp_instance* inst,
                                                 sidsp_instance** out);

SIDSP_API sidsp_status sidsp_instance_request_count(const sidsp_instance* inst, uint32_t* out);
SIDSP_API sidsp_status sidsp_instance_is_preprocessed(const sidsp_instance* inst, int32_t* out);
SIDSP_API void sidsp_instance_free(sidsp_instance* inst);

/* ---- solving ---- */

typedef struct sidsp_solver_config {
  double alpha;              /* tardiness weight, [0, 1] */
  double alpha_urgent;       /* tardiness weight for the urgent phase */
  int64_t time_budget_ms;    /* wall-clock budget; 0 = none */
  int64_t eval_budget;       /* deterministic evaluation budget; 0 = none */
  int64_t grasp_ls_time_ms;  /* per local-search run inside GRASP */
  int32_t grasp_rcl;         /* candidate-list length of the randomized constructor */
  int32_t ec_depth;          /* ejection-chain search depth */
  double sa_t0;              /* initial annealing temperature */
  int32_t tabu_len;          /* tabu list length */
  double tabu_eps;           /* tabu closeness tolerance */
  uint64_t seed;
} sidsp_solver_config;

SIDSP_API void sidsp_solver_config_init(sidsp_solver_config* cfg);

/* heuristic is one of "grasp", "ec", "sa", "tabu". Runs the two-phase
 * urgent/regular driver. The instance must be preprocessed. */
SIDSP_API sidsp_status sidsp_solve(const sidsp_instance* inst, const char* heuristic,
                                   const sidsp_solver_config* cfg, sidsp_schedule** out);

/* ---- schedules ---- */

SIDSP_API sidsp_status sidsp_schedule_from_json(const sidsp_instance* inst, const char* json,
                                                sidsp_schedule** out);
SIDSP_API sidsp_status sidsp_schedule_to_json(const sidsp_instance* inst,
                                              const sidsp_schedule* sched, double alpha,
                                              char** out_json);
SIDSP_API sidsp_status sidsp_schedule_entry_count(const sidsp_schedule* sched, uint32_t* out);
SIDSP_API sidsp_status sidsp_schedule_objective(const sidsp_instance* inst,
                                                const sidsp_schedule* sched, double alpha,
                                                double* out);

/* Scheduling quality summary as JSON: unscheduled counts, tardiness and
 * start-delay averages (seconds), objective. */
SIDSP_API sidsp_status sidsp_schedule_metrics_json(const sidsp_instance* inst,
                                                   const sidsp_schedule* sched,
                                                   char** out_json);

/* Feasibility check; *feasible is 1/0, report_json (optional) receives the
 * violation list. */
SIDSP_API sidsp_status sidsp_validate(const sidsp_instance* inst, const sidsp_schedule* sched,
                                      char** report_json, int32_t* feasible);

SIDSP_API void sidsp_schedule_free(sidsp_schedule* sched);

#ifdef __cplusplus
}
#endif

#endif /* SIDSP_H */
