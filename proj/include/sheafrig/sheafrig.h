#ifndef SHEAFRIG_H
#define SHEAFRIG_H

/* C interface to the sheafrig library. Every call returns SR_OK or an error
   code; sr_last_error() holds the message of the last failure on the calling
   thread. Strings handed out by the library are released with sr_string_free. */

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sr_status {
    SR_OK = 0,
    SR_INVALID_ARGUMENT = 1,
    SR_INVALID_PRESENTATION,
    SR_MIXED_DIRECTION_BAR,
    SR_EMPTY_SEQUENCE,
    SR_ZERO_COVECTOR,
    SR_INVALID_REGION_PARAMETERS,
    SR_DIMENSION_MISMATCH,
    SR_NEAR_CRITICAL_VALUE,
    SR_PROPERNESS_VIOLATION,
    SR_HYPOTHESIS_UNVERIFIED,
    SR_WINDOW_BOUND_VIOLATED,
    SR_ODD_DIMENSION,
    SR_RANK_DEFICIENT_BASIS,
    SR_ZERO_SIGMA,
    SR_NOT_LAGRANGIAN,
    SR_SINGULAR_DIFFERENTIAL,
    SR_PRECONDITION_VIOLATED,
    SR_DEGENERATE_OMEGA_T,
    SR_MOLLIFICATION_TOO_COARSE,
    SR_GRAPH_CONDITION_FAILED,
    SR_BLEND_WIDTH_NOT_FOUND,
    SR_DEGENERATE_GF,
    SR_GATE_FAILURE,
    SR_NUMERIC_BUDGET_EXCEEDED,
    SR_IO_FAILURE,
    SR_UNKNOWN_STEP,
    SR_INVALID_CONFIG,
    SR_INTERNAL = 100
} sr_status;

typedef enum sr_outcome {
    SR_OUTCOME_VERDICT = 0,
    SR_OUTCOME_GATE_FAILURE = 2,
    SR_OUTCOME_NUMERIC_BUDGET = 3
} sr_outcome;

typedef struct sr_config sr_config;
typedef struct sr_report sr_report;

const char* sr_status_name(sr_status status);
const char* sr_last_error(void);
void sr_string_free(char* s);

/* 0 means one worker per hardware thread */
void sr_set_max_threads(int n);

/* scenarios */
sr_status sr_config_default(sr_config** out);
sr_status sr_config_parse(const char* ini_text, sr_config** out);
sr_status sr_config_load(const char* path, sr_config** out);
void sr_config_free(sr_config* config);

sr_status sr_run_scenario(const sr_config* config, sr_report** out);
void sr_report_free(sr_report* report);
sr_outcome sr_report_outcome(const sr_report* report);
/* step name of the failed gate, "" after a verdict; owned by the report */
const char* sr_report_failed_step(const sr_report* report);
const char* sr_report_failure_message(const sr_report* report);
/* -1 when no N_r was found */
int sr_report_n_r(const sr_report* report);
sr_status sr_report_json(const sr_report* report, char** out);
sr_status sr_report_csv(const sr_report* report, char** out);
sr_status sr_report_hash(const sr_report* report, char** out);
/* writes DIR/report.json or DIR/report.csv */
sr_status sr_report_emit(const sr_report* report, const char* dir, const char* format);

/* newline-separated names */
sr_status sr_list_scenarios(char** out);
sr_status sr_list_steps(char** out);
sr_status sr_describe(const char* step, char** out);

/* linear symplectic algebra; matrices are row-major, phase space (x; xi) */
sr_status sr_symplectic_residual(const double* m, int dim, double* out);
/* columns of the rows x cols matrix w span the subspace */
sr_status sr_coisotropic_check(const double* w, int rows, int cols, int* out);
sr_status sr_rho_lift_check(const double* s, int rows, int cols, double sigma0, const double* xi0,
                            int* coisotropic_s, int* coisotropic_lift);

/* degree of f on the box [lo, hi] over the ball B(center, radius) at the
   regular value y */
typedef void (*sr_map_fn)(const double* x, double* y, void* user);
sr_status sr_degree(sr_map_fn f, void* user, int dim, const double* lo, const double* hi, const double* center,
                    double radius, const double* y, int* out);

#ifdef __cplusplus
}
#endif

#endif
