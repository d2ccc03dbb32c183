#ifndef UAVCOV_UAVCOV_H
#define UAVCOV_UAVCOV_H

/* C interface to the UAV visual-coverage simulator. Every function returns a
 * status code; on failure uavcov_last_error() describes the problem for the
 * calling thread. Handles are opaque and owned by the caller. */

#include <stddef.h>
#include <stdint.h>

#if defined(UAVCOV_BUILDING_LIBRARY)
#define UAVCOV_API __attribute__((visibility("default")))
#else
#define UAVCOV_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum uavcov_status {
  UAVCOV_OK = 0,
  UAVCOV_ERR_PARSE = 1,
  UAVCOV_ERR_VALIDATION = 2,
  UAVCOV_ERR_IO = 3,
  UAVCOV_ERR_GEOMETRY = 4,
  UAVCOV_ERR_ALTITUDE = 5,
  UAVCOV_ERR_STALE = 6,
  UAVCOV_ERR_ARGUMENT = 7,
  UAVCOV_ERR_INTERNAL = 8
} uavcov_status;

typedef struct uavcov_scenario uavcov_scenario;
typedef struct uavcov_trajectory uavcov_trajectory;

typedef struct uavcov_node {
  int id;
  double x;
  double y;
  double z;
} uavcov_node;

typedef struct uavcov_control {
  double u_x, u_y, u_z;
  double own_boundary_x, own_boundary_y, own_boundary_z;
  double interior_x, interior_y, interior_z;
  double neighbor_x, neighbor_y, neighbor_z;
} uavcov_control;

typedef struct uavcov_sim_settings {
  double dt;
  int steps;
  int record_every;
  double alpha_q;
  double alpha_z;
  double convergence_tol;
  int boundary_order;
  int grid_resolution;
  int interior_grid; /* 0 = exact moments, 1 = grid quadrature */
  int max_form_every;
  int max_form_resolution;
  int max_form_depth;
  uint64_t seed;
} uavcov_sim_settings;

typedef struct uavcov_record {
  int step;
  double t;
  double H;
  double H_max_form;       /* NaN when not evaluated */
  double H_max_form_bound; /* NaN when not evaluated */
  double covered_area_ratio;
} uavcov_record;

typedef struct uavcov_run_summary {
  double h_opt;
  int converged;
  int steps_taken;
  int clamp_activations;
  int projections;
} uavcov_run_summary;

UAVCOV_API const char* uavcov_version(void);
UAVCOV_API const char* uavcov_last_error(void);
/* Field named by the last validation error, or "". */
UAVCOV_API const char* uavcov_last_error_field(void);

/* Loads a scenario file or bundled scenario name. seed may be NULL. */
UAVCOV_API uavcov_status uavcov_scenario_load(const char* name_or_path, const uint64_t* seed,
                                              uavcov_scenario** out);
UAVCOV_API uavcov_status uavcov_scenario_from_json(const char* json_text, const char* name,
                                                   const uint64_t* seed, uavcov_scenario** out);
UAVCOV_API void uavcov_scenario_free(uavcov_scenario* scenario);

UAVCOV_API const char* uavcov_scenario_name(const uavcov_scenario* scenario);
UAVCOV_API const char* uavcov_scenario_output_dir(const uavcov_scenario* scenario);
UAVCOV_API size_t uavcov_scenario_node_count(const uavcov_scenario* scenario);
UAVCOV_API uavcov_status uavcov_scenario_nodes(const uavcov_scenario* scenario, uavcov_node* out,
                                               size_t capacity);
/* Replaces the node states (same count); validated against omega and band. */
UAVCOV_API uavcov_status uavcov_scenario_set_nodes(uavcov_scenario* scenario, const uavcov_node* nodes,
                                                   size_t count);
UAVCOV_API uavcov_status uavcov_scenario_settings(const uavcov_scenario* scenario,
                                                  uavcov_sim_settings* out);
UAVCOV_API uavcov_status uavcov_scenario_set_settings(uavcov_scenario* scenario,
                                                      const uavcov_sim_settings* settings);

/* Optimal altitude of the scenario's quality model and the optimal
 * criterion for its node count. interior_root may be NULL. */
UAVCOV_API uavcov_status uavcov_optimal_altitude(const uavcov_scenario* scenario, double* z_opt,
                                                 int* interior_root, double* h_opt);
/* Queries on the scenario's current node states. */
UAVCOV_API uavcov_status uavcov_criterion(const uavcov_scenario* scenario, double* H);
UAVCOV_API uavcov_status uavcov_criterion_max_form(const uavcov_scenario* scenario, int resolution,
                                                   int depth, double* value, double* error_bound);
UAVCOV_API uavcov_status uavcov_cell_areas(const uavcov_scenario* scenario, double* out,
                                           size_t capacity);
UAVCOV_API uavcov_status uavcov_control_inputs(const uavcov_scenario* scenario, uavcov_control* out,
                                               size_t capacity);
UAVCOV_API uavcov_status uavcov_stable_altitude(const uavcov_scenario* scenario, size_t index,
                                                double* z);
/* Largest relative error between the inputs and central differences of H. */
UAVCOV_API uavcov_status uavcov_check_gradient(const uavcov_scenario* scenario, double* max_rel_error);
/* H of the last recorded state in a trajectory CSV, on this scenario's
 * omega and quality model. */
UAVCOV_API uavcov_status uavcov_criterion_from_csv(const uavcov_scenario* scenario, const char* csv_path,
                                                   double* H);

UAVCOV_API uavcov_status uavcov_run(const uavcov_scenario* scenario, uavcov_trajectory** out);
UAVCOV_API void uavcov_trajectory_free(uavcov_trajectory* trajectory);
UAVCOV_API uavcov_status uavcov_trajectory_summary(const uavcov_trajectory* trajectory,
                                                   uavcov_run_summary* out);
UAVCOV_API size_t uavcov_trajectory_record_count(const uavcov_trajectory* trajectory);
UAVCOV_API uavcov_status uavcov_trajectory_record(const uavcov_trajectory* trajectory, size_t index,
                                                  uavcov_record* out);
UAVCOV_API uavcov_status uavcov_trajectory_nodes(const uavcov_trajectory* trajectory, size_t index,
                                                 uavcov_node* out, size_t capacity);
UAVCOV_API uavcov_status uavcov_write_trajectory_csv(const uavcov_trajectory* trajectory,
                                                     const char* path);
UAVCOV_API uavcov_status uavcov_write_metrics_json(const uavcov_trajectory* trajectory,
                                                   const char* path);
/* SVG of the partition at a recorded step of a run of this scenario. */
UAVCOV_API uavcov_status uavcov_write_snapshot_svg(const uavcov_scenario* scenario,
                                                   const uavcov_trajectory* trajectory,
                                                   size_t record_index, const char* path);

#ifdef __cplusplus
}
#endif

#endif
