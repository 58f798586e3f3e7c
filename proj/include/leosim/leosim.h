/*
 * leosim C API.
 *
 * Minimum-delay datagram routing over a polar LEO virtual-node grid:
 * topology and direction estimation, the threshold and probabilistic
 * congestion-control policies, a packet-level simulator, and the mean-field
 * mesh analysis. All objects are opaque handles released with the matching
 * *_destroy call. Every function returns a leo_status; on failure a
 * human-readable message is available from leo_last_error() on the calling
 * thread until the next failing call.
 */
#ifndef LEOSIM_H
#define LEOSIM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(LEOSIM_BUILDING)
#define LEOSIM_API __declspec(dllexport)
#else
#define LEOSIM_API __declspec(dllimport)
#endif
#else
#define LEOSIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum leo_status {
  LEO_OK = 0,
  LEO_E_INVALID_ARGUMENT = 1,
  LEO_E_CONFIG = 2,          /* malformed or invalid configuration file */
  LEO_E_INVALID_NODE = 3,
  LEO_E_TOPOLOGY = 4,        /* nodes are not linked */
  LEO_E_DEGENERATE_PATH = 5, /* source equals destination */
  LEO_E_DEAD_END = 6,
  LEO_E_UNREACHABLE = 7,     /* region cannot route some pair */
  LEO_E_INDETERMINATE = 8,
  LEO_E_UNDEFINED_DELAY = 9,
  LEO_E_IO = 10,
  LEO_E_INTERNAL = 11
} leo_status;

typedef enum leo_direction {
  LEO_DIR_NONE = -1,
  LEO_DIR_UP = 0,
  LEO_DIR_DOWN = 1,
  LEO_DIR_LEFT = 2,
  LEO_DIR_RIGHT = 3
} leo_direction;

typedef enum leo_policy { LEO_POLICY_DRA = 0, LEO_POLICY_PROBABILISTIC = 1 } leo_policy;

typedef enum leo_mesh_variant { LEO_MESH_PAPER_SIMPLIFIED = 0, LEO_MESH_EXACT_FP = 1 } leo_mesh_variant;

typedef enum leo_sweep_variable { LEO_SWEEP_LAMBDA_IN = 0, LEO_SWEEP_N_BUFFER = 1 } leo_sweep_variable;

typedef struct leo_node {
  int plane;
  int slot;
} leo_node;

/* d_h: +1 east (increasing plane), -1 west, 0 none.
 * d_v: +1 north (increasing slot), -1 south, 0 none. */
typedef struct leo_path_spec {
  int n_h;
  int n_v;
  int d_h;
  int d_v;
  int crosses_pole;
} leo_path_spec;

typedef struct leo_hop_choice {
  leo_direction primary;
  leo_direction secondary; /* LEO_DIR_NONE when absent */
} leo_hop_choice;

typedef struct leo_run_summary {
  int replications;
  double mean_e2e_delay_s;
  double ci95_halfwidth_s;
  double mean_prop_delay_s;
  double mean_queueing_delay_s;
  double mean_generated;
  double mean_delivered;
  double mean_dropped;
  double mean_drop_rate;
} leo_run_summary;

typedef struct leo_sweep_spec {
  leo_sweep_variable variable;
  const double* values;
  size_t n_values;
  double threshold_ratio; /* N_threshold / N_buffer for n_buffer sweeps */
  const leo_policy* policies;
  size_t n_policies;
  int replications; /* <= 0 keeps the configuration's value */
  int threads;
} leo_sweep_spec;

typedef struct leo_mesh_params {
  double p_h;
  double p_pref;
  double lambda;
  double mu;
  leo_mesh_variant variant;
} leo_mesh_params;

typedef struct leo_mesh_solution {
  double n_h;
  double n_v;
  double rho_h;
  double rho_v;
  double p_right;
  double p_up;
  int stable;
  int iterations;
} leo_mesh_solution;

typedef struct leo_config leo_config;
typedef struct leo_constellation leo_constellation;

LEOSIM_API const char* leo_last_error(void);
LEOSIM_API const char* leo_status_name(leo_status status);

/* Experiment configuration. */
LEOSIM_API leo_status leo_config_create_default(leo_config** out);
LEOSIM_API leo_status leo_config_load(const char* path, leo_config** out);
LEOSIM_API leo_status leo_config_parse(const char* json_text, leo_config** out);
LEOSIM_API void leo_config_destroy(leo_config* config);
/* Numeric fields by their configuration-file key (e.g. "lambda_in", "n_buffer"). */
LEOSIM_API leo_status leo_config_set_number(leo_config* config, const char* key, double value);
LEOSIM_API leo_status leo_config_get_number(const leo_config* config, const char* key, double* out);
LEOSIM_API leo_status leo_config_set_policy(leo_config* config, leo_policy policy);

/* Topology and routing over the full constellation of a configuration. */
LEOSIM_API leo_status leo_constellation_create(const leo_config* config, leo_constellation** out);
LEOSIM_API void leo_constellation_destroy(leo_constellation* constellation);
LEOSIM_API leo_status leo_node_position(const leo_constellation* c, leo_node node, double* latitude_deg,
                                        double* longitude_deg);
LEOSIM_API leo_status leo_node_is_polar(const leo_constellation* c, leo_node node, int* polar);
LEOSIM_API leo_status leo_neighbor(const leo_constellation* c, leo_node node, leo_direction direction,
                                   leo_node* out, int* present);
LEOSIM_API leo_status leo_isl_length_km(const leo_constellation* c, leo_node a, leo_node b, double* km);
LEOSIM_API leo_status leo_prop_delay_s(const leo_constellation* c, leo_node a, leo_node b, double* seconds);
LEOSIM_API leo_status leo_estimate_direction(const leo_constellation* c, leo_node src, leo_node dst,
                                             leo_path_spec* out);
LEOSIM_API leo_status leo_enhance_direction(const leo_constellation* c, leo_node current, leo_node dst,
                                            leo_hop_choice* out);

/* Congestion-control primitives. */
LEOSIM_API double leo_primary_probability(double c_primary, double c_secondary, double p_pref);

/* Simulation. leo_simulate runs the configured number of replications and,
 * when csv_path is non-NULL, writes one row per replication plus a mean row. */
LEOSIM_API leo_status leo_simulate(const leo_config* config, const char* csv_path, int threads,
                                   leo_run_summary* out);
LEOSIM_API leo_status leo_sweep(const leo_config* config, const leo_sweep_spec* spec, const char* csv_path,
                                size_t* rows_written);

/* Mesh analysis. */
LEOSIM_API leo_status leo_mesh_solve(const leo_mesh_params* params, double tol, int max_iter,
                                     leo_mesh_solution* out);
LEOSIM_API leo_status leo_mesh_solve_grid(const char* grid_path, const char* csv_path, size_t* rows_written,
                                          size_t* unstable_rows);

#ifdef __cplusplus
}
#endif

#endif /* LEOSIM_H */
