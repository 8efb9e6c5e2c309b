/* C interface to the bulk-surface reaction-diffusion laboratory.
 *
 * All entry points return a bsr_status (except the accessors noted
 * below); on failure the thread-local message from bsr_last_error()
 * describes what went wrong. Handles are opaque and must be released
 * with the matching *_free call. Handles are not thread-safe; use one
 * per thread. */
#ifndef BSR_H
#define BSR_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bsr_status {
    BSR_OK = 0,
    BSR_ERR_INVALID_ARGUMENT = 1, /* null pointer, bad command, bad config */
    BSR_ERR_SOLVER = 2,           /* Newton divergence */
    BSR_ERR_IO = 3,               /* file open/read/write failure */
    BSR_ERR_EXPERIMENT = 4,       /* unreliable rate fit, order regression */
    BSR_ERR_INTERNAL = 5
} bsr_status;

typedef struct bsr_config bsr_config;
typedef struct bsr_sim bsr_sim;

/* Library version, static storage. */
const char* bsr_version_string(void);

/* Message for the most recent failure on this thread; empty string if
 * none. The pointer stays valid until the next failing call. */
const char* bsr_last_error(void);

/* ---- configuration ---- */
bsr_status bsr_config_parse(const char* json_text, bsr_config** out);
bsr_status bsr_config_load(const char* path, bsr_config** out);
void bsr_config_free(bsr_config* cfg);

/* ---- stepwise simulation ---- */
bsr_status bsr_sim_create(const bsr_config* cfg, bsr_sim** out);
void bsr_sim_free(bsr_sim* sim);

/* Advances n backward-Euler steps of size dt from the config. */
bsr_status bsr_sim_advance(bsr_sim* sim, long n_steps);

/* Current simulation time. Returns a quiet NaN on a null handle. */
double bsr_sim_time(const bsr_sim* sim);

/* Sizes of the bulk and surface state vectors. */
bsr_status bsr_sim_sizes(const bsr_sim* sim, size_t* n_bulk, size_t* n_surf);

/* Copies the current state into caller-owned buffers (either pointer
 * may be null to skip that field). */
bsr_status bsr_sim_state(const bsr_sim* sim, double* u, double* v);

/* Fills the fixed 15-slot diagnostics vector in CSV column order:
 * t, mass, E1, E2, E3, logE, fisher_b, fisher_s, min_u, min_v, max_u,
 * max_v, neg_norm, defect, trace_gap. */
bsr_status bsr_sim_diagnostics(const bsr_sim* sim, double out[15]);

/* ---- batch commands ---- */
/* command: "solve", "limit", "sweep-eps", "sweep-delta", "mms",
 * "galerkin". Writes outputs under out_dir; threads = 0 means auto. */
bsr_status bsr_execute(const char* command, const bsr_config* cfg,
                       const char* out_dir, int threads);

#ifdef __cplusplus
}
#endif

#endif
