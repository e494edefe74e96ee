#ifndef DENSETREE_H
#define DENSETREE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DtPeelMode {
  DT_PEEL_MODE_NODES = 0,
  DT_PEEL_MODE_EDGES = 1,
} DtPeelMode;

typedef enum DtStatus {
  DT_STATUS_OK = 0,
  DT_STATUS_NULL_ARGUMENT = 1,
  DT_STATUS_INVALID_UTF8 = 2,
  DT_STATUS_PARSE = 3,
  DT_STATUS_INVALID_GRAPH = 4,
  DT_STATUS_DISCONNECTED = 5,
  DT_STATUS_INVALID_ARGUMENT = 6,
  DT_STATUS_TOO_MANY_TREES = 7,
  DT_STATUS_NO_FEASIBLE = 8,
  DT_STATUS_IO = 9,
  DT_STATUS_PANIC = 10,
} DtStatus;

// Opaque graph handle.
typedef struct DtGraph DtGraph;

// Opaque search result handle.
typedef struct DtResult DtResult;

// Search settings. Obtain defaults from [`dt_config_default`].
typedef struct DtConfig {
  // 1: direct edge set, 2: Kruskal-decoded.
  uint8_t model;
  uintptr_t population_size;
  uintptr_t max_generations;
  uintptr_t stall_generations;
  uintptr_t tournament_size;
  double crossover_rate;
  // Per-gene mutation probability; zero or negative selects 1 / length.
  double mutation_rate;
  uintptr_t elitism_count;
  double alpha;
  uint64_t seed;
  // Worker threads; zero uses the global pool.
  uintptr_t threads;
} DtConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread; empty after a success.
// The pointer stays valid until the next `dt_*` call on the same thread.
const char *dt_last_error_message(void);

struct DtConfig dt_config_default(void);

// Parses an edge list (`u v [w]` per line, `#` comments).
//
// # Safety
// `text` must be a NUL-terminated string and `out` a writable pointer.
enum DtStatus dt_graph_from_edge_list(const char *text, struct DtGraph **out);

// Parses a symmetric adjacency matrix in CSV form.
//
// # Safety
// As [`dt_graph_from_edge_list`].
enum DtStatus dt_graph_from_adjacency_csv(const char *text, struct DtGraph **out);

// # Safety
// `g` must come from a `dt_graph_from_*` call and not be used afterwards.
void dt_graph_free(struct DtGraph *g);

// # Safety
// `g` must be a live graph handle or null (which yields 0).
uintptr_t dt_graph_vertex_count(const struct DtGraph *g);

// # Safety
// `g` must be a live graph handle or null (which yields 0).
uintptr_t dt_graph_edge_count(const struct DtGraph *g);

// Number of spanning trees as a decimal string.
//
// # Safety
// `g` must be a live graph handle and `out` writable.
enum DtStatus dt_spanning_tree_count(const struct DtGraph *g, char **out);

// Genetic search for the objective `kind` (`spow:2`, `wiener`, ...) under
// `sense` (`min` or `max`). A null `config` uses the defaults.
//
// # Safety
// Pointers must be valid; `kind` and `sense` NUL-terminated.
enum DtStatus dt_solve(const struct DtGraph *g,
                       const char *kind,
                       const char *sense,
                       const struct DtConfig *config,
                       struct DtResult **out);

// Exhaustive optimum; fails with `TooManyTrees` above `cap` spanning trees.
//
// # Safety
// As [`dt_solve`].
enum DtStatus dt_solve_exact(const struct DtGraph *g,
                             const char *kind,
                             const char *sense,
                             uint64_t cap,
                             struct DtResult **out);

// Constrained search; `variant` uses the CLI syntax, e.g. `degree-bound:3`.
//
// # Safety
// As [`dt_solve`]; `variant` NUL-terminated.
enum DtStatus dt_solve_variant(const struct DtGraph *g,
                               const char *kind,
                               const char *sense,
                               const char *variant,
                               const struct DtConfig *config,
                               struct DtResult **out);

// Raw objective value of the best tree, NaN when none was feasible.
//
// # Safety
// `r` must be a live result handle.
double dt_result_value(const struct DtResult *r);

// # Safety
// `r` must be a live result handle or null (which yields false).
bool dt_result_feasible(const struct DtResult *r);

// # Safety
// `r` must be a live result handle or null (which yields 0).
uintptr_t dt_result_generations(const struct DtResult *r);

// # Safety
// `r` must be a live result handle or null (which yields 0).
uintptr_t dt_result_label_count(const struct DtResult *r);

// Copies up to `len` tree edge labels, ascending, into `buf` and returns the
// number copied.
//
// # Safety
// `r` must be a live result handle and `buf` valid for `len` writes.
uintptr_t dt_result_labels(const struct DtResult *r, uintptr_t *buf, uintptr_t len);

// Result as JSON (selection, value, generations, evaluations, history).
//
// # Safety
// `r` must be a live result handle and `out` writable.
enum DtStatus dt_result_to_json(const struct DtResult *r, char **out);

// # Safety
// `r` must come from a `dt_solve*` call and not be used afterwards.
void dt_result_free(struct DtResult *r);

// Objective value of the spanning tree made of `labels`.
//
// # Safety
// `labels` must be valid for `len` reads; other pointers as [`dt_solve`].
enum DtStatus dt_evaluate(const struct DtGraph *g,
                          const uintptr_t *labels,
                          uintptr_t len,
                          const char *kind,
                          const char *sense,
                          double *out);

// Recursive peeling; writes the report as JSON to `out`.
//
// # Safety
// As [`dt_solve`].
enum DtStatus dt_peel(const struct DtGraph *g,
                      const char *kind,
                      const char *sense,
                      enum DtPeelMode mode,
                      const struct DtConfig *config,
                      char **out);

// Releases a string returned by this library.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void dt_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* DENSETREE_H */
