#ifndef BIREG_H
#define BIREG_H

/* Generated by cbindgen from the bireg-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes of every fallible call.
 */
typedef enum BiregStatus {
  BIREG_STATUS_OK = 0,
  BIREG_STATUS_NULL_POINTER = 1,
  BIREG_STATUS_INVALID_ARGUMENT = 2,
  BIREG_STATUS_TOO_LARGE = 3,
  BIREG_STATUS_INFEASIBLE = 4,
  BIREG_STATUS_BUFFER_TOO_SMALL = 5,
  BIREG_STATUS_NOT_FOUND = 6,
  BIREG_STATUS_INTERNAL = 7,
} BiregStatus;

/**
 * Opaque bipartite graph.
 */
typedef struct BiregGraph BiregGraph;

/**
 * Opaque instance parameters (n1, n2, p).
 */
typedef struct BiregParams BiregParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Create instance parameters with density `p = p_num / p_den`.
 * Fails unless `p*n2` and `p*n1` are integers in range.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum BiregStatus bireg_params_new(uint64_t n1,
                                  uint64_t n2,
                                  uint64_t p_num,
                                  uint64_t p_den,
                                  struct BiregParams **out);

/**
 * # Safety
 * `params` must come from `bireg_params_new` and not be freed twice.
 */
void bireg_params_free(struct BiregParams *params);

/**
 * Left degree `d1 = p*n2`; zero when `params` is null.
 *
 * # Safety
 * `params` must be valid or null.
 */
uint64_t bireg_params_d1(const struct BiregParams *params);

/**
 * Exact count of biregular graphs, as a decimal string.
 *
 * # Safety
 * Pointer arguments must be valid (buffer of `cap` bytes).
 */
enum BiregStatus bireg_count(const struct BiregParams *params,
                             uint64_t cap_n,
                             char *buf,
                             uintptr_t cap,
                             uintptr_t *written);

/**
 * Exactly uniform biregular sample from the stream `(seed, stream)`.
 *
 * # Safety
 * `params` and `out` must be valid pointers.
 */
enum BiregStatus bireg_sample_exact(const struct BiregParams *params,
                                    uint64_t seed,
                                    uint64_t stream,
                                    struct BiregGraph **out);

/**
 * Uniform m-edge subgraph of the complete bipartite graph.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum BiregStatus bireg_sample_gnm(uint64_t n1,
                                  uint64_t n2,
                                  uint64_t m,
                                  uint64_t seed,
                                  uint64_t stream,
                                  struct BiregGraph **out);

/**
 * # Safety
 * `graph` must come from this library and not be freed twice.
 */
void bireg_graph_free(struct BiregGraph *graph);

/**
 * Number of edges; zero for null.
 *
 * # Safety
 * `graph` must be valid or null.
 */
uintptr_t bireg_graph_edge_count(const struct BiregGraph *graph);

/**
 * 1 if the edge is present, 0 if absent, -1 on bad input.
 *
 * # Safety
 * `graph` must be valid or null.
 */
int32_t bireg_graph_has_edge(const struct BiregGraph *graph, uintptr_t i, uintptr_t j);

/**
 * Complement within the complete bipartite graph.
 *
 * # Safety
 * `graph` and `out` must be valid pointers.
 */
enum BiregStatus bireg_graph_complement(const struct BiregGraph *graph, struct BiregGraph **out);

/**
 * Number of common neighbors of two same-side vertices
 * (`on_v2 = 0` for a V1 pair, nonzero for a V2 pair).
 *
 * # Safety
 * `graph` and `out` must be valid pointers.
 */
enum BiregStatus bireg_graph_codegree(const struct BiregGraph *graph,
                                      int32_t on_v2,
                                      uintptr_t u,
                                      uintptr_t v,
                                      uintptr_t *out);

/**
 * Serialize to the library's edge-list format (header `n1 n2`, then one
 * `i j` line per edge, row-major).
 *
 * # Safety
 * Pointer arguments must be valid (buffer of `cap` bytes).
 */
enum BiregStatus bireg_graph_to_edge_list(const struct BiregGraph *graph,
                                          char *buf,
                                          uintptr_t cap,
                                          uintptr_t *written);

/**
 * Parse the edge-list format.
 *
 * # Safety
 * `text` must be a NUL-terminated string, `out` a valid pointer.
 */
enum BiregStatus bireg_graph_from_edge_list(const char *text, struct BiregGraph **out);

/**
 * Conditional edge probability `P(eta_{t+1} = e | R(t) = prefix)` as an
 * exact rational string "num/den".
 *
 * # Safety
 * Pointer arguments must be valid (buffer of `cap` bytes).
 */
enum BiregStatus bireg_conditional_edge_prob(const struct BiregParams *params,
                                             const struct BiregGraph *prefix,
                                             uintptr_t i,
                                             uintptr_t j,
                                             char *buf,
                                             uintptr_t cap,
                                             uintptr_t *written);

/**
 * Exhaustive jumbledness check; `pass` receives 1 or 0.
 *
 * # Safety
 * `graph` and `pass` must be valid pointers.
 */
enum BiregStatus bireg_jumbledness_check(const struct BiregGraph *graph,
                                         double pi,
                                         double delta,
                                         int32_t *pass);

/**
 * Shortest alternating cycle through `(i, j)` in the blue-red coloring
 * induced by `prefix ⊆ h`; `found` gets 1/0 and `length` the cycle length
 * when found.
 *
 * # Safety
 * Pointer arguments must be valid.
 */
enum BiregStatus bireg_find_alternating_cycle(const struct BiregGraph *prefix,
                                              const struct BiregGraph *h,
                                              uintptr_t i,
                                              uintptr_t j,
                                              uintptr_t max_len,
                                              int32_t *found,
                                              uintptr_t *length);

/**
 * One sandwich coupling run with the degenerate desk-scale schedule
 * (zeroed log constants, `gamma` as given); reports success of
 * `G(m) ⊆ H` and `|S|`.
 *
 * # Safety
 * Pointer arguments must be valid.
 */
enum BiregStatus bireg_sandwich_run(const struct BiregParams *params,
                                    double gamma,
                                    uint64_t m,
                                    uint64_t seed,
                                    uint64_t stream,
                                    int32_t *success,
                                    uintptr_t *s_size);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BIREG_H */
