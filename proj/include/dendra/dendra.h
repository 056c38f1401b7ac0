/* Copyright 2026 The Dendra Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the dendra shared library: a dynamically maintained
 * single-linkage dendrogram over a weighted forest, plus read-only
 * clustering queries, dynamic Cartesian trees, and the deterministic
 * instance generators. Handles are opaque; every entry point returns a
 * status code, with dendra_last_error() holding the most recent message
 * for the calling thread. Buffers returned through out-parameters are
 * released with dendra_buffer_free().
 */

#ifndef DENDRA_DENDRA_H
#define DENDRA_DENDRA_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dendra_status {
  DENDRA_OK = 0,
  DENDRA_E_INVALID_ARGUMENT,
  DENDRA_E_OUT_OF_RANGE,
  DENDRA_E_NON_FINITE_WEIGHT,
  DENDRA_E_ALREADY_CONNECTED,
  DENDRA_E_WOULD_CREATE_CYCLE,
  DENDRA_E_DUPLICATE_EDGE,
  DENDRA_E_DUPLICATE_RANK_KEY,
  DENDRA_E_NO_SUCH_EDGE,
  DENDRA_E_NO_SUCH_COMPONENT,
  DENDRA_E_NOT_CONNECTED,
  DENDRA_E_SAME_VERTEX,
  DENDRA_E_SAME_COMPONENT,
  DENDRA_E_NON_MONOTONE_PATH,
  DENDRA_E_NON_INCREASING_QUERIES,
  DENDRA_E_CYCLE_DETECTED,
  DENDRA_E_HEAP_VIOLATION,
  DENDRA_E_NOT_A_STAR,
  DENDRA_E_NOT_AN_END,
  DENDRA_E_ORACLE_MISMATCH,
  DENDRA_E_PARSE_ERROR,
  DENDRA_E_VERIFY_MISMATCH,
  DENDRA_E_UNKNOWN
} dendra_status;

typedef enum dendra_mode {
  DENDRA_MODE_SEQ_H = 0,
  DENDRA_MODE_SEQ_OS = 1,
  DENDRA_MODE_PAR_H = 2,
  DENDRA_MODE_PAR_OS = 3
} dendra_mode;

/* Flattened per-update instrumentation record. */
typedef struct dendra_report {
  uint64_t pointer_changes;
  uint64_t pws_queries;
  uint64_t median_queries;
  uint64_t rc_nodes_visited;
  uint32_t dendrogram_height;
  uint32_t dc_recursion_depth;
  uint32_t contraction_rounds;
  uint32_t max_pws_node_visits;
  uint32_t spine_count;
  uint32_t spine_length_max;
  uint32_t merge_count;
  uint64_t merge_pws_queries[2];
  uint64_t merge_pointer_changes[2];
  double elapsed_seconds;
} dendra_report;

typedef struct dendra_sld dendra_sld;
typedef struct dendra_cartesian dendra_cartesian;

const char* dendra_status_name(dendra_status status);
/* Message of the calling thread's most recent failure; empty otherwise. */
const char* dendra_last_error(void);
void dendra_buffer_free(void* buffer);
/* Accepted for compatibility with parallel builds; results never depend
 * on it. */
void dendra_set_parallelism_hint(unsigned threads);

/* ---- dendrogram state ------------------------------------------------ */

dendra_status dendra_sld_create(uint32_t num_vertices, dendra_sld** out);
dendra_status dendra_sld_create_with_edges(uint32_t num_vertices,
                                           const uint32_t* us, const uint32_t* vs,
                                           const double* ws, size_t count,
                                           dendra_sld** out);
void dendra_sld_destroy(dendra_sld* sld);

dendra_status dendra_sld_num_vertices(const dendra_sld* sld, uint32_t* out);
dendra_status dendra_sld_num_edges(const dendra_sld* sld, size_t* out);

dendra_status dendra_sld_insert(dendra_sld* sld, uint32_t u, uint32_t v, double w,
                                dendra_mode mode, dendra_report* report);
dendra_status dendra_sld_delete(dendra_sld* sld, uint32_t u, uint32_t v,
                                dendra_mode mode, dendra_report* report);
dendra_status dendra_sld_batch_insert(dendra_sld* sld, const uint32_t* us,
                                      const uint32_t* vs, const double* ws,
                                      size_t count, dendra_report* report);
dendra_status dendra_sld_batch_delete(dendra_sld* sld, const uint32_t* us,
                                      const uint32_t* vs, size_t count,
                                      dendra_report* report);

/* Canonical parent-map text: one line per edge in rank order,
 * "u-v w -> x-y" or "u-v w -> ROOT". */
dendra_status dendra_sld_serialize(const dendra_sld* sld, char** out);
/* The same format computed by an independent Kruskal sweep over the
 * current edges; used by verification. */
dendra_status dendra_sld_oracle_serialize(const dendra_sld* sld, char** out);
/* Structural invariants plus exact equality with the Kruskal sweep. */
dendra_status dendra_sld_validate(const dendra_sld* sld);

/* ---- clustering queries ---------------------------------------------- */

dendra_status dendra_query_threshold(const dendra_sld* sld, uint32_t s, uint32_t t,
                                     double tau, int strict, int* out);
dendra_status dendra_query_cluster_size(const dendra_sld* sld, uint32_t u,
                                        double tau, int strict, uint32_t* out);
dendra_status dendra_query_cluster(const dendra_sld* sld, uint32_t u, double tau,
                                   int strict, uint32_t** out_members,
                                   size_t* out_count);
/* Clusters as text: "{0} {1 2 3}", ordered by minimum member. */
dendra_status dendra_query_flat(const dendra_sld* sld, double tau, int strict,
                                char** out);

/* ---- instance generators (emit the CLI file formats) ------------------ */

dendra_status dendra_gen_random_forest(uint32_t num_vertices, uint32_t num_edges,
                                       uint64_t seed, char** out_forest_text);
/* profile: "insert-heavy", "delete-heavy", "mixed", or "batch". */
dendra_status dendra_gen_update_stream(const char* forest_text, uint32_t ops,
                                       uint64_t seed, const char* profile,
                                       uint32_t batch_size,
                                       char** out_updates_text);
/* The star family: forest text plus one insert/delete pair of the
 * weight-0 center-center edge. */
dendra_status dendra_gen_theorem(uint32_t height, uint32_t num_stars,
                                 char** out_forest_text, char** out_updates_text);

/* ---- dynamic Cartesian trees ------------------------------------------ */

dendra_status dendra_cartesian_create(int max_root, dendra_cartesian** out);
void dendra_cartesian_destroy(dendra_cartesian* cart);
dendra_status dendra_cartesian_push(dendra_cartesian* cart, int back, double value,
                                    dendra_report* report);
dendra_status dendra_cartesian_pop(dendra_cartesian* cart, int back,
                                   dendra_report* report);
dendra_status dendra_cartesian_insert_at(dendra_cartesian* cart, size_t pos,
                                         double value, dendra_report* report);
dendra_status dendra_cartesian_delete_at(dendra_cartesian* cart, size_t pos,
                                         dendra_report* report);
dendra_status dendra_cartesian_size(const dendra_cartesian* cart, size_t* out);
dendra_status dendra_cartesian_in_order(const dendra_cartesian* cart,
                                        double** out_values, size_t* out_count);
/* Exact comparison against the recursive construction. */
dendra_status dendra_cartesian_verify(const dendra_cartesian* cart);

#ifdef __cplusplus
}
#endif

#endif /* DENDRA_DENDRA_H */
