// Copyright 2026 The Dendra Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dendra/dendra.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <sstream>
#include <string>

#include "dendra/cartesian.hpp"
#include "dendra/dendrogram.hpp"
#include "dendra/oracle.hpp"
#include "dendra/parallel.hpp"
#include "dendra/queries.hpp"
#include "dendra/updates.hpp"

struct dendra_sld {
  dendra::DendrogramState state;
};

struct dendra_cartesian {
  dendra::CartesianTree tree;
};

namespace {

thread_local std::string g_last_error;

dendra_status map_code(dendra::ErrorCode code) {
  using dendra::ErrorCode;
  switch (code) {
    case ErrorCode::invalid_argument: return DENDRA_E_INVALID_ARGUMENT;
    case ErrorCode::out_of_range: return DENDRA_E_OUT_OF_RANGE;
    case ErrorCode::non_finite_weight: return DENDRA_E_NON_FINITE_WEIGHT;
    case ErrorCode::already_connected: return DENDRA_E_ALREADY_CONNECTED;
    case ErrorCode::would_create_cycle: return DENDRA_E_WOULD_CREATE_CYCLE;
    case ErrorCode::duplicate_edge: return DENDRA_E_DUPLICATE_EDGE;
    case ErrorCode::duplicate_rank_key: return DENDRA_E_DUPLICATE_RANK_KEY;
    case ErrorCode::no_such_edge: return DENDRA_E_NO_SUCH_EDGE;
    case ErrorCode::no_such_component: return DENDRA_E_NO_SUCH_COMPONENT;
    case ErrorCode::not_connected: return DENDRA_E_NOT_CONNECTED;
    case ErrorCode::same_vertex: return DENDRA_E_SAME_VERTEX;
    case ErrorCode::same_component: return DENDRA_E_SAME_COMPONENT;
    case ErrorCode::non_monotone_path: return DENDRA_E_NON_MONOTONE_PATH;
    case ErrorCode::non_increasing_queries: return DENDRA_E_NON_INCREASING_QUERIES;
    case ErrorCode::cycle_detected: return DENDRA_E_CYCLE_DETECTED;
    case ErrorCode::heap_violation: return DENDRA_E_HEAP_VIOLATION;
    case ErrorCode::not_a_star: return DENDRA_E_NOT_A_STAR;
    case ErrorCode::not_an_end: return DENDRA_E_NOT_AN_END;
    case ErrorCode::oracle_mismatch: return DENDRA_E_ORACLE_MISMATCH;
    case ErrorCode::parse_error: return DENDRA_E_PARSE_ERROR;
    case ErrorCode::verify_mismatch: return DENDRA_E_VERIFY_MISMATCH;
  }
  return DENDRA_E_UNKNOWN;
}

template <typename F>
dendra_status guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return DENDRA_OK;
  } catch (const dendra::Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return DENDRA_E_UNKNOWN;
  }
}

char* copy_out(const std::string& text) {
  char* buf = static_cast<char*>(std::malloc(text.size() + 1));
  std::memcpy(buf, text.data(), text.size() + 1);
  return buf;
}

void fill_report(const dendra::UpdateReport& in, dendra_report* out) {
  if (out == nullptr) return;
  std::memset(out, 0, sizeof(*out));
  out->pointer_changes = in.pointer_changes;
  out->pws_queries = in.pws_queries;
  out->median_queries = in.median_queries;
  out->rc_nodes_visited = in.rc_nodes_visited;
  out->dendrogram_height = in.dendrogram_height;
  out->dc_recursion_depth = in.dc_recursion_depth;
  out->contraction_rounds = in.contraction_rounds;
  out->max_pws_node_visits = in.max_pws_node_visits;
  out->spine_count = static_cast<uint32_t>(in.spine_lengths.size());
  for (uint32_t len : in.spine_lengths) {
    out->spine_length_max = std::max(out->spine_length_max, len);
  }
  out->merge_count =
      static_cast<uint32_t>(std::min<std::size_t>(in.merge_pws_queries.size(), 2));
  for (std::size_t i = 0; i < out->merge_count; ++i) {
    out->merge_pws_queries[i] = in.merge_pws_queries[i];
    out->merge_pointer_changes[i] = in.merge_pointer_changes[i];
  }
  out->elapsed_seconds = in.elapsed_seconds;
}

dendra::updates::UpdateMode map_mode(dendra_mode mode) {
  switch (mode) {
    case DENDRA_MODE_SEQ_H: return dendra::updates::UpdateMode::seq_h;
    case DENDRA_MODE_SEQ_OS: return dendra::updates::UpdateMode::seq_os;
    case DENDRA_MODE_PAR_H: return dendra::updates::UpdateMode::par_h;
    case DENDRA_MODE_PAR_OS: return dendra::updates::UpdateMode::par_os;
  }
  throw dendra::Error(dendra::ErrorCode::invalid_argument, "bad mode");
}

std::vector<dendra::Edge> edge_array(const uint32_t* us, const uint32_t* vs,
                                     const double* ws, size_t count) {
  std::vector<dendra::Edge> edges;
  edges.reserve(count);
  for (size_t i = 0; i < count; ++i) {
    edges.push_back(dendra::Edge(us[i], vs[i],
                                 dendra::Weight(ws != nullptr ? ws[i] : 0.0)));
  }
  return edges;
}

std::string forest_text(std::size_t n, const std::vector<dendra::Edge>& edges) {
  std::string out = "n " + std::to_string(n) + "\n";
  for (const dendra::Edge& e : edges) {
    out += "e " + std::to_string(e.key.lo) + " " + std::to_string(e.key.hi) + " " +
           e.weight.str() + "\n";
  }
  return out;
}

std::string flat_text(const std::vector<std::vector<dendra::VertexId>>& clusters) {
  std::string out;
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    if (c > 0) out += ' ';
    out += '{';
    for (std::size_t i = 0; i < clusters[c].size(); ++i) {
      if (i > 0) out += ' ';
      out += std::to_string(clusters[c][i]);
    }
    out += '}';
  }
  return out;
}

}  // namespace

extern "C" {

const char* dendra_status_name(dendra_status status) {
  switch (status) {
    case DENDRA_OK: return "OK";
    case DENDRA_E_INVALID_ARGUMENT: return "INVALID_ARGUMENT";
    case DENDRA_E_OUT_OF_RANGE: return "OUT_OF_RANGE";
    case DENDRA_E_NON_FINITE_WEIGHT: return "NON_FINITE_WEIGHT";
    case DENDRA_E_ALREADY_CONNECTED: return "ALREADY_CONNECTED";
    case DENDRA_E_WOULD_CREATE_CYCLE: return "WOULD_CREATE_CYCLE";
    case DENDRA_E_DUPLICATE_EDGE: return "DUPLICATE_EDGE";
    case DENDRA_E_DUPLICATE_RANK_KEY: return "DUPLICATE_RANK_KEY";
    case DENDRA_E_NO_SUCH_EDGE: return "NO_SUCH_EDGE";
    case DENDRA_E_NO_SUCH_COMPONENT: return "NO_SUCH_COMPONENT";
    case DENDRA_E_NOT_CONNECTED: return "NOT_CONNECTED";
    case DENDRA_E_SAME_VERTEX: return "SAME_VERTEX";
    case DENDRA_E_SAME_COMPONENT: return "SAME_COMPONENT";
    case DENDRA_E_NON_MONOTONE_PATH: return "NON_MONOTONE_PATH";
    case DENDRA_E_NON_INCREASING_QUERIES: return "NON_INCREASING_QUERIES";
    case DENDRA_E_CYCLE_DETECTED: return "CYCLE_DETECTED";
    case DENDRA_E_HEAP_VIOLATION: return "HEAP_VIOLATION";
    case DENDRA_E_NOT_A_STAR: return "NOT_A_STAR";
    case DENDRA_E_NOT_AN_END: return "NOT_AN_END";
    case DENDRA_E_ORACLE_MISMATCH: return "ORACLE_MISMATCH";
    case DENDRA_E_PARSE_ERROR: return "PARSE_ERROR";
    case DENDRA_E_VERIFY_MISMATCH: return "VERIFY_MISMATCH";
    case DENDRA_E_UNKNOWN: return "UNKNOWN";
  }
  return "UNKNOWN";
}

const char* dendra_last_error(void) { return g_last_error.c_str(); }

void dendra_buffer_free(void* buffer) { std::free(buffer); }

void dendra_set_parallelism_hint(unsigned threads) {
  dendra::parallel::set_parallelism_hint(threads);
}

dendra_status dendra_sld_create(uint32_t num_vertices, dendra_sld** out) {
  return guarded([&] { *out = new dendra_sld{dendra::DendrogramState(num_vertices, {})}; });
}

dendra_status dendra_sld_create_with_edges(uint32_t num_vertices,
                                           const uint32_t* us, const uint32_t* vs,
                                           const double* ws, size_t count,
                                           dendra_sld** out) {
  return guarded([&] {
    *out = new dendra_sld{
        dendra::DendrogramState(num_vertices, edge_array(us, vs, ws, count))};
  });
}

void dendra_sld_destroy(dendra_sld* sld) { delete sld; }

dendra_status dendra_sld_num_vertices(const dendra_sld* sld, uint32_t* out) {
  return guarded([&] {
    *out = static_cast<uint32_t>(sld->state.forest().num_vertices());
  });
}

dendra_status dendra_sld_num_edges(const dendra_sld* sld, size_t* out) {
  return guarded([&] { *out = sld->state.forest().num_edges(); });
}

dendra_status dendra_sld_insert(dendra_sld* sld, uint32_t u, uint32_t v, double w,
                                dendra_mode mode, dendra_report* report) {
  return guarded([&] {
    auto r = dendra::updates::insert(sld->state, u, v, dendra::Weight(w),
                                     map_mode(mode));
    fill_report(r, report);
  });
}

dendra_status dendra_sld_delete(dendra_sld* sld, uint32_t u, uint32_t v,
                                dendra_mode mode, dendra_report* report) {
  return guarded([&] {
    auto r = dendra::updates::erase(sld->state, u, v, map_mode(mode));
    fill_report(r, report);
  });
}

dendra_status dendra_sld_batch_insert(dendra_sld* sld, const uint32_t* us,
                                      const uint32_t* vs, const double* ws,
                                      size_t count, dendra_report* report) {
  return guarded([&] {
    auto r = dendra::updates::batch_insert(sld->state, edge_array(us, vs, ws, count));
    fill_report(r, report);
  });
}

dendra_status dendra_sld_batch_delete(dendra_sld* sld, const uint32_t* us,
                                      const uint32_t* vs, size_t count,
                                      dendra_report* report) {
  return guarded([&] {
    std::vector<dendra::EdgeKey> keys;
    keys.reserve(count);
    for (size_t i = 0; i < count; ++i) keys.push_back(dendra::EdgeKey(us[i], vs[i]));
    auto r = dendra::updates::batch_erase(sld->state, keys);
    fill_report(r, report);
  });
}

dendra_status dendra_sld_serialize(const dendra_sld* sld, char** out) {
  return guarded([&] { *out = copy_out(sld->state.parents().serialize_canonical()); });
}

dendra_status dendra_sld_oracle_serialize(const dendra_sld* sld, char** out) {
  return guarded([&] {
    std::vector<dendra::Edge> edges;
    for (const auto& [key, w] : sld->state.forest().edges()) {
      edges.push_back(dendra::Edge(key, w));
    }
    auto oracle =
        dendra::oracle::kruskal_sld(sld->state.forest().num_vertices(), edges);
    *out = copy_out(oracle.serialize_canonical());
  });
}

dendra_status dendra_sld_validate(const dendra_sld* sld) {
  return guarded([&] { sld->state.validate(); });
}

dendra_status dendra_query_threshold(const dendra_sld* sld, uint32_t s, uint32_t t,
                                     double tau, int strict, int* out) {
  return guarded([&] {
    *out = dendra::queries::threshold_query(
               sld->state, s, t, {dendra::Weight(tau), strict != 0})
               ? 1
               : 0;
  });
}

dendra_status dendra_query_cluster_size(const dendra_sld* sld, uint32_t u,
                                        double tau, int strict, uint32_t* out) {
  return guarded([&] {
    *out = dendra::queries::cluster_size(sld->state, u,
                                         {dendra::Weight(tau), strict != 0});
  });
}

dendra_status dendra_query_cluster(const dendra_sld* sld, uint32_t u, double tau,
                                   int strict, uint32_t** out_members,
                                   size_t* out_count) {
  return guarded([&] {
    auto members = dendra::queries::cluster_report(
        sld->state, u, {dendra::Weight(tau), strict != 0});
    *out_count = members.size();
    *out_members =
        static_cast<uint32_t*>(std::malloc(sizeof(uint32_t) * members.size()));
    std::copy(members.begin(), members.end(), *out_members);
  });
}

dendra_status dendra_query_flat(const dendra_sld* sld, double tau, int strict,
                                char** out) {
  return guarded([&] {
    auto clusters = dendra::queries::flat_clustering(
        sld->state, {dendra::Weight(tau), strict != 0});
    *out = copy_out(flat_text(clusters));
  });
}

dendra_status dendra_gen_random_forest(uint32_t num_vertices, uint32_t num_edges,
                                       uint64_t seed, char** out_forest_text) {
  return guarded([&] {
    auto forest = dendra::oracle::gen_random_forest(num_vertices, num_edges, seed);
    *out_forest_text = copy_out(forest_text(forest.num_vertices, forest.edges));
  });
}

dendra_status dendra_gen_update_stream(const char* forest_text_in, uint32_t ops,
                                       uint64_t seed, const char* profile,
                                       uint32_t batch_size,
                                       char** out_updates_text) {
  return guarded([&] {
    // Parse the forest file format: "n <count>" then "e <u> <v> <w>" lines.
    dendra::oracle::RandomForest forest{0, {}};
    std::istringstream in(forest_text_in);
    std::string tag;
    while (in >> tag) {
      if (tag == "n") {
        in >> forest.num_vertices;
      } else if (tag == "e") {
        uint32_t u, v;
        std::string w;
        in >> u >> v >> w;
        forest.edges.push_back(dendra::Edge(u, v, dendra::Weight::parse(w)));
      } else {
        throw dendra::Error(dendra::ErrorCode::parse_error,
                            "unknown forest line tag '" + tag + "'");
      }
    }
    std::string name = profile == nullptr ? "mixed" : profile;
    dendra::oracle::StreamProfile p;
    if (name == "insert-heavy") {
      p = dendra::oracle::StreamProfile::insert_heavy;
    } else if (name == "delete-heavy") {
      p = dendra::oracle::StreamProfile::delete_heavy;
    } else if (name == "mixed") {
      p = dendra::oracle::StreamProfile::mixed;
    } else if (name == "batch") {
      p = dendra::oracle::StreamProfile::batch;
    } else {
      throw dendra::Error(dendra::ErrorCode::invalid_argument,
                          "unknown profile '" + name + "'");
    }
    auto stream = dendra::oracle::gen_update_stream(forest, ops, seed, p, batch_size);
    std::string out;
    for (const auto& u : stream) {
      switch (u.kind) {
        case dendra::oracle::Update::Kind::insert:
          out += "+ " + std::to_string(u.edges[0].key.lo) + " " +
                 std::to_string(u.edges[0].key.hi) + " " + u.edges[0].weight.str() +
                 "\n";
          break;
        case dendra::oracle::Update::Kind::erase:
          out += "- " + std::to_string(u.edges[0].key.lo) + " " +
                 std::to_string(u.edges[0].key.hi) + "\n";
          break;
        case dendra::oracle::Update::Kind::batch_insert:
          out += "B+ " + std::to_string(u.edges.size()) + "\n";
          for (const auto& e : u.edges) {
            out += std::to_string(e.key.lo) + " " + std::to_string(e.key.hi) + " " +
                   e.weight.str() + "\n";
          }
          break;
        case dendra::oracle::Update::Kind::batch_erase:
          out += "B- " + std::to_string(u.edges.size()) + "\n";
          for (const auto& e : u.edges) {
            out += std::to_string(e.key.lo) + " " + std::to_string(e.key.hi) + "\n";
          }
          break;
      }
    }
    *out_updates_text = copy_out(out);
  });
}

dendra_status dendra_gen_theorem(uint32_t height, uint32_t num_stars,
                                 char** out_forest_text, char** out_updates_text) {
  return guarded([&] {
    auto inst = dendra::oracle::gen_theorem_instance(height, num_stars);
    *out_forest_text = copy_out(forest_text(inst.num_vertices, inst.edges));
    std::string updates;
    updates += "+ " + std::to_string(inst.centers[0]) + " " +
               std::to_string(inst.centers[1]) + " 0\n";
    updates += "- " + std::to_string(inst.centers[0]) + " " +
               std::to_string(inst.centers[1]) + "\n";
    *out_updates_text = copy_out(updates);
  });
}

dendra_status dendra_cartesian_create(int max_root, dendra_cartesian** out) {
  return guarded([&] {
    *out = new dendra_cartesian{
        dendra::CartesianTree(max_root != 0 ? dendra::CartesianTree::Order::max_root
                                            : dendra::CartesianTree::Order::min_root)};
  });
}

void dendra_cartesian_destroy(dendra_cartesian* cart) { delete cart; }

dendra_status dendra_cartesian_push(dendra_cartesian* cart, int back, double value,
                                    dendra_report* report) {
  return guarded([&] {
    auto r = cart->tree.push(back != 0 ? dendra::CartesianEnd::back
                                       : dendra::CartesianEnd::front,
                             value);
    fill_report(r, report);
  });
}

dendra_status dendra_cartesian_pop(dendra_cartesian* cart, int back,
                                   dendra_report* report) {
  return guarded([&] {
    auto r = cart->tree.pop(back != 0 ? dendra::CartesianEnd::back
                                      : dendra::CartesianEnd::front);
    fill_report(r, report);
  });
}

dendra_status dendra_cartesian_insert_at(dendra_cartesian* cart, size_t pos,
                                         double value, dendra_report* report) {
  return guarded([&] {
    auto r = cart->tree.insert_at(pos, value);
    fill_report(r, report);
  });
}

dendra_status dendra_cartesian_delete_at(dendra_cartesian* cart, size_t pos,
                                         dendra_report* report) {
  return guarded([&] {
    auto r = cart->tree.delete_at(pos);
    fill_report(r, report);
  });
}

dendra_status dendra_cartesian_size(const dendra_cartesian* cart, size_t* out) {
  return guarded([&] { *out = cart->tree.size(); });
}

dendra_status dendra_cartesian_in_order(const dendra_cartesian* cart,
                                        double** out_values, size_t* out_count) {
  return guarded([&] {
    auto values = cart->tree.in_order();
    *out_count = values.size();
    *out_values = static_cast<double*>(std::malloc(sizeof(double) * values.size()));
    std::copy(values.begin(), values.end(), *out_values);
  });
}

dendra_status dendra_cartesian_verify(const dendra_cartesian* cart) {
  return guarded([&] { cart->tree.verify(); });
}

}  // extern "C"
