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
//
// File-driven front end over the shared C API: build a forest, apply an
// update stream in a chosen mode, run clustering queries, replay
// Cartesian op streams, verify against the built-in reference, and emit
// per-update statistics. Exit codes: 0 ok, 1 verify mismatch, 2 input or
// usage error.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dendra/dendra.h"

namespace {

using nlohmann::json;

class CliError : public std::runtime_error {
 public:
  CliError(const std::string& msg, int exit_code = 2)
      : std::runtime_error(msg), exit_code(exit_code) {}
  int exit_code;
};

void check(dendra_status status, const std::string& context) {
  if (status != DENDRA_OK) {
    throw CliError(context + ": " + dendra_status_name(status) + " (" +
                   dendra_last_error() + ")");
  }
}

struct Buffer {
  char* data = nullptr;
  ~Buffer() { dendra_buffer_free(data); }
  std::string str() const { return data == nullptr ? "" : data; }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliError("cannot open '" + path + "'");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::vector<std::string> tokens_of(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::uint32_t parse_u32(const std::string& tok, const std::string& where) {
  try {
    std::size_t pos = 0;
    unsigned long v = std::stoul(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return static_cast<std::uint32_t>(v);
  } catch (const std::exception&) {
    throw CliError(where + ": bad integer '" + tok + "'");
  }
}

double parse_weight(const std::string& tok, const std::string& where) {
  try {
    std::size_t pos = 0;
    double v = std::stod(tok, &pos);
    if (pos != tok.size() || !std::isfinite(v)) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw CliError(where + ": bad weight '" + tok + "'");
  }
}

struct ForestFile {
  std::uint32_t n = 0;
  std::vector<std::uint32_t> us, vs;
  std::vector<double> ws;
};

// "n <count>" header, then "e <u> <v> <w>" lines.
ForestFile parse_forest(const std::string& text, const std::string& name) {
  ForestFile out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool have_n = false;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = tokens_of(line);
    if (toks.empty() || toks[0][0] == '#') continue;
    std::string where = name + ":" + std::to_string(lineno);
    if (toks[0] == "n" && toks.size() == 2) {
      out.n = parse_u32(toks[1], where);
      have_n = true;
    } else if (toks[0] == "e" && toks.size() == 4) {
      out.us.push_back(parse_u32(toks[1], where));
      out.vs.push_back(parse_u32(toks[2], where));
      out.ws.push_back(parse_weight(toks[3], where));
    } else {
      throw CliError(where + ": unrecognized forest line '" + line + "'");
    }
  }
  if (!have_n) throw CliError(name + ": missing 'n <count>' header");
  return out;
}

struct UpdateOp {
  enum class Kind { insert, erase, batch_insert, batch_erase } kind;
  std::vector<std::uint32_t> us, vs;
  std::vector<double> ws;
  int lineno = 0;
};

// "+ u v w", "- u v", and homogeneous batch blocks "B+ k" / "B- k"
// followed by k edge lines.
std::vector<UpdateOp> parse_updates(const std::string& text, const std::string& name) {
  std::vector<UpdateOp> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto next_line = [&](std::vector<std::string>& toks) {
    while (std::getline(in, line)) {
      ++lineno;
      toks = tokens_of(line);
      if (!toks.empty() && toks[0][0] != '#') return true;
    }
    return false;
  };
  std::vector<std::string> toks;
  while (next_line(toks)) {
    std::string where = name + ":" + std::to_string(lineno);
    UpdateOp op;
    op.lineno = lineno;
    if (toks[0] == "+" && toks.size() == 4) {
      op.kind = UpdateOp::Kind::insert;
      op.us.push_back(parse_u32(toks[1], where));
      op.vs.push_back(parse_u32(toks[2], where));
      op.ws.push_back(parse_weight(toks[3], where));
    } else if (toks[0] == "-" && toks.size() == 3) {
      op.kind = UpdateOp::Kind::erase;
      op.us.push_back(parse_u32(toks[1], where));
      op.vs.push_back(parse_u32(toks[2], where));
    } else if ((toks[0] == "B+" || toks[0] == "B-") && toks.size() == 2) {
      bool inserting = toks[0] == "B+";
      op.kind = inserting ? UpdateOp::Kind::batch_insert : UpdateOp::Kind::batch_erase;
      std::uint32_t k = parse_u32(toks[1], where);
      for (std::uint32_t i = 0; i < k; ++i) {
        std::vector<std::string> row;
        if (!next_line(row)) {
          throw CliError(where + ": batch truncated after " + std::to_string(i) +
                         " of " + std::to_string(k) + " edges");
        }
        std::string rwhere = name + ":" + std::to_string(lineno);
        if (row.size() != (inserting ? 3u : 2u)) {
          throw CliError(rwhere + ": bad batch edge line");
        }
        op.us.push_back(parse_u32(row[0], rwhere));
        op.vs.push_back(parse_u32(row[1], rwhere));
        if (inserting) op.ws.push_back(parse_weight(row[2], rwhere));
      }
    } else {
      throw CliError(where + ": unrecognized update line '" + line + "'");
    }
    out.push_back(std::move(op));
  }
  return out;
}

using SldHandle = std::unique_ptr<dendra_sld, decltype(&dendra_sld_destroy)>;

SldHandle build_state(const ForestFile& forest) {
  dendra_sld* raw = nullptr;
  check(dendra_sld_create_with_edges(forest.n, forest.us.data(), forest.vs.data(),
                                     forest.ws.data(), forest.us.size(), &raw),
        "building the forest");
  return SldHandle(raw, &dendra_sld_destroy);
}

const char* op_tag(UpdateOp::Kind kind) {
  switch (kind) {
    case UpdateOp::Kind::insert: return "+";
    case UpdateOp::Kind::erase: return "-";
    case UpdateOp::Kind::batch_insert: return "B+";
    case UpdateOp::Kind::batch_erase: return "B-";
  }
  return "?";
}

json report_json(const UpdateOp& op, const dendra_report& r) {
  json j;
  j["op"] = op_tag(op.kind);
  j["edges"] = op.us.size();
  j["pointer_changes"] = r.pointer_changes;
  j["pws_queries"] = r.pws_queries;
  j["median_queries"] = r.median_queries;
  j["rc_nodes_visited"] = r.rc_nodes_visited;
  j["dendrogram_height"] = r.dendrogram_height;
  j["dc_recursion_depth"] = r.dc_recursion_depth;
  j["contraction_rounds"] = r.contraction_rounds;
  j["max_pws_node_visits"] = r.max_pws_node_visits;
  j["spine_count"] = r.spine_count;
  j["spine_length_max"] = r.spine_length_max;
  j["merge_pws_queries"] =
      std::vector<std::uint64_t>(r.merge_pws_queries,
                                 r.merge_pws_queries + r.merge_count);
  j["merge_pointer_changes"] =
      std::vector<std::uint64_t>(r.merge_pointer_changes,
                                 r.merge_pointer_changes + r.merge_count);
  j["elapsed_seconds"] = r.elapsed_seconds;
  return j;
}

dendra_status apply_op(dendra_sld* sld, const UpdateOp& op, dendra_mode mode,
                       dendra_report* report) {
  switch (op.kind) {
    case UpdateOp::Kind::insert:
      return dendra_sld_insert(sld, op.us[0], op.vs[0], op.ws[0], mode, report);
    case UpdateOp::Kind::erase:
      return dendra_sld_delete(sld, op.us[0], op.vs[0], mode, report);
    case UpdateOp::Kind::batch_insert:
      return dendra_sld_batch_insert(sld, op.us.data(), op.vs.data(), op.ws.data(),
                                     op.us.size(), report);
    case UpdateOp::Kind::batch_erase:
      return dendra_sld_batch_delete(sld, op.us.data(), op.vs.data(), op.us.size(),
                                     report);
  }
  return DENDRA_E_INVALID_ARGUMENT;
}

// First differing line of the two serializations.
void print_verify_diff(const std::string& got, const std::string& expect) {
  std::istringstream a(got), b(expect);
  std::string la, lb;
  int lineno = 0;
  while (true) {
    bool ha = static_cast<bool>(std::getline(a, la));
    bool hb = static_cast<bool>(std::getline(b, lb));
    ++lineno;
    if (!ha && !hb) break;
    if (la != lb || ha != hb) {
      std::cerr << "verify mismatch at serialization line " << lineno << "\n"
                << "  maintained: " << (ha ? la : "<end>") << "\n"
                << "  reference:  " << (hb ? lb : "<end>") << "\n";
      return;
    }
  }
}

int cmd_run(const std::string& forest_path, const std::string& updates_path,
            const std::string& mode_name, bool verify, const std::string& stats_path,
            unsigned threads) {
  dendra_mode mode;
  if (mode_name == "seq-h") {
    mode = DENDRA_MODE_SEQ_H;
  } else if (mode_name == "seq-os") {
    mode = DENDRA_MODE_SEQ_OS;
  } else if (mode_name == "par-h") {
    mode = DENDRA_MODE_PAR_H;
  } else if (mode_name == "par-os") {
    mode = DENDRA_MODE_PAR_OS;
  } else {
    throw CliError("unknown mode '" + mode_name + "'");
  }
  dendra_set_parallelism_hint(threads);
  ForestFile forest = parse_forest(read_file(forest_path), forest_path);
  auto updates = parse_updates(read_file(updates_path), updates_path);
  SldHandle sld = build_state(forest);

  std::ofstream stats;
  if (!stats_path.empty()) {
    stats.open(stats_path);
    if (!stats) throw CliError("cannot write '" + stats_path + "'");
  }

  for (const UpdateOp& op : updates) {
    dendra_report report;
    dendra_status status = apply_op(sld.get(), op, mode, &report);
    if (status != DENDRA_OK) {
      throw CliError(updates_path + ":" + std::to_string(op.lineno) +
                     ": update failed: " + dendra_status_name(status) + " (" +
                     dendra_last_error() + ")");
    }
    if (stats.is_open()) stats << report_json(op, report).dump() << "\n";
    if (verify) {
      Buffer got, expect;
      check(dendra_sld_serialize(sld.get(), &got.data), "serialize");
      check(dendra_sld_oracle_serialize(sld.get(), &expect.data), "reference");
      if (got.str() != expect.str()) {
        std::cerr << updates_path << ":" << op.lineno << ": ";
        print_verify_diff(got.str(), expect.str());
        return 1;
      }
    }
  }
  std::cout << "applied " << updates.size() << " updates\n";
  return 0;
}

int cmd_query(const std::string& forest_path, const std::string& queries_path,
              bool strict) {
  ForestFile forest = parse_forest(read_file(forest_path), forest_path);
  SldHandle sld = build_state(forest);
  std::istringstream in(read_file(queries_path));
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = tokens_of(line);
    if (toks.empty() || toks[0][0] == '#') continue;
    std::string where = queries_path + ":" + std::to_string(lineno);
    if (toks[0] == "qt" && toks.size() == 4) {
      int result = 0;
      check(dendra_query_threshold(sld.get(), parse_u32(toks[1], where),
                                   parse_u32(toks[2], where),
                                   parse_weight(toks[3], where), strict, &result),
            where);
      std::cout << (result ? "true" : "false") << "\n";
    } else if (toks[0] == "qs" && toks.size() == 3) {
      std::uint32_t size = 0;
      check(dendra_query_cluster_size(sld.get(), parse_u32(toks[1], where),
                                      parse_weight(toks[2], where), strict, &size),
            where);
      std::cout << size << "\n";
    } else if (toks[0] == "qr" && toks.size() == 3) {
      std::uint32_t* members = nullptr;
      std::size_t count = 0;
      check(dendra_query_cluster(sld.get(), parse_u32(toks[1], where),
                                 parse_weight(toks[2], where), strict, &members,
                                 &count),
            where);
      std::cout << "{";
      for (std::size_t i = 0; i < count; ++i) {
        std::cout << (i > 0 ? " " : "") << members[i];
      }
      std::cout << "}\n";
      dendra_buffer_free(members);
    } else if (toks[0] == "flat" && toks.size() == 2) {
      Buffer text;
      check(dendra_query_flat(sld.get(), parse_weight(toks[1], where), strict,
                              &text.data),
            where);
      std::cout << text.str() << "\n";
    } else {
      throw CliError(where + ": unrecognized query line '" + line + "'");
    }
  }
  return 0;
}

struct BenchSpec {
  enum class Kind { theorem, random } kind;
  std::uint32_t h = 2, stars = 2;
  std::uint32_t n = 256, m = 128, ops = 1000;
  std::uint64_t seed = 1;
  std::string profile = "mixed";
  std::uint32_t batch = 8;
};

BenchSpec parse_bench_spec(const std::string& text) {
  BenchSpec spec;
  auto toks = tokens_of(text);
  if (toks.empty()) throw CliError("empty bench spec");
  if (toks[0] == "theorem") {
    spec.kind = BenchSpec::Kind::theorem;
  } else if (toks[0] == "random") {
    spec.kind = BenchSpec::Kind::random;
  } else {
    throw CliError("bench spec must start with 'theorem' or 'random'");
  }
  for (std::size_t i = 1; i < toks.size(); ++i) {
    auto eq = toks[i].find('=');
    if (eq == std::string::npos) throw CliError("bad bench field '" + toks[i] + "'");
    std::string key = toks[i].substr(0, eq), value = toks[i].substr(eq + 1);
    if (key == "h") {
      spec.h = parse_u32(value, "spec");
    } else if (key == "stars") {
      spec.stars = parse_u32(value, "spec");
    } else if (key == "n") {
      spec.n = parse_u32(value, "spec");
    } else if (key == "m") {
      spec.m = parse_u32(value, "spec");
    } else if (key == "ops") {
      spec.ops = parse_u32(value, "spec");
    } else if (key == "seed") {
      spec.seed = parse_u32(value, "spec");
    } else if (key == "profile") {
      spec.profile = value;
    } else if (key == "batch") {
      spec.batch = parse_u32(value, "spec");
    } else {
      throw CliError("unknown bench field '" + key + "'");
    }
  }
  return spec;
}

int cmd_bench(const std::string& spec_text, const std::string& mode_name,
              std::uint32_t reps, unsigned threads, const std::string& stats_path) {
  BenchSpec spec = parse_bench_spec(spec_text);
  dendra_set_parallelism_hint(threads);
  dendra_mode mode = DENDRA_MODE_SEQ_H;
  if (mode_name == "seq-h") {
    mode = DENDRA_MODE_SEQ_H;
  } else if (mode_name == "seq-os") {
    mode = DENDRA_MODE_SEQ_OS;
  } else if (mode_name == "par-h") {
    mode = DENDRA_MODE_PAR_H;
  } else if (mode_name == "par-os") {
    mode = DENDRA_MODE_PAR_OS;
  } else {
    throw CliError("unknown mode '" + mode_name + "'");
  }

  std::string forest_text, updates_text;
  {
    Buffer forest_buf, updates_buf;
    if (spec.kind == BenchSpec::Kind::theorem) {
      check(dendra_gen_theorem(spec.h, spec.stars, &forest_buf.data,
                               &updates_buf.data),
            "theorem generator");
      spec.n = spec.stars * (spec.h + 1);
    } else {
      check(dendra_gen_random_forest(spec.n, spec.m, spec.seed, &forest_buf.data),
            "forest generator");
      check(dendra_gen_update_stream(forest_buf.data, spec.ops, spec.seed + 1,
                                     spec.profile.c_str(), spec.batch,
                                     &updates_buf.data),
            "stream generator");
    }
    forest_text = forest_buf.str();
    updates_text = updates_buf.str();
  }
  ForestFile forest = parse_forest(forest_text, "<generated forest>");
  auto updates = parse_updates(updates_text, "<generated updates>");

  std::ofstream stats;
  if (!stats_path.empty()) {
    stats.open(stats_path);
    if (!stats) throw CliError("cannot write '" + stats_path + "'");
  }

  std::vector<double> elapsed;
  double sum_changes = 0, sum_pws = 0, sum_visited = 0;
  std::uint64_t op_count = 0;
  double scaling_constant = 0;
  for (std::uint32_t rep = 0; rep < reps; ++rep) {
    SldHandle sld = build_state(forest);
    for (const UpdateOp& op : updates) {
      dendra_report report;
      dendra_status status = apply_op(sld.get(), op, mode, &report);
      if (status != DENDRA_OK) {
        throw CliError("bench update failed: " +
                       std::string(dendra_status_name(status)));
      }
      if (stats.is_open()) stats << report_json(op, report).dump() << "\n";
      ++op_count;
      elapsed.push_back(report.elapsed_seconds);
      sum_changes += static_cast<double>(report.pointer_changes);
      sum_pws += static_cast<double>(report.pws_queries);
      sum_visited += static_cast<double>(report.rc_nodes_visited);
      if (op.kind == UpdateOp::Kind::insert && report.pointer_changes > 0) {
        double c = static_cast<double>(report.pointer_changes);
        double denom = c * std::log2(2.0 + static_cast<double>(spec.n) / c);
        scaling_constant =
            std::max(scaling_constant,
                     static_cast<double>(report.rc_nodes_visited) / denom);
      }
    }
  }

  json out;
  out["spec"] = spec_text;
  out["mode"] = mode_name;
  out["reps"] = reps;
  out["ops"] = op_count;
  if (op_count > 0) {
    std::sort(elapsed.begin(), elapsed.end());
    double total = 0;
    for (double e : elapsed) total += e;
    out["elapsed_mean_seconds"] = total / static_cast<double>(op_count);
    out["elapsed_p50_seconds"] = elapsed[elapsed.size() / 2];
    out["elapsed_p99_seconds"] = elapsed[elapsed.size() * 99 / 100];
    out["mean_pointer_changes"] = sum_changes / static_cast<double>(op_count);
    out["mean_pws_queries"] = sum_pws / static_cast<double>(op_count);
    out["mean_rc_nodes_visited"] = sum_visited / static_cast<double>(op_count);
    out["scaling_constant"] = scaling_constant;
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_cartesian(const std::string& ops_path, bool verify) {
  std::istringstream in(read_file(ops_path));
  dendra_cartesian* raw = nullptr;
  check(dendra_cartesian_create(0, &raw), "cartesian create");
  std::unique_ptr<dendra_cartesian, decltype(&dendra_cartesian_destroy)> cart(
      raw, &dendra_cartesian_destroy);

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = tokens_of(line);
    if (toks.empty() || toks[0][0] == '#') continue;
    std::string where = ops_path + ":" + std::to_string(lineno);
    dendra_report report;
    if (toks[0] == "order" && toks.size() == 2) {
      std::size_t size = 0;
      check(dendra_cartesian_size(cart.get(), &size), where);
      if (size != 0) throw CliError(where + ": order must precede operations");
      dendra_cartesian* fresh = nullptr;
      check(dendra_cartesian_create(toks[1] == "max" ? 1 : 0, &fresh), where);
      cart.reset(fresh);
      continue;
    } else if (toks[0] == "build") {
      for (std::size_t i = 1; i < toks.size(); ++i) {
        check(dendra_cartesian_push(cart.get(), 1, parse_weight(toks[i], where),
                                    &report),
              where);
      }
    } else if (toks[0] == "append" && toks.size() == 2) {
      check(dendra_cartesian_push(cart.get(), 1, parse_weight(toks[1], where),
                                  &report),
            where);
    } else if (toks[0] == "prepend" && toks.size() == 2) {
      check(dendra_cartesian_push(cart.get(), 0, parse_weight(toks[1], where),
                                  &report),
            where);
    } else if (toks[0] == "popback" && toks.size() == 1) {
      check(dendra_cartesian_pop(cart.get(), 1, &report), where);
    } else if (toks[0] == "popfront" && toks.size() == 1) {
      check(dendra_cartesian_pop(cart.get(), 0, &report), where);
    } else if (toks[0] == "insat" && toks.size() == 3) {
      check(dendra_cartesian_insert_at(cart.get(), parse_u32(toks[1], where),
                                       parse_weight(toks[2], where), &report),
            where);
    } else if (toks[0] == "delat" && toks.size() == 2) {
      check(dendra_cartesian_delete_at(cart.get(), parse_u32(toks[1], where),
                                       &report),
            where);
    } else {
      throw CliError(where + ": unrecognized cartesian op '" + line + "'");
    }
    if (verify) {
      dendra_status status = dendra_cartesian_verify(cart.get());
      if (status != DENDRA_OK) {
        std::cerr << where << ": verify failed: " << dendra_status_name(status)
                  << "\n";
        return 1;
      }
    }
  }
  double* values = nullptr;
  std::size_t count = 0;
  check(dendra_cartesian_in_order(cart.get(), &values, &count), "in-order");
  std::cout << "inorder:";
  for (std::size_t i = 0; i < count; ++i) std::cout << " " << values[i];
  std::cout << "\n";
  dendra_buffer_free(values);
  return 0;
}

void write_file(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw CliError("cannot write '" + path + "'");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dynamic single-linkage dendrograms over a weighted forest"};
  app.require_subcommand(1);

  std::string forest_path, updates_path, queries_path, stats_path, ops_path;
  std::string mode_name = "seq-h";
  std::string bench_spec;
  std::string out_path = "-", out_updates_path = "-";
  bool verify = false, strict = false;
  unsigned threads = 1;
  std::uint32_t reps = 1;
  std::uint32_t gen_n = 256, gen_m = 128, gen_ops = 1000, gen_batch = 8;
  std::uint32_t gen_h = 2, gen_stars = 2;
  std::uint64_t gen_seed = 1;
  std::string gen_profile = "mixed";

  auto* run = app.add_subcommand("run", "apply an update stream");
  run->add_option("--forest", forest_path)->required();
  run->add_option("--updates", updates_path)->required();
  run->add_option("--mode", mode_name)
      ->check(CLI::IsMember({"seq-h", "seq-os", "par-h", "par-os"}));
  run->add_flag("--verify", verify, "re-derive the dendrogram after every update");
  run->add_option("--stats", stats_path, "per-update JSON lines");
  run->add_option("--threads", threads);

  auto* query = app.add_subcommand("query", "run clustering queries");
  query->add_option("--forest", forest_path)->required();
  query->add_option("--queries", queries_path)->required();
  query->add_flag("--strict", strict, "merge strictly below the threshold");

  auto* bench = app.add_subcommand("bench", "generate, apply, and aggregate");
  bench->add_option("--spec", bench_spec)->required();
  bench->add_option("--mode", mode_name)
      ->check(CLI::IsMember({"seq-h", "seq-os", "par-h", "par-os"}));
  bench->add_option("--reps", reps);
  bench->add_option("--threads", threads);
  bench->add_option("--stats", stats_path);

  auto* cart = app.add_subcommand("cartesian", "replay a Cartesian op stream");
  cart->add_option("--ops", ops_path)->required();
  cart->add_flag("--verify", verify);

  auto* gen = app.add_subcommand("gen", "emit fixture files");
  auto* gen_forest = gen->add_subcommand("forest");
  gen_forest->add_option("--n", gen_n);
  gen_forest->add_option("--m", gen_m);
  gen_forest->add_option("--seed", gen_seed);
  gen_forest->add_option("--out", out_path);
  auto* gen_stream = gen->add_subcommand("stream");
  gen_stream->add_option("--forest", forest_path)->required();
  gen_stream->add_option("--ops", gen_ops);
  gen_stream->add_option("--seed", gen_seed);
  gen_stream->add_option("--profile", gen_profile)
      ->check(CLI::IsMember({"insert-heavy", "delete-heavy", "mixed", "batch"}));
  gen_stream->add_option("--batch", gen_batch);
  gen_stream->add_option("--out", out_path);
  auto* gen_theorem = gen->add_subcommand("theorem");
  gen_theorem->add_option("--height", gen_h);
  gen_theorem->add_option("--stars", gen_stars);
  gen_theorem->add_option("--out-forest", out_path);
  gen_theorem->add_option("--out-updates", out_updates_path);
  gen->require_subcommand(1);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return cmd_run(forest_path, updates_path, mode_name, verify, stats_path,
                     threads);
    }
    if (query->parsed()) return cmd_query(forest_path, queries_path, strict);
    if (bench->parsed()) {
      return cmd_bench(bench_spec, mode_name, reps, threads, stats_path);
    }
    if (cart->parsed()) return cmd_cartesian(ops_path, verify);
    if (gen->parsed()) {
      if (gen_forest->parsed()) {
        Buffer text;
        check(dendra_gen_random_forest(gen_n, gen_m, gen_seed, &text.data), "gen");
        write_file(out_path, text.str());
      } else if (gen_stream->parsed()) {
        Buffer text;
        check(dendra_gen_update_stream(read_file(forest_path).c_str(), gen_ops,
                                       gen_seed, gen_profile.c_str(), gen_batch,
                                       &text.data),
              "gen");
        write_file(out_path, text.str());
      } else if (gen_theorem->parsed()) {
        Buffer forest_text, updates_text;
        check(dendra_gen_theorem(gen_h, gen_stars, &forest_text.data,
                                 &updates_text.data),
              "gen");
        write_file(out_path, forest_text.str());
        write_file(out_updates_path, updates_text.str());
      }
      return 0;
    }
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code;
  }
  return 0;
}
