#pragma once

#include <string>

#include <json.hpp>

#include "stedi/embedder.hpp"
#include "stedi/matching.hpp"
#include "stedi/partition.hpp"

namespace stedi {

using ordered_json = nlohmann::ordered_json;

inline ordered_json to_json(const MatchStats& s) {
  return ordered_json{{"n_vertices", s.n_vertices},
                      {"n_matched", s.n_matched},
                      {"leave_fraction", s.leave_fraction},
                      {"algorithm", s.algorithm},
                      {"seed", s.seed},
                      {"rounds", s.rounds}};
}

inline ordered_json to_json(const PartitionReport& rep) {
  ordered_json arr = ordered_json::array();
  for (const PropertyCheck& c : rep.checks) {
    arr.push_back(ordered_json{{"name", c.name},
                               {"enabled", c.enabled},
                               {"pass", c.pass},
                               {"violations", c.violations},
                               {"witness", c.witness},
                               {"note", c.note}});
  }
  return arr;
}

/// One trial in the results schema. Timings are skipped for sweep lines so
/// that a fixed master seed reproduces the JSONL byte for byte.
inline ordered_json trial_json(const TripleSystem& sys, const Hypertree& tree,
                               const EmbedConfig& cfg, std::uint64_t seed,
                               const PipelineTrace& trace,
                               bool include_timings) {
  ordered_json per_level = ordered_json::array();
  for (const LevelTrace& lt : trace.per_level) {
    per_level.push_back(ordered_json{{"N_i", lt.n_i},
                                     {"leave_fraction", lt.leave_fraction},
                                     {"U_i", lt.u_i}});
  }
  ordered_json failures = ordered_json::object();
  for (const auto& [k, v] : trace.partition_failures) failures[k] = v;
  ordered_json j{
      {"n", tree.vertex_count()},
      {"m", sys.vertex_count()},
      {"d", tree.max_forward_degree()},
      {"mu", cfg.mu},
      {"mode", mode_name(cfg.mode)},
      {"seed", seed},
      {"outcome", trace.outcome},
      {"stage_sizes",
       ordered_json{{"V_F", trace.v_f},
                    {"V_T1", trace.v_t1},
                    {"E_T1", trace.e_t1},
                    {"reservoir_used", trace.reservoir_used}}},
      {"per_level", per_level},
      {"fast_path",
       trace.fast_path_star ? "star"
                            : (trace.fast_path_greedy ? "greedy" : "none")},
      {"precondition_ok", trace.precondition_ok},
      {"retries_used", trace.retries_used},
      {"resamples_used", trace.resamples_used},
      {"partition_failures", failures},
  };
  if (include_timings) j["timings_ms"] = trace.ms_total;
  return j;
}

}  // namespace stedi
