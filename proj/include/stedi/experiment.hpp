#pragma once

#include <atomic>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "stedi/config_io.hpp"
#include "stedi/constructors.hpp"
#include "stedi/embedder.hpp"
#include "stedi/results.hpp"
#include "stedi/treespec.hpp"

namespace stedi {

/// A seeded grid of embedding trials: (sts kind x n x d x mu x matcher)
/// crossed with `seeds` per-point trials.
struct ExperimentSpec {
  std::string kind = "bose";
  std::vector<std::uint32_t> n_values;
  std::vector<std::uint32_t> d_values{1};
  std::vector<double> mu_values{0.25};
  std::vector<MatcherKind> matchers{MatcherKind::nibble};
  std::uint32_t seeds = 10;
  std::uint64_t master_seed = 0;
  std::string tree = "largest";
  EmbedConfig base;
  std::uint32_t threads = 1;
};

inline ExperimentSpec parse_experiment_spec(const nlohmann::json& j) {
  ExperimentSpec spec;
  if (j.contains("sts")) {
    const auto& sts = j.at("sts");
    if (sts.contains("kind")) spec.kind = sts.at("kind").get<std::string>();
    if (sts.contains("n")) {
      if (sts.at("n").is_array())
        spec.n_values = sts.at("n").get<std::vector<std::uint32_t>>();
      else
        spec.n_values = {sts.at("n").get<std::uint32_t>()};
    }
  }
  if (j.contains("d")) spec.d_values = j.at("d").get<std::vector<std::uint32_t>>();
  if (j.contains("mu")) spec.mu_values = j.at("mu").get<std::vector<double>>();
  if (j.contains("matcher")) {
    spec.matchers.clear();
    for (const auto& name : j.at("matcher")) {
      const std::string s = name.get<std::string>();
      if (s == "greedy") spec.matchers.push_back(MatcherKind::greedy);
      else if (s == "nibble") spec.matchers.push_back(MatcherKind::nibble);
      else throw std::invalid_argument("unknown matcher '" + s + "'");
    }
  }
  if (j.contains("seeds")) spec.seeds = j.at("seeds").get<std::uint32_t>();
  if (j.contains("master_seed"))
    spec.master_seed = j.at("master_seed").get<std::uint64_t>();
  if (j.contains("tree")) spec.tree = j.at("tree").get<std::string>();
  if (j.contains("threads")) spec.threads = j.at("threads").get<std::uint32_t>();
  if (j.contains("config")) {
    // reuse the flat key=value parser on the json object
    std::ostringstream flat;
    for (auto it = j.at("config").begin(); it != j.at("config").end(); ++it) {
      flat << it.key() << "=";
      if (it.value().is_string())
        flat << it.value().get<std::string>();
      else
        flat << it.value().dump();
      flat << "\n";
    }
    std::istringstream is(flat.str());
    spec.base = parse_config(is, spec.base);
  }

  if (spec.kind != "bose" && spec.kind != "skolem" && spec.kind != "random")
    throw std::invalid_argument("sts kind must be bose, skolem or random");
  if (spec.n_values.empty() || spec.d_values.empty() || spec.mu_values.empty() ||
      spec.matchers.empty() || spec.seeds == 0)
    throw std::invalid_argument("experiment grid is empty");
  for (std::uint32_t n : spec.n_values) {
    if (spec.kind == "bose" && n % 6 != 3)
      throw std::invalid_argument("bose order must be 3 (mod 6)");
    if (spec.kind == "skolem" && (n % 6 != 1 || n < 7))
      throw std::invalid_argument("skolem order must be 1 (mod 6), >= 7");
    if (spec.kind == "random" && !sts_order_admissible(n))
      throw std::invalid_argument("random order must be 1 or 3 (mod 6)");
  }
  return spec;
}

inline ExperimentSpec load_experiment_spec(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  nlohmann::json j;
  f >> j;
  return parse_experiment_spec(j);
}

struct SweepSummaryRow {
  std::string kind;
  std::uint32_t n = 0;
  std::uint64_t m = 0;
  std::uint32_t d = 0;
  double mu = 0;
  std::string matcher;
  std::uint32_t trials = 0;
  std::uint32_t successes = 0;
  double success_rate = 0;
  double mean_leave = 0;
  double mean_reservoir = 0;
};

/// Runs the whole grid. Grid points run one after another (so only one
/// triple system is resident); trials inside a point fan out over a small
/// worker pool. The JSONL is ordered by trial index and excludes timings,
/// so a fixed master seed reproduces it byte for byte.
inline std::vector<SweepSummaryRow> run_sweep(const ExperimentSpec& spec,
                                              std::ostream& jsonl,
                                              std::ostream& csv) {
  struct Point {
    std::uint32_t n, d;
    double mu;
    MatcherKind matcher;
  };
  std::vector<Point> points;
  for (std::uint32_t n : spec.n_values)
    for (std::uint32_t d : spec.d_values)
      for (double mu : spec.mu_values)
        for (MatcherKind mk : spec.matchers) points.push_back({n, d, mu, mk});

  std::vector<SweepSummaryRow> summary;
  std::uint64_t trial_base = 0;
  for (std::uint32_t pi = 0; pi < points.size(); ++pi) {
    const Point& pt = points[pi];

    TripleSystem sys = [&]() {
      if (spec.kind == "bose") return bose(pt.n);
      if (spec.kind == "skolem") return skolem(pt.n);
      auto r = random_sts(pt.n, derive_seed(spec.master_seed, 900000 + pt.n));
      if (!r) throw std::runtime_error("random_sts did not converge");
      return std::move(*r);
    }();
    const Hypertree tree = make_tree(spec.tree, pt.d, pt.mu, sys.vertex_count());

    std::vector<std::string> lines(spec.seeds);
    struct TrialAgg {
      bool ok = false;
      double leave = 0;
      std::uint64_t reservoir = 0;
    };
    std::vector<TrialAgg> agg(spec.seeds);

    std::atomic<std::uint32_t> next{0};
    auto worker = [&]() {
      while (true) {
        const std::uint32_t s = next.fetch_add(1);
        if (s >= spec.seeds) break;
        EmbedConfig cfg = spec.base;
        cfg.mu = pt.mu;
        cfg.matcher = pt.matcher;
        cfg.seed = derive_seed(spec.master_seed, trial_base + s);
        ordered_json line;
        try {
          EmbedResult res = embed(sys, tree, cfg);
          line = trial_json(sys, tree, cfg, cfg.seed, res.trace, false);
          agg[s].ok = res.ok();
          agg[s].reservoir = res.trace.reservoir_used;
          double lv = 0;
          for (const LevelTrace& lt : res.trace.per_level) lv += lt.leave_fraction;
          agg[s].leave = res.trace.per_level.empty()
                             ? 0.0
                             : lv / static_cast<double>(res.trace.per_level.size());
        } catch (const std::exception& ex) {
          line = ordered_json{{"n", tree.vertex_count()},
                              {"m", sys.vertex_count()},
                              {"seed", cfg.seed},
                              {"outcome", std::string("failed:exception:") + ex.what()}};
        }
        line["trial"] = trial_base + s;
        line["sts_kind"] = spec.kind;
        line["matcher"] = pt.matcher == MatcherKind::greedy ? "greedy" : "nibble";
        lines[s] = line.dump();
      }
    };
    std::vector<std::thread> pool;
    const std::uint32_t nthreads = std::max(1u, spec.threads);
    for (std::uint32_t k = 0; k < nthreads; ++k) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();

    for (const std::string& line : lines) jsonl << line << '\n';

    SweepSummaryRow row;
    row.kind = spec.kind;
    row.n = pt.n;
    row.m = sys.vertex_count();
    row.d = pt.d;
    row.mu = pt.mu;
    row.matcher = pt.matcher == MatcherKind::greedy ? "greedy" : "nibble";
    row.trials = spec.seeds;
    for (const TrialAgg& a : agg) {
      if (a.ok) ++row.successes;
      row.mean_leave += a.leave;
      row.mean_reservoir += static_cast<double>(a.reservoir);
    }
    row.success_rate = static_cast<double>(row.successes) / row.trials;
    row.mean_leave /= row.trials;
    row.mean_reservoir /= row.trials;
    summary.push_back(row);
    trial_base += spec.seeds;
  }

  csv << "kind,n,m,d,mu,matcher,trials,successes,success_rate,mean_leave,"
         "mean_reservoir\n";
  for (const SweepSummaryRow& r : summary) {
    csv << r.kind << ',' << r.n << ',' << r.m << ',' << r.d << ',' << r.mu << ','
        << r.matcher << ',' << r.trials << ',' << r.successes << ','
        << r.success_rate << ',' << r.mean_leave << ',' << r.mean_reservoir
        << '\n';
  }
  return summary;
}

}  // namespace stedi
