// Command-line front door: generate Steiner triple systems, run single
// embeddings or seeded parameter sweeps, check files, and run the
// brute-force oracle on tiny instances.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "stedi/config_io.hpp"
#include "stedi/constructors.hpp"
#include "stedi/embedder.hpp"
#include "stedi/experiment.hpp"
#include "stedi/oracle.hpp"
#include "stedi/results.hpp"
#include "stedi/sts_io.hpp"
#include "stedi/tree_io.hpp"
#include "stedi/treespec.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("STEDI_SEED")) {
    try {
      return std::stoull(env);
    } catch (...) {
      std::cerr << "warning: ignoring non-numeric STEDI_SEED\n";
    }
  }
  return 0;
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << text;
}

int cmd_gen(const std::string& kind, std::uint32_t n, std::uint64_t seed,
            std::uint64_t max_iters, const std::string& out) {
  std::optional<stedi::TripleSystem> sys;
  if (kind == "bose") {
    if (n % 6 != 3) {
      std::cerr << "gen bose: n must be 3 (mod 6), got " << n << "\n";
      return kExitUsage;
    }
    sys = stedi::bose(n);
  } else if (kind == "skolem") {
    if (n % 6 != 1 || n < 7) {
      std::cerr << "gen skolem: n must be 1 (mod 6) and >= 7, got " << n << "\n";
      return kExitUsage;
    }
    sys = stedi::skolem(n);
  } else {  // random
    if (!stedi::sts_order_admissible(n)) {
      std::cerr << "gen random: n must be 1 or 3 (mod 6), got " << n << "\n";
      return kExitUsage;
    }
    sys = stedi::random_sts(n, seed, max_iters);
    if (!sys) {
      std::cerr << "gen random: hill climbing did not converge within budget\n";
      return kExitFailure;
    }
  }
  stedi::ValidationReport rep = stedi::validate_sts(*sys);
  if (!rep.valid()) {
    std::cerr << "internal error: generated system fails validation: "
              << rep.problems.front() << "\n";
    return kExitFailure;
  }
  write_text(out, stedi::sts_to_string(*sys));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steiner triple system hypertree embedding toolkit"};
  app.require_subcommand(1);

  // gen
  std::string gen_kind, gen_out = "-";
  std::uint32_t gen_n = 0;
  std::uint64_t gen_seed = default_seed(), gen_max_iters = 0;
  CLI::App* gen = app.add_subcommand("gen", "generate an STS file");
  gen->add_option("kind", gen_kind, "bose | skolem | random")
      ->required()
      ->check(CLI::IsMember({"bose", "skolem", "random"}));
  gen->add_option("n", gen_n, "vertex count")->required();
  gen->add_option("--seed", gen_seed, "RNG seed (random kind)");
  gen->add_option("--max-iters", gen_max_iters,
                  "hill-climbing budget, 0 = 50*n^2");
  gen->add_option("--out,-o", gen_out, "output path, '-' for stdout");

  // embed
  std::string emb_sts, emb_tree = "largest", emb_config, emb_out = "-",
              emb_mode, emb_matcher;
  std::uint32_t emb_d = 1;
  double emb_mu = -1.0;
  std::uint64_t emb_seed = 0;
  bool emb_seed_given = false;
  CLI::App* emb = app.add_subcommand("embed", "embed a hypertree into an STS");
  emb->add_option("sts", emb_sts, "STS file")->required();
  emb->add_option("--tree,-t", emb_tree,
                  "tree spec: largest | perfect:D,H | almost:D,H,T | "
                  "dseq:D1,D2,... | star:A | file:PATH");
  emb->add_option("--d", emb_d, "d for the 'largest' tree spec");
  emb->add_option("--config,-c", emb_config, "key=value config file");
  emb->add_option("--mu", emb_mu, "overrides mu");
  emb->add_option("--mode", emb_mode, "practical | paper_strict");
  emb->add_option("--matcher", emb_matcher, "greedy | nibble");
  emb->add_option("--seed", emb_seed, "master seed")->each([&](const std::string&) {
    emb_seed_given = true;
  });
  emb->add_option("--out,-o", emb_out, "results JSON path, '-' for stdout");

  // sweep
  std::string sweep_spec, sweep_prefix = "results";
  std::uint32_t sweep_threads = 0;
  CLI::App* sweep = app.add_subcommand("sweep", "run a parameter sweep");
  sweep->add_option("spec", sweep_spec, "experiment spec JSON")->required();
  sweep->add_option("--out,-o", sweep_prefix, "output prefix (.jsonl/.csv)");
  sweep->add_option("--threads", sweep_threads, "worker threads override");

  // oracle
  std::string ora_sts, ora_tree = "perfect:1,1";
  std::uint32_t ora_d = 1;
  std::uint64_t ora_budget = 50'000'000;
  bool ora_force = false;
  CLI::App* ora = app.add_subcommand("oracle", "exhaustive check on tiny instances");
  ora->add_option("sts", ora_sts, "STS file")->required();
  ora->add_option("--tree,-t", ora_tree, "tree spec");
  ora->add_option("--d", ora_d, "d for the 'largest' tree spec");
  ora->add_option("--budget", ora_budget, "search node budget");
  ora->add_flag("--force", ora_force, "lift the m <= 21, |V(T)| <= 13 limits");

  // verify
  std::string ver_path, ver_kind = "sts";
  CLI::App* ver = app.add_subcommand("verify", "validate an STS or tree file");
  ver->add_option("path", ver_path, "file to check")->required();
  ver->add_option("--kind", ver_kind, "sts | tree")
      ->check(CLI::IsMember({"sts", "tree"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen->parsed())
      return cmd_gen(gen_kind, gen_n, gen_seed, gen_max_iters, gen_out);

    if (emb->parsed()) {
      stedi::TripleSystem sys = stedi::load_sts(emb_sts);
      stedi::EmbedConfig cfg;
      if (!emb_config.empty()) cfg = stedi::load_config(emb_config, cfg);
      if (emb_mu >= 0.0) cfg.mu = emb_mu;
      if (!emb_mode.empty()) {
        if (emb_mode == "practical") cfg.mode = stedi::Mode::practical;
        else if (emb_mode == "paper_strict") cfg.mode = stedi::Mode::paper_strict;
        else throw std::invalid_argument("bad --mode");
      }
      if (!emb_matcher.empty()) {
        if (emb_matcher == "greedy") cfg.matcher = stedi::MatcherKind::greedy;
        else if (emb_matcher == "nibble") cfg.matcher = stedi::MatcherKind::nibble;
        else throw std::invalid_argument("bad --matcher");
      }
      if (emb_seed_given) cfg.seed = emb_seed;
      else if (cfg.seed == 0) cfg.seed = default_seed();
      stedi::Hypertree tree =
          stedi::make_tree(emb_tree, emb_d, cfg.mu, sys.vertex_count());

      stedi::EmbedResult res = stedi::embed(sys, tree, cfg);
      stedi::ordered_json j =
          stedi::trial_json(sys, tree, cfg, cfg.seed, res.trace, true);
      write_text(emb_out, j.dump(2) + "\n");
      return res.ok() ? kExitOk : kExitFailure;
    }

    if (sweep->parsed()) {
      stedi::ExperimentSpec spec = stedi::load_experiment_spec(sweep_spec);
      if (spec.master_seed == 0) spec.master_seed = default_seed();
      if (sweep_threads > 0) spec.threads = sweep_threads;
      std::ofstream jsonl(sweep_prefix + ".jsonl");
      std::ofstream csv(sweep_prefix + ".csv");
      if (!jsonl || !csv)
        throw std::runtime_error("cannot open sweep output files");
      auto summary = stedi::run_sweep(spec, jsonl, csv);
      for (const auto& row : summary) {
        std::cout << row.kind << " n=" << row.n << " d=" << row.d
                  << " mu=" << row.mu << " matcher=" << row.matcher << ": "
                  << row.successes << "/" << row.trials
                  << " embedded, mean leave " << row.mean_leave << "\n";
      }
      return kExitOk;
    }

    if (ora->parsed()) {
      stedi::TripleSystem sys = stedi::load_sts(ora_sts);
      stedi::Hypertree tree =
          stedi::make_tree(ora_tree, ora_d, 0.25, sys.vertex_count());
      if (!ora_force &&
          (sys.vertex_count() > 21 || tree.vertex_count() > 13)) {
        std::cerr << "oracle: instance too large (m <= 21, |V(T)| <= 13); "
                     "use --force to override\n";
        return kExitUsage;
      }
      stedi::OracleResult res = stedi::oracle_embed(sys, tree, ora_budget);
      stedi::ordered_json j{{"m", sys.vertex_count()},
                            {"n", tree.vertex_count()},
                            {"determinate", res.determinate},
                            {"embeddable", res.embeddable},
                            {"nodes_explored", res.nodes_explored}};
      if (res.witness) {
        if (!stedi::verify_embedding(sys, tree, *res.witness).valid())
          throw std::runtime_error("internal error: oracle witness fails checks");
        j["witness_phi"] = res.witness->phi;
      }
      std::cout << j.dump(2) << "\n";
      return res.determinate ? kExitOk : kExitFailure;
    }

    if (ver->parsed()) {
      if (ver_kind == "sts") {
        stedi::TripleSystem sys = stedi::load_sts(ver_path);
        stedi::ValidationReport simple = stedi::validate_simple(sys);
        stedi::ValidationReport sts = stedi::validate_sts(sys);
        std::cout << "m=" << sys.vertex_count() << " triples=" << sys.triple_count()
                  << " simple=" << (simple.valid() ? "yes" : "no")
                  << " sts=" << (sts.valid() ? "yes" : "no") << "\n";
        for (const std::string& p : sts.problems) std::cout << "  " << p << "\n";
        if (sts.uncovered_pairs)
          std::cout << "  uncovered pairs: " << sts.uncovered_pairs << "\n";
        if (sts.duplicate_pairs)
          std::cout << "  duplicated pairs: " << sts.duplicate_pairs << "\n";
        return sts.valid() ? kExitOk : kExitFailure;
      }
      stedi::Hypertree tree = stedi::load_tree(ver_path);
      std::cout << "|V|=" << tree.vertex_count() << " |E|=" << tree.edge_count()
                << " height=" << tree.height() << " valid=yes\n";
      return kExitOk;
    }
  } catch (const stedi::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
