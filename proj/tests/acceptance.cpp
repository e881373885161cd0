// Acceptance suite: one criterion per invocation (argv[1] in 1..10), or
// "all". Prints a single PASS/FAIL line per criterion and exits nonzero if
// any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <sstream>
#include <string>
#include <vector>

#include "stedi/constructors.hpp"
#include "stedi/embedder.hpp"
#include "stedi/experiment.hpp"
#include "stedi/hypertree.hpp"
#include "stedi/matching.hpp"
#include "stedi/oracle.hpp"
#include "stedi/partition.hpp"
#include "stedi/rng.hpp"

using namespace stedi;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    pass = false;
    if (detail.empty()) detail = why;
  }
};

// 1. Every admissible order up to 99: constructor output is a genuine STS.
Outcome criterion_sts_correctness() {
  Outcome out;
  std::size_t checked = 0;
  for (std::uint32_t n = 7; n <= 99; ++n) {
    if (n % 6 != 1 && n % 6 != 3) continue;
    TripleSystem sys = n % 6 == 3 ? bose(n) : skolem(n);
    ++checked;
    if (!validate_sts(sys).valid()) {
      out.fail("order " + std::to_string(n) + " fails validate_sts");
      continue;
    }
    if (sys.triple_count() != static_cast<std::size_t>(n) * (n - 1) / 6)
      out.fail("order " + std::to_string(n) + " has wrong triple count");
    for (VertexId v = 0; v < n; ++v)
      if (sys.degree(v) != (n - 1) / 2) {
        out.fail("order " + std::to_string(n) + " has a wrong degree");
        break;
      }
  }
  out.detail = std::to_string(checked) + " orders checked; " + out.detail;
  return out;
}

// 2. Perfect and almost-perfect tree algebra.
Outcome criterion_hypertree_algebra() {
  Outcome out;
  for (std::uint32_t d = 1; d <= 5; ++d) {
    for (std::uint32_t h = 0; h <= 4; ++h) {
      std::uint64_t level = 1, size = 1;
      for (std::uint32_t i = 0; i < h; ++i) {
        level *= 2 * d;
        size += level;
      }
      if (size > 200000) continue;
      Hypertree t = perfect_d_ary(d, h);
      const std::uint64_t formula =
          (static_cast<std::uint64_t>(std::llround(
               (std::pow(2.0 * d, h + 1) - 1))) ) / (2 * d - 1);
      if (t.vertex_count() != formula)
        out.fail("perfect size formula off at d=" + std::to_string(d) +
                 " h=" + std::to_string(h));
      if (t.vertex_count() != 2 * t.edge_count() + 1)
        out.fail("handshake identity off");
      if (!validate_hypertree(t).valid()) out.fail("perfect tree invalid");

      if (h >= 1) {
        const std::uint64_t last = level;
        for (std::uint64_t tr : {std::uint64_t{1}, last / 4, last / 2}) {
          if (2 * tr > last || tr == 0) continue;
          Hypertree a = almost_perfect(d, h, tr);
          if (a.vertex_count() != size - 2 * tr)
            out.fail("almost_perfect count off");
          if (!validate_hypertree(a).valid()) out.fail("almost_perfect invalid");
        }
      }
    }
  }
  return out;
}

// 3. Matching validity and maximality across 200 random simple instances.
Outcome criterion_matching_validity() {
  Outcome out;
  Rng rng(2024);
  for (int inst = 0; inst < 200; ++inst) {
    const std::uint32_t n = 100 + static_cast<std::uint32_t>(rng.below(2901));
    const double d = 5.0 + 45.0 * rng.unit();
    EdgeSet h = make_random_simple(n, d, 5000 + inst);
    const MatcherKind kind = inst % 2 ? MatcherKind::greedy : MatcherKind::nibble;
    auto [m, stats] = run_matcher(h, kind, inst);
    if (!matching_is_valid(h, m)) {
      out.fail("invalid matching on instance " + std::to_string(inst));
      break;
    }
    if (!matching_is_maximal(h, m)) {
      out.fail("non-maximal matching on instance " + std::to_string(inst));
      break;
    }
  }
  std::vector<Triple> fano_lines{make_triple(0, 1, 2), make_triple(0, 3, 4),
                                 make_triple(0, 5, 6), make_triple(1, 3, 5),
                                 make_triple(1, 4, 6), make_triple(2, 3, 6),
                                 make_triple(2, 4, 5)};
  EdgeSet fano{7, fano_lines};
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    if (random_greedy_matching(fano, seed).first.edge_ids.size() != 1)
      out.fail("Fano greedy matching size != 1");
    if (nibble_matching(fano, seed).first.edge_ids.size() != 1)
      out.fail("Fano nibble matching size != 1");
  }
  return out;
}

// 4. Empirical near-regular leave fraction at N = 3*10^4, D = 50.
Outcome criterion_leave_fraction() {
  Outcome out;
  const std::uint32_t n = 30000;
  const double d = 50.0;
  double total = 0.0, worst = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    EdgeSet h = make_random_simple(n, d, 777 + seed);
    auto [m, stats] = nibble_matching(h, seed);
    total += stats.leave_fraction;
    worst = std::max(worst, stats.leave_fraction);
    if (stats.leave_fraction > 0.10)
      out.fail("seed " + std::to_string(seed) + " leave " +
               std::to_string(stats.leave_fraction) + " > 0.10");
  }
  const double mean = total / 10.0;
  if (mean > 0.05) out.fail("mean leave " + std::to_string(mean) + " > 0.05");
  std::ostringstream os;
  os << "mean leave " << mean << ", worst " << worst;
  if (!out.detail.empty()) os << "; " << out.detail;
  out.detail = os.str();
  return out;
}

// 5. Split/contract bookkeeping on 100 random cross views.
Outcome criterion_star_packing_invariants() {
  Outcome out;
  TripleSystem sys = bose(63);
  Rng rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<VertexId> xs, ys;
    for (VertexId v = 0; v < 63; ++v) {
      std::uint64_t r = rng.below(4);
      if (r == 0) xs.push_back(v);
      else if (r != 3) ys.push_back(v);
    }
    const std::uint32_t d = 1 + static_cast<std::uint32_t>(rng.below(4));
    CrossView g = cross_view(sys, xs, ys);
    SplitResult split = split_centers(g, d, trial);
    if (split.aux.n_vertices != d * xs.size() + ys.size())
      out.fail("aux vertex count mismatch");
    for (std::uint32_t k = 0; k < split.centers.size(); ++k) {
      std::uint32_t total = 0;
      for (std::uint32_t s : split.group_sizes[k]) total += s;
      if (total != g.view_degree(split.centers[k])) {
        out.fail("group sizes do not partition a degree");
        break;
      }
    }
    auto [forest, stats] =
        star_packing(g, d, trial % 2 ? MatcherKind::greedy : MatcherKind::nibble,
                     trial);
    std::size_t edges = forest.total_edges();
    std::size_t used_centers = forest.stars.size();
    if (forest.covered.size() != used_centers + 2 * edges) {
      out.fail("covered-count identity fails on trial " + std::to_string(trial));
      break;
    }
  }
  return out;
}

// 6. Deterministic counting bound, exhaustively over small orders.
Outcome criterion_counting_bound() {
  Outcome out;
  std::uint64_t checks = 0;
  for (std::uint32_t n = 7; n <= 99; ++n) {
    if (n % 6 != 1 && n % 6 != 3) continue;
    TripleSystem sys = n % 6 == 3 ? bose(n) : skolem(n);
    Rng rng(n);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<std::uint8_t> in_c(n, 0), in_l0(n, 0);
      std::uint64_t c_size = 0;
      for (VertexId v = 0; v < n; ++v) {
        if (rng.below(3) == 0) {
          in_c[v] = 1;
          ++c_size;
          if (rng.below(2) == 0) in_l0[v] = 1;
        }
      }
      const double alpha = 0.05 + 0.9 * rng.unit();
      const std::uint64_t bad = low_cross_degree_count(sys, in_c, in_l0, alpha);
      ++checks;
      if (static_cast<double>(bad) > static_cast<double>(c_size) / alpha) {
        out.fail("violation at n=" + std::to_string(n));
        return out;
      }
    }
  }
  out.detail = std::to_string(checks) + " (C, L0, alpha) draws, zero violations";
  return out;
}

// 7. Paper-strict constants at mu = 1/4.
Outcome criterion_constants() {
  Outcome out;
  EmbedConfig cfg = derive_constants(0.25, 1000, 1, Mode::paper_strict);
  if (cfg.rho != 0.0047265625) out.fail("rho mismatch");
  if (std::abs(cfg.delta - 2.9541015625e-4) > 1e-15) out.fail("delta mismatch");
  const double mu = 0.25;
  const double lhs = 2.0 * std::sqrt(cfg.rho);
  const double rhs = (3.0 * mu - mu * mu) / (4.0 * (1.0 + mu));
  if (std::abs(lhs - rhs) > 1e-12 * rhs)
    out.fail("2 sqrt(rho) identity off beyond 12 digits");
  std::ostringstream os;
  os << "rho=" << cfg.rho << " delta=" << cfg.delta << " 2sqrt(rho)=" << lhs;
  out.detail = os.str();
  return out;
}

// 8. Desk-scale end-to-end embedding on random STS(9999).
Outcome criterion_end_to_end() {
  Outcome out;
  int successes = 0;
  for (std::uint64_t master = 0; master < 10; ++master) {
    auto sys = random_sts(9999, 31 + master);
    if (!sys) {
      out.fail("random_sts(9999) did not converge for seed " +
               std::to_string(master));
      continue;
    }
    Hypertree tree = largest_perfect_at_most(
        1, static_cast<std::uint64_t>(9999 / 1.25));
    EmbedConfig cfg;
    cfg.mu = 0.25;
    cfg.eps = 0.02;
    cfg.delta = 0.05;
    cfg.rho = 0.1;
    cfg.K = 8;
    cfg.max_pipeline_retries = 5;
    cfg.seed = master;
    EmbedResult res = embed(*sys, tree, cfg);
    if (res.ok() && verify_embedding(*sys, tree, *res.embedding).valid())
      ++successes;
  }
  std::ostringstream os;
  os << successes << "/10 certified embeddings";
  out.detail = os.str();
  if (successes < 8) out.fail(out.detail);
  return out;
}

// 9. Pipeline successes never contradict the exhaustive oracle.
Outcome criterion_oracle_agreement() {
  Outcome out;
  std::vector<TripleSystem> systems;
  systems.push_back(skolem(7));
  systems.push_back(bose(9));
  systems.push_back(skolem(13));
  systems.push_back(bose(15));
  auto r7 = random_sts(7, 1);
  auto r13 = random_sts(13, 2);
  if (r7) systems.push_back(std::move(*r7));
  if (r13) systems.push_back(std::move(*r13));

  std::vector<Hypertree> trees;
  trees.push_back(perfect_d_ary(1, 0));   // 1 vertex
  trees.push_back(perfect_d_ary(1, 1));   // 3
  trees.push_back(almost_perfect(1, 2, 1));  // 5
  trees.push_back(perfect_d_ary(1, 2));   // 7
  trees.push_back(d_sequence_tree({4}));  // 9, hyperstar

  int instances = 0, successes = 0;
  for (const TripleSystem& sys : systems) {
    for (const Hypertree& tree : trees) {
      if (tree.vertex_count() > sys.vertex_count()) continue;
      ++instances;
      OracleResult oracle = oracle_embed(sys, tree, 200'000'000ull);
      if (!oracle.determinate) {
        out.fail("oracle ran out of budget");
        continue;
      }
      for (std::uint64_t seed = 0; seed < 2; ++seed) {
        // one run with defaults (fast paths on), one forcing the pipeline
        for (bool force_pipeline : {false, true}) {
          EmbedConfig cfg;
          cfg.seed = seed;
          if (force_pipeline) {
            cfg.disable_fast_path = true;
            cfg.eps = 0.1;
            cfg.delta = 0.12;
            cfg.rho = 0.15;
            cfg.check_d = false;
            cfg.max_pipeline_retries = 3;
          }
          EmbedResult res = embed(sys, tree, cfg);
          if (res.ok()) {
            ++successes;
            if (!verify_embedding(sys, tree, *res.embedding).valid()) {
              out.fail("claimed embedding fails certification");
            }
            if (!oracle.embeddable) {
              out.fail("false success: pipeline embedded an impossible instance");
            }
          }
        }
      }
    }
  }
  std::ostringstream os;
  os << instances << " instances, " << successes
     << " pipeline successes, all certified and oracle-consistent";
  if (out.pass) out.detail = os.str();
  return out;
}

// 10. Sweep JSONL is byte-identical under a fixed master seed.
Outcome criterion_sweep_determinism() {
  Outcome out;
  ExperimentSpec spec;
  spec.kind = "random";
  spec.n_values = {63, 99};
  spec.d_values = {1};
  spec.mu_values = {0.25};
  spec.seeds = 5;
  spec.master_seed = 12345;
  spec.threads = 2;
  std::ostringstream j1, c1, j2, c2;
  run_sweep(spec, j1, c1);
  run_sweep(spec, j2, c2);
  if (j1.str() != j2.str()) out.fail("JSONL differs between runs");
  if (c1.str() != c2.str()) out.fail("summary CSV differs between runs");
  if (j1.str().empty()) out.fail("no JSONL produced");
  std::istringstream lines(j1.str());
  std::string line;
  std::size_t count = 0;
  while (std::getline(lines, line))
    if (!line.empty()) ++count;
  if (count != 10) out.fail("expected 10 trials, got " + std::to_string(count));
  if (out.pass) out.detail = std::to_string(count) + " trials, two identical runs";
  return out;
}

struct Criterion {
  int id;
  const char* name;
  Outcome (*run)();
};

const Criterion kCriteria[] = {
    {1, "STS constructor correctness (orders 7..99)", criterion_sts_correctness},
    {2, "hypertree algebra", criterion_hypertree_algebra},
    {3, "matching validity & maximality", criterion_matching_validity},
    {4, "near-regular leave fraction (N=30000, D=50)", criterion_leave_fraction},
    {5, "star-packing reduction invariants", criterion_star_packing_invariants},
    {6, "deterministic counting bound (orders <= 99)", criterion_counting_bound},
    {7, "paper-strict constants at mu=1/4", criterion_constants},
    {8, "end-to-end desk-scale embedding (m=9999)", criterion_end_to_end},
    {9, "oracle agreement on tiny fixtures", criterion_oracle_agreement},
    {10, "sweep determinism", criterion_sweep_determinism},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> wanted;
  if (argc < 2 || std::strcmp(argv[1], "all") == 0) {
    for (const Criterion& c : kCriteria) wanted.push_back(c.id);
  } else {
    wanted.push_back(std::atoi(argv[1]));
  }

  int failures = 0;
  for (const Criterion& c : kCriteria) {
    bool selected = false;
    for (int id : wanted) selected |= (id == c.id);
    if (!selected) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out = c.run();
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::printf("[%s] %2d. %s (%.1fs)%s%s\n", out.pass ? "PASS" : "FAIL", c.id,
                c.name, secs, out.detail.empty() ? "" : " - ",
                out.detail.c_str());
    if (!out.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
