#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "stedi/hypergraph.hpp"
#include "stedi/hypertree.hpp"
#include "stedi/matching.hpp"
#include "stedi/partition.hpp"
#include "stedi/rng.hpp"

namespace stedi {

/// A certified total embedding: phi maps every tree vertex into S and
/// edge_triples names the S-triple realizing each tree edge.
struct Embedding {
  std::vector<VertexId> phi;
  std::vector<std::uint32_t> edge_triples;
};

/// Literal containment check: phi total and injective, every tree edge's
/// image a triple of S, images pairwise distinct.
inline ValidationReport verify_embedding(const TripleSystem& sys,
                                         const Hypertree& tree,
                                         const Embedding& emb) {
  ValidationReport rep;
  if (emb.phi.size() != tree.vertex_count()) {
    rep.add("phi does not cover V(T)");
    return rep;
  }
  if (emb.edge_triples.size() != tree.edge_count()) {
    rep.add("edge image list does not cover E(T)");
    return rep;
  }
  std::vector<std::uint8_t> hit(sys.vertex_count(), 0);
  for (VertexId v = 0; v < emb.phi.size(); ++v) {
    VertexId img = emb.phi[v];
    if (img == kNoVertex || img >= sys.vertex_count()) {
      rep.add("vertex " + std::to_string(v) + " unmapped");
      return rep;
    }
    if (hit[img]) {
      std::ostringstream os;
      os << "phi not injective at image " << img;
      rep.add(os.str());
    }
    hit[img] = 1;
  }
  std::vector<std::uint32_t> images;
  for (std::uint32_t ei = 0; ei < tree.edge_count(); ++ei) {
    const Hypertree::Edge& e = tree.edges()[ei];
    const std::uint32_t ti = emb.edge_triples[ei];
    if (ti >= sys.triple_count()) {
      rep.add("edge " + std::to_string(ei) + ": triple index out of range");
      continue;
    }
    const Triple expect =
        make_triple(emb.phi[e.parent], emb.phi[e.child_a], emb.phi[e.child_b]);
    if (sys.triples()[ti] != expect ||
        sys.pair_partner(expect.a, expect.b) != expect.c) {
      std::ostringstream os;
      os << "edge " << ei << ": image {" << expect.a << "," << expect.b << ","
         << expect.c << "} is not the recorded triple of S";
      rep.add(os.str());
    }
    images.push_back(ti);
  }
  std::sort(images.begin(), images.end());
  if (std::adjacent_find(images.begin(), images.end()) != images.end())
    rep.add("two tree edges share one S-triple");
  return rep;
}

struct LevelTrace {
  std::uint64_t n_i = 0;          // |V(G_i)|
  double leave_fraction = 0.0;    // |U_i| / |C_i|
  std::uint64_t u_i = 0;
};

struct PipelineTrace {
  std::string outcome;  // "embedded" or "failed:<stage>"
  bool fast_path_star = false;
  bool fast_path_greedy = false;
  bool precondition_ok = true;
  std::uint32_t retries_used = 0;
  std::uint32_t resamples_used = 0;
  std::uint64_t v_f = 0, v_t1 = 0, e_t1 = 0, reservoir_used = 0;
  std::vector<LevelTrace> per_level;
  std::map<std::string, std::uint32_t> partition_failures;
  double ms_total = 0.0;
};

/// Shortcut embeddings: a hyperstar embeds at any vertex (every STS vertex
/// has (m-1)/2 pairwise almost-disjoint triples), and m > 2|V(T)| lets BFS
/// first-fit run to completion unconditionally. nullopt if neither applies.
inline std::optional<Embedding> fast_path(const TripleSystem& sys,
                                          const Hypertree& tree,
                                          PipelineTrace* trace = nullptr) {
  const std::uint64_t m = sys.vertex_count();
  const std::uint64_t n = tree.vertex_count();
  if (m < n) return std::nullopt;

  if (tree.is_hyperstar()) {
    if (tree.edge_count() > (m - 1) / 2) return std::nullopt;  // degree bound
    Embedding emb;
    emb.phi.assign(n, kNoVertex);
    emb.phi[0] = 0;
    auto inc = sys.incident(0);
    for (std::uint32_t j = 0; j < tree.edge_count(); ++j) {
      const Hypertree::Edge& e = tree.edges()[j];
      const std::uint32_t ti = inc[j];
      const Triple& t = sys.triples()[ti];
      VertexId u = t.a == 0 ? t.b : t.a;
      VertexId w = t.c == 0 ? t.b : t.c;
      emb.phi[e.child_a] = u;
      emb.phi[e.child_b] = w;
      emb.edge_triples.push_back(ti);
    }
    if (trace) trace->fast_path_star = true;
    return emb;
  }

  if (m > 2 * n) {
    std::vector<VertexId> all(sys.vertex_count());
    for (VertexId v = 0; v < sys.vertex_count(); ++v) all[v] = v;
    auto t0 = embed_T0_greedy(sys, all, tree, tree.height());
    if (t0) {
      if (trace) trace->fast_path_greedy = true;
      return Embedding{std::move(t0->phi), std::move(t0->edge_triples)};
    }
  }
  return std::nullopt;
}

/// Star forests over G_1 = S[L0, C_1] and G_i = S[C_{i-1}, C_i], plus the
/// uncovered sets U_i.
struct ForestState {
  std::vector<StarForest> forests;             // index i-1 for level i
  std::vector<std::vector<VertexId>> uncovered;  // U_i, same indexing
};

inline ForestState build_star_forests(const TripleSystem& sys,
                                      const Partition& part,
                                      const PartitionPlan& plan,
                                      const EmbedConfig& cfg, std::uint64_t seed,
                                      PipelineTrace* trace = nullptr) {
  if (!part.t0) throw std::logic_error("build_star_forests: T0 not embedded");
  ForestState state;
  for (std::uint32_t i = 1; i <= plan.t; ++i) {
    const std::vector<VertexId>& xs =
        i == 1 ? part.t0->l0_image : part.classes[i - 1];
    const std::vector<VertexId>& ys = part.classes[i];
    CrossView view(sys, xs, ys);
    auto [forest, stats] =
        star_packing(view, plan.star_size[i], cfg.matcher, derive_seed(seed, i),
                     cfg.bite);

    std::vector<std::uint8_t> covered(sys.vertex_count(), 0);
    for (VertexId v : forest.covered) covered[v] = 1;
    std::vector<VertexId> u_i;
    for (VertexId v : ys)
      if (!covered[v]) u_i.push_back(v);

    if (trace) {
      LevelTrace lt;
      lt.n_i = xs.size() + ys.size();
      lt.u_i = u_i.size();
      lt.leave_fraction =
          ys.empty() ? 0.0
                     : static_cast<double>(u_i.size()) / static_cast<double>(ys.size());
      trace->per_level.push_back(lt);
    }
    state.forests.push_back(std::move(forest));
    state.uncovered.push_back(std::move(u_i));
  }
  return state;
}

/// T1 as a partial embedding of T: phi is set exactly on the root component
/// of the hyperforest F = T0 u (star forests), aligned level by level onto
/// T, and `missing` lists the unrealized tree edges in BFS order (so each
/// one's parent vertex is embedded before the edge comes up).
struct PruneResult {
  std::vector<VertexId> phi;            // size |V(T)|, kNoVertex where missing
  std::vector<std::uint32_t> edge_triples;  // aligned edges; kNoEdgeTriple elsewhere
  std::vector<std::uint32_t> missing;   // tree edge ids, BFS order
  std::uint64_t v_f = 0;                // |V(F)| (T0 plus all candidate classes)
  std::uint64_t v_t1 = 0, e_t1 = 0;
};

inline constexpr std::uint32_t kNoEdgeTriple = 0xffffffffu;

inline PruneResult prune_to_t1(const TripleSystem& sys, const Hypertree& tree,
                               const Partition& part, const PartitionPlan& plan,
                               const ForestState& forest) {
  PruneResult out;
  out.phi.assign(tree.vertex_count(), kNoVertex);
  out.edge_triples.assign(tree.edge_count(), kNoEdgeTriple);

  const T0Embedding& t0 = *part.t0;
  for (VertexId v = 0; v < t0.phi.size(); ++v) out.phi[v] = t0.phi[v];
  for (std::uint32_t ei = 0; ei < t0.edge_triples.size(); ++ei)
    out.edge_triples[ei] = t0.edge_triples[ei];

  out.v_f = plan.t0_size;
  for (std::uint32_t i = 1; i <= plan.t; ++i) out.v_f += part.classes[i].size();

  // stars per center, per level
  for (std::uint32_t i = 1; i <= plan.t; ++i) {
    const StarForest& sf = forest.forests[i - 1];
    std::vector<std::int32_t> star_at(sys.vertex_count(), -1);
    for (std::uint32_t s = 0; s < sf.stars.size(); ++s)
      star_at[sf.stars[s].center] = static_cast<std::int32_t>(s);

    const std::uint32_t lvl = plan.i0 + i - 1;
    for (VertexId x = tree.level_begin(lvl); x < tree.level_end(lvl); ++x) {
      auto kids = tree.child_edges(x);
      const std::int32_t si = out.phi[x] == kNoVertex ? -1 : star_at[out.phi[x]];
      for (std::uint32_t j = 0; j < kids.size(); ++j) {
        const std::uint32_t ei = tree.child_edge(x, j);
        const Hypertree::Edge& e = tree.edges()[ei];
        if (si >= 0 && j < sf.stars[si].edges.size()) {
          const Triple& tr = sf.stars[si].edges[j];
          const VertexId c = out.phi[x];
          VertexId u = tr.a == c ? tr.b : tr.a;
          VertexId w = tr.c == c ? tr.b : tr.c;
          out.phi[e.child_a] = u;
          out.phi[e.child_b] = w;
          std::uint32_t ti = kNoEdgeTriple;
          for (std::uint32_t cand : sys.incident(c)) {
            if (sys.triples()[cand] == tr) {
              ti = cand;
              break;
            }
          }
          out.edge_triples[ei] = ti;
        } else {
          out.missing.push_back(ei);
        }
      }
    }
  }

  for (VertexId v : out.phi)
    if (v != kNoVertex) ++out.v_t1;
  for (std::uint32_t t : out.edge_triples)
    if (t != kNoEdgeTriple) ++out.e_t1;
  return out;
}

/// Step 3: realize every missing edge with a fresh reservoir pair at the
/// already-embedded parent. First-fit over the parent image's incidence
/// list. Each step consumes exactly two reservoir vertices.
struct ReservoirResult {
  bool ok = false;
  std::string error;
  std::uint64_t steps = 0;
};

inline ReservoirResult reservoir_complete(const TripleSystem& sys,
                                          const Hypertree& tree,
                                          const std::vector<VertexId>& reservoir,
                                          PruneResult& t1,
                                          bool verify_intermediate = false) {
  ReservoirResult res;
  if (reservoir.size() < 2 * t1.missing.size()) {
    res.error = "reservoir infeasible: |R| < 2 * missing edges";
    return res;
  }
  std::vector<std::uint8_t> avail(sys.vertex_count(), 0);
  for (VertexId v : reservoir) avail[v] = 1;

  for (std::uint32_t ei : t1.missing) {
    const Hypertree::Edge& e = tree.edges()[ei];
    const VertexId host = t1.phi[e.parent];
    if (host == kNoVertex) {
      res.error = "internal: missing edge before its parent";
      return res;
    }
    bool placed = false;
    for (std::uint32_t ti : sys.incident(host)) {
      const Triple& tr = sys.triples()[ti];
      VertexId u = tr.a == host ? tr.b : tr.a;
      VertexId w = tr.c == host ? tr.b : tr.c;
      if (avail[u] && avail[w]) {
        t1.phi[e.child_a] = u;
        t1.phi[e.child_b] = w;
        t1.edge_triples[ei] = ti;
        avail[u] = avail[w] = 0;
        placed = true;
        break;
      }
    }
    if (!placed) {
      std::ostringstream os;
      os << "reservoir exhausted at step " << res.steps + 1 << " of "
         << t1.missing.size();
      res.error = os.str();
      return res;
    }
    ++res.steps;

    if (verify_intermediate) {
      std::vector<std::array<VertexId, 3>> sub;
      std::vector<VertexId> ids;
      std::vector<VertexId> remap(tree.vertex_count(), kNoVertex);
      for (VertexId v = 0; v < tree.vertex_count(); ++v)
        if (t1.phi[v] != kNoVertex) {
          remap[v] = static_cast<VertexId>(ids.size());
          ids.push_back(v);
        }
      for (std::uint32_t k = 0; k < tree.edge_count(); ++k)
        if (t1.edge_triples[k] != kNoEdgeTriple) {
          const Hypertree::Edge& te = tree.edges()[k];
          sub.push_back({remap[te.parent], remap[te.child_a], remap[te.child_b]});
        }
      ValidationReport vr =
          validate_hypertree_edges(static_cast<VertexId>(ids.size()), sub);
      if (!vr.valid()) {
        res.error = "intermediate tree invalid: " + vr.problems.front();
        return res;
      }
    }
  }
  res.ok = true;
  return res;
}

struct EmbedResult {
  std::optional<Embedding> embedding;
  PipelineTrace trace;
  bool ok() const { return embedding.has_value(); }
};

/// The full pipeline: fast paths, then up to max_pipeline_retries rounds of
/// partition sampling, star-forest packing, pruning, and reservoir
/// completion. Every success is re-certified with verify_embedding before
/// it is returned.
inline EmbedResult embed(const TripleSystem& sys, const Hypertree& tree,
                         const EmbedConfig& user_cfg) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  EmbedResult result;
  PipelineTrace& trace = result.trace;
  auto finish = [&](const std::string& outcome) -> EmbedResult& {
    trace.outcome = outcome;
    trace.ms_total =
        std::chrono::duration<double, std::milli>(clock::now() - start).count();
    return result;
  };

  const std::uint64_t m = sys.vertex_count();
  const std::uint64_t n_tree = tree.vertex_count();
  if (m < n_tree) return finish("failed:pigeonhole");

  trace.precondition_ok =
      static_cast<double>(m) >= (1.0 + user_cfg.mu) * static_cast<double>(n_tree);

  if (!user_cfg.disable_fast_path) {
    if (auto emb = fast_path(sys, tree, &trace)) {
      if (verify_embedding(sys, tree, *emb).valid()) {
        result.embedding = std::move(emb);
        return finish("embedded");
      }
      return finish("failed:fast_path_certification");
    }
    if (tree.is_hyperstar()) return finish("failed:star_degree");
  }

  const std::uint64_t n_budget =
      std::max(n_tree, static_cast<std::uint64_t>(
                           static_cast<double>(m) / (1.0 + user_cfg.mu)));
  const std::uint32_t d_nominal = std::max(1u, tree.max_forward_degree());

  EmbedConfig cfg;
  LevelDecomposition dec;
  PartitionPlan plan;
  try {
    cfg = derive_constants(user_cfg.mu, n_budget, d_nominal, user_cfg.mode,
                           user_cfg);
    dec = decompose_levels(tree, cfg.eps, n_budget);
    std::vector<std::uint32_t> star_sizes(dec.t + 1, 0);
    for (std::uint32_t i = 1; i <= dec.t; ++i)
      star_sizes[i] = tree.max_forward_degree(dec.i0 + i - 1);
    plan = build_plan(cfg, m, n_budget, dec, std::move(star_sizes));
    plan.precondition_ok = trace.precondition_ok;
  } catch (const std::exception&) {
    return finish("failed:plan");
  }

  std::string last_stage = "partition";
  for (std::uint32_t retry = 0; retry < cfg.max_pipeline_retries; ++retry) {
    trace.retries_used = retry + 1;
    const std::uint64_t trial_seed = derive_seed(cfg.seed, 100000 + retry);

    SampleOutcome sample = sample_until_valid(sys, tree, plan, cfg, trial_seed);
    trace.resamples_used += sample.resamples_used;
    for (const auto& [k, v] : sample.failure_histogram)
      trace.partition_failures[k] += v;
    if (!sample.ok || !sample.partition.t0) {
      last_stage = "partition";
      continue;
    }

    trace.per_level.clear();
    ForestState forest = build_star_forests(sys, sample.partition, plan, cfg,
                                            derive_seed(trial_seed, 1), &trace);
    PruneResult t1 = prune_to_t1(sys, tree, sample.partition, plan, forest);
    trace.v_f = t1.v_f;
    trace.v_t1 = t1.v_t1;
    trace.e_t1 = t1.e_t1;

    ReservoirResult rr =
        reservoir_complete(sys, tree, sample.partition.reservoir, t1,
                           cfg.verify_intermediate);
    if (!rr.ok) {
      last_stage = "reservoir";
      continue;
    }
    trace.reservoir_used = rr.steps;

    Embedding emb{std::move(t1.phi), std::move(t1.edge_triples)};
    if (!verify_embedding(sys, tree, emb).valid()) {
      last_stage = "certification";
      continue;
    }
    result.embedding = std::move(emb);
    return finish("embedded");
  }
  return finish("failed:" + last_stage);
}

}  // namespace stedi
