#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "stedi/hypergraph.hpp"
#include "stedi/rng.hpp"

namespace stedi {

/// Flat 3-uniform hypergraph for the matchers. Unlike TripleSystem it keeps
/// no pair index, so it scales to sparse instances with many vertices.
struct EdgeSet {
  std::uint32_t n_vertices = 0;
  std::vector<Triple> edges;
};

inline EdgeSet edge_set(const TripleSystem& sys) {
  return EdgeSet{sys.vertex_count(), sys.triples()};
}

inline EdgeSet edge_set(const CrossView& view) {
  return EdgeSet{view.base().vertex_count(), view.edges()};
}

struct Matching {
  std::vector<std::uint32_t> edge_ids;  // indices into the input edge list
};

struct MatchStats {
  std::uint64_t n_vertices = 0;
  std::uint64_t n_matched = 0;  // covered vertices, always 3 * |matching|
  double leave_fraction = 0.0;
  std::string algorithm;
  std::uint64_t seed = 0;
  std::uint32_t rounds = 0;
};

inline bool matching_is_valid(const EdgeSet& h, const Matching& m) {
  std::vector<std::uint8_t> used(h.n_vertices, 0);
  for (std::uint32_t ei : m.edge_ids) {
    const Triple& t = h.edges[ei];
    if (used[t.a] || used[t.b] || used[t.c]) return false;
    used[t.a] = used[t.b] = used[t.c] = 1;
  }
  return true;
}

inline bool matching_is_maximal(const EdgeSet& h, const Matching& m) {
  std::vector<std::uint8_t> used(h.n_vertices, 0);
  for (std::uint32_t ei : m.edge_ids) {
    const Triple& t = h.edges[ei];
    used[t.a] = used[t.b] = used[t.c] = 1;
  }
  for (const Triple& t : h.edges)
    if (!used[t.a] && !used[t.b] && !used[t.c]) return false;
  return true;
}

namespace detail {
inline MatchStats finish_stats(const EdgeSet& h, const Matching& m,
                               std::string algorithm, std::uint64_t seed,
                               std::uint32_t rounds) {
  MatchStats s;
  s.n_vertices = h.n_vertices;
  s.n_matched = 3ull * m.edge_ids.size();
  s.leave_fraction =
      h.n_vertices == 0
          ? 0.0
          : 1.0 - static_cast<double>(s.n_matched) / static_cast<double>(h.n_vertices);
  s.algorithm = std::move(algorithm);
  s.seed = seed;
  s.rounds = rounds;
  return s;
}

// Greedy pass over `order`; appends accepted edges and marks vertices used.
inline void greedy_pass(const EdgeSet& h, const std::vector<std::uint32_t>& order,
                        std::vector<std::uint8_t>& used, Matching& m) {
  for (std::uint32_t ei : order) {
    const Triple& t = h.edges[ei];
    if (used[t.a] || used[t.b] || used[t.c]) continue;
    used[t.a] = used[t.b] = used[t.c] = 1;
    m.edge_ids.push_back(ei);
  }
}
}  // namespace detail

/// Greedy over a uniformly random edge permutation. Always maximal.
inline std::pair<Matching, MatchStats> random_greedy_matching(const EdgeSet& h,
                                                              std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::uint32_t> order(h.edges.size());
  for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
  rng.shuffle(order);
  std::vector<std::uint8_t> used(h.n_vertices, 0);
  Matching m;
  detail::greedy_pass(h, order, used, m);
  return {std::move(m), detail::finish_stats(h, m, "greedy", seed, 0)};
}

/// Semi-random (nibble) matching: per round, mark each surviving edge with
/// probability bite/avg_degree, keep the marked edges that meet no other
/// marked edge, delete covered vertices. Stops when the average degree drops
/// below 2 or a round removes nothing, then finishes greedily.
inline std::pair<Matching, MatchStats> nibble_matching(const EdgeSet& h,
                                                       std::uint64_t seed,
                                                       double bite = 0.1) {
  if (!(bite > 0.0 && bite < 1.0))
    throw std::invalid_argument("nibble_matching: bite must be in (0,1)");
  Rng rng(seed);
  std::vector<std::uint8_t> used(h.n_vertices, 0);
  std::vector<std::uint32_t> alive(h.edges.size());
  for (std::uint32_t i = 0; i < alive.size(); ++i) alive[i] = i;
  Matching m;
  std::uint32_t rounds = 0;

  std::vector<std::uint32_t> touch_stamp(h.n_vertices, 0);
  std::uint32_t stamp = 0;
  std::vector<std::uint32_t> mark_count(h.n_vertices, 0);

  while (!alive.empty()) {
    // active vertices = free vertices still touched by surviving edges
    ++stamp;
    std::uint64_t active = 0;
    for (std::uint32_t ei : alive) {
      const Triple& t = h.edges[ei];
      for (VertexId v : {t.a, t.b, t.c}) {
        if (touch_stamp[v] != stamp) {
          touch_stamp[v] = stamp;
          ++active;
        }
      }
    }
    const double dbar = 3.0 * static_cast<double>(alive.size()) /
                        static_cast<double>(active);
    if (dbar < 2.0) break;
    const double p = std::min(1.0, bite / dbar);

    std::vector<std::uint32_t> marked;
    for (std::uint32_t ei : alive) {
      if (rng.bernoulli(p)) {
        marked.push_back(ei);
        const Triple& t = h.edges[ei];
        ++mark_count[t.a];
        ++mark_count[t.b];
        ++mark_count[t.c];
      }
    }
    std::size_t kept = 0;
    for (std::uint32_t ei : marked) {
      const Triple& t = h.edges[ei];
      if (mark_count[t.a] == 1 && mark_count[t.b] == 1 && mark_count[t.c] == 1) {
        used[t.a] = used[t.b] = used[t.c] = 1;
        m.edge_ids.push_back(ei);
        ++kept;
      }
    }
    for (std::uint32_t ei : marked) {
      const Triple& t = h.edges[ei];
      mark_count[t.a] = mark_count[t.b] = mark_count[t.c] = 0;
    }
    ++rounds;
    if (kept == 0) break;  // edge count stalled

    std::size_t w = 0;
    for (std::uint32_t ei : alive) {
      const Triple& t = h.edges[ei];
      if (!used[t.a] && !used[t.b] && !used[t.c]) alive[w++] = ei;
    }
    alive.resize(w);
  }

  rng.shuffle(alive);
  detail::greedy_pass(h, alive, used, m);
  return {std::move(m), detail::finish_stats(h, m, "nibble", seed, rounds)};
}

enum class MatcherKind { greedy, nibble };

inline std::pair<Matching, MatchStats> run_matcher(const EdgeSet& h,
                                                   MatcherKind kind,
                                                   std::uint64_t seed,
                                                   double bite = 0.1) {
  return kind == MatcherKind::greedy ? random_greedy_matching(h, seed)
                                     : nibble_matching(h, seed, bite);
}

/// Outcome of splitting every center of a cross view into d clones with
/// balanced edge groups. Aux vertex ids: clone j of the k-th center is
/// k*d + j; the i-th Y vertex is d*|X| + i.
struct SplitResult {
  EdgeSet aux;
  std::uint32_t d = 1;
  std::vector<VertexId> centers;               // X in view order
  std::vector<Triple> original;                // per aux edge
  std::vector<VertexId> edge_center;           // per aux edge
  std::vector<std::uint32_t> edge_group;       // per aux edge
  std::vector<std::vector<std::uint32_t>> group_sizes;  // per center, size d
};

/// Splits the edges at each center into d groups (round-robin over a
/// shuffled order, so sizes differ by at most one) and rewires group j to
/// clone v_j. Centers of degree below d simply get empty groups.
inline SplitResult split_centers(const CrossView& g, std::uint32_t d,
                                 std::uint64_t seed) {
  if (d == 0) throw std::invalid_argument("split_centers: d must be >= 1");
  Rng rng(seed);
  const auto& xs = g.x_side();
  const auto& ys = g.y_side();

  std::vector<std::uint32_t> x_index(g.base().vertex_count(), 0);
  for (std::uint32_t i = 0; i < xs.size(); ++i) x_index[xs[i]] = i;
  std::vector<VertexId> y_id(g.base().vertex_count(), kNoVertex);
  for (std::uint32_t i = 0; i < ys.size(); ++i)
    y_id[ys[i]] = static_cast<VertexId>(d * xs.size() + i);

  std::vector<std::vector<std::uint32_t>> per_center(xs.size());
  for (std::uint32_t ei = 0; ei < g.edges().size(); ++ei) {
    const Triple& t = g.edges()[ei];
    VertexId center = g.in_x(t.a) ? t.a : (g.in_x(t.b) ? t.b : t.c);
    per_center[x_index[center]].push_back(ei);
  }

  SplitResult out;
  out.d = d;
  out.centers = xs;
  out.aux.n_vertices = static_cast<std::uint32_t>(d * xs.size() + ys.size());
  out.group_sizes.assign(xs.size(), std::vector<std::uint32_t>(d, 0));
  for (std::uint32_t k = 0; k < xs.size(); ++k) {
    std::vector<std::uint32_t>& list = per_center[k];
    rng.shuffle(list);
    for (std::uint32_t i = 0; i < list.size(); ++i) {
      const std::uint32_t j = i % d;
      const Triple& t = g.edges()[list[i]];
      VertexId u = g.in_x(t.a) ? t.b : t.a;
      VertexId w = g.in_x(t.c) ? t.b : t.c;
      out.aux.edges.push_back(
          make_triple(static_cast<VertexId>(k * d + j), y_id[u], y_id[w]));
      out.original.push_back(t);
      out.edge_center.push_back(xs[k]);
      out.edge_group.push_back(j);
      ++out.group_sizes[k][j];
    }
  }
  return out;
}

struct Star {
  VertexId center;
  std::vector<Triple> edges;
};

/// Vertex-disjoint hyperstars (size <= d) centered in the X side of a cross
/// view; `covered` lists the distinct vertices they touch.
struct StarForest {
  std::vector<Star> stars;
  std::vector<VertexId> covered;

  std::size_t total_edges() const {
    std::size_t n = 0;
    for (const Star& s : stars) n += s.edges.size();
    return n;
  }
};

/// Star packing by the split-and-match reduction: match the clone hypergraph
/// and contract each center's matched clones back into one star.
inline std::pair<StarForest, MatchStats> star_packing(const CrossView& g,
                                                      std::uint32_t d,
                                                      MatcherKind matcher,
                                                      std::uint64_t seed,
                                                      double bite = 0.1) {
  SplitResult split = split_centers(g, d, derive_seed(seed, 0));
  auto [m, stats] = run_matcher(split.aux, matcher, derive_seed(seed, 1), bite);

  std::vector<std::vector<Triple>> star_edges(split.centers.size());
  std::vector<std::uint32_t> x_index(g.base().vertex_count(), 0);
  for (std::uint32_t i = 0; i < split.centers.size(); ++i)
    x_index[split.centers[i]] = i;
  for (std::uint32_t ei : m.edge_ids)
    star_edges[x_index[split.edge_center[ei]]].push_back(split.original[ei]);

  StarForest forest;
  for (std::uint32_t k = 0; k < split.centers.size(); ++k) {
    if (star_edges[k].empty()) continue;
    forest.covered.push_back(split.centers[k]);
    for (const Triple& t : star_edges[k]) {
      VertexId u = g.in_x(t.a) ? t.b : t.a;
      VertexId w = g.in_x(t.c) ? t.b : t.c;
      forest.covered.push_back(u);
      forest.covered.push_back(w);
    }
    forest.stars.push_back(Star{split.centers[k], std::move(star_edges[k])});
  }
  return {std::move(forest), std::move(stats)};
}

/// Random simple (linear) 3-uniform hypergraph with about n*avg_degree/3
/// edges: uniform triples, rejecting any that would repeat a covered pair.
inline EdgeSet make_random_simple(std::uint32_t n, double avg_degree,
                                  std::uint64_t seed) {
  if (n < 3) throw std::invalid_argument("make_random_simple: n must be >= 3");
  const std::uint64_t target =
      static_cast<std::uint64_t>(static_cast<double>(n) * avg_degree / 3.0 + 0.5);
  Rng rng(seed);
  std::unordered_set<std::uint64_t> pairs;
  pairs.reserve(target * 4);
  auto code = [n](VertexId u, VertexId v) -> std::uint64_t {
    if (u > v) std::swap(u, v);
    return static_cast<std::uint64_t>(u) * n + v;
  };
  EdgeSet h;
  h.n_vertices = n;
  h.edges.reserve(target);
  std::uint64_t attempts = 0, max_attempts = 200 * target + 1000;
  while (h.edges.size() < target && attempts < max_attempts) {
    ++attempts;
    VertexId a = static_cast<VertexId>(rng.below(n));
    VertexId b = static_cast<VertexId>(rng.below(n));
    VertexId c = static_cast<VertexId>(rng.below(n));
    if (a == b || b == c || a == c) continue;
    std::uint64_t ab = code(a, b), ac = code(a, c), bc = code(b, c);
    if (pairs.count(ab) || pairs.count(ac) || pairs.count(bc)) continue;
    pairs.insert(ab);
    pairs.insert(ac);
    pairs.insert(bc);
    h.edges.push_back(make_triple(a, b, c));
  }
  if (h.edges.size() < target)
    throw std::runtime_error("make_random_simple: density not reachable");
  return h;
}

}  // namespace stedi
