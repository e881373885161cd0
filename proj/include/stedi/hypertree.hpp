#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "stedi/hypergraph.hpp"

namespace stedi {

/// Structural check of a raw edge list against the hypertree axioms:
/// distinct vertices per edge, a unique parent edge per non-root vertex,
/// connectivity from the root (vertex 0), and |V| = 2|E| + 1.
inline ValidationReport validate_hypertree_edges(
    VertexId n, const std::vector<std::array<VertexId, 3>>& edges) {
  ValidationReport rep;
  if (n == 0) {
    rep.add("empty vertex set");
    return rep;
  }
  if (static_cast<std::uint64_t>(n) != 2 * static_cast<std::uint64_t>(edges.size()) + 1)
    rep.add("|V| != 2|E| + 1");
  std::vector<std::uint8_t> has_parent(n, 0);
  std::vector<std::vector<std::uint32_t>> kids(n);
  for (std::uint32_t i = 0; i < edges.size(); ++i) {
    auto [p, a, b] = edges[i];
    if (p >= n || a >= n || b >= n) {
      rep.add("edge " + std::to_string(i) + ": vertex id out of range");
      continue;
    }
    if (p == a || p == b || a == b) {
      rep.add("edge " + std::to_string(i) + ": repeated vertex");
      continue;
    }
    for (VertexId c : {a, b}) {
      if (c == 0)
        rep.add("edge " + std::to_string(i) + ": root listed as a child");
      else if (has_parent[c]) {
        std::ostringstream os;
        os << "vertex " << c << " has two parent edges";
        rep.add(os.str());
      } else {
        has_parent[c] = 1;
      }
    }
    kids[p].push_back(i);
  }
  if (!rep.problems.empty()) return rep;

  std::vector<std::uint8_t> seen(n, 0);
  std::vector<VertexId> queue{0};
  seen[0] = 1;
  std::size_t reached = 1;
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    VertexId v = queue[qi];
    for (std::uint32_t ei : kids[v]) {
      for (VertexId c : {edges[ei][1], edges[ei][2]}) {
        if (!seen[c]) {
          seen[c] = 1;
          ++reached;
          queue.push_back(c);
        }
      }
    }
  }
  if (reached != n) {
    std::ostringstream os;
    os << "disconnected: only " << reached << " of " << n
       << " vertices reachable from the root";
    rep.add(os.str());
  }
  return rep;
}

/// A rooted hypertree of triples {parent, childA, childB}. The constructor
/// validates the raw edge list, then relabels everything into canonical BFS
/// order: ids increase level by level (root 0), each level is a contiguous
/// id range, edges are sorted by parent, and childA < childB. Immutable.
class Hypertree {
 public:
  struct Edge {
    VertexId parent, child_a, child_b;
    friend bool operator==(const Edge&, const Edge&) = default;
  };

  Hypertree(VertexId n, const std::vector<std::array<VertexId, 3>>& raw_edges) {
    ValidationReport rep = validate_hypertree_edges(n, raw_edges);
    if (!rep.valid())
      throw std::invalid_argument("invalid hypertree: " + rep.problems.front());
    normalize(n, raw_edges);
  }

  VertexId vertex_count() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }

  std::uint32_t height() const {
    return static_cast<std::uint32_t>(level_off_.size()) - 2;
  }
  std::uint32_t level_count() const {
    return static_cast<std::uint32_t>(level_off_.size()) - 1;
  }
  VertexId level_begin(std::uint32_t i) const { return level_off_[i]; }
  VertexId level_end(std::uint32_t i) const { return level_off_[i + 1]; }
  std::uint64_t level_size(std::uint32_t i) const {
    return level_off_[i + 1] - level_off_[i];
  }
  std::uint32_t level_of(VertexId v) const { return level_of_[v]; }

  /// Parent edge index, or kNoEdge for the root.
  static constexpr std::uint32_t kNoEdge = 0xffffffffu;
  std::uint32_t parent_edge(VertexId v) const { return parent_edge_[v]; }
  VertexId parent_of(VertexId v) const {
    return v == 0 ? kNoVertex : edges_[parent_edge_[v]].parent;
  }
  VertexId sibling_of(VertexId v) const {
    if (v == 0) return kNoVertex;
    const Edge& e = edges_[parent_edge_[v]];
    return e.child_a == v ? e.child_b : e.child_a;
  }

  /// Child edges of v, in canonical (label) order.
  std::span<const std::uint32_t> child_edges(VertexId v) const {
    return {child_ids_.data() + child_off_[v], child_off_[v + 1] - child_off_[v]};
  }

  std::uint32_t forward_degree(VertexId v) const {
    return child_off_[v + 1] - child_off_[v];
  }

  std::uint32_t child_edge(VertexId v, std::uint32_t j) const {
    return child_ids_[child_off_[v] + j];
  }

  std::uint32_t max_forward_degree(std::uint32_t level) const {
    std::uint32_t d = 0;
    for (VertexId v = level_begin(level); v < level_end(level); ++v)
      d = std::max(d, forward_degree(v));
    return d;
  }

  std::uint32_t max_forward_degree() const {
    std::uint32_t d = 0;
    for (std::uint32_t lvl = 0; lvl < level_count(); ++lvl)
      d = std::max(d, max_forward_degree(lvl));
    return d;
  }

  bool is_hyperstar() const { return height() <= 1; }

 private:
  void normalize(VertexId n, const std::vector<std::array<VertexId, 3>>& raw) {
    n_ = n;
    std::vector<std::vector<std::uint32_t>> kids(n);
    for (std::uint32_t i = 0; i < raw.size(); ++i) kids[raw[i][0]].push_back(i);

    std::vector<VertexId> new_id(n, kNoVertex);
    std::vector<VertexId> order;  // old ids in BFS order
    order.reserve(n);
    order.push_back(0);
    new_id[0] = 0;
    level_off_ = {0, 1};
    std::size_t level_start = 0;
    while (order.size() < n) {
      std::size_t level_stop = order.size();
      for (std::size_t qi = level_start; qi < level_stop; ++qi) {
        for (std::uint32_t ei : kids[order[qi]]) {
          VertexId a = raw[ei][1], b = raw[ei][2];
          if (a > b) std::swap(a, b);
          new_id[a] = static_cast<VertexId>(order.size());
          order.push_back(a);
          new_id[b] = static_cast<VertexId>(order.size());
          order.push_back(b);
        }
      }
      level_start = level_stop;
      level_off_.push_back(static_cast<VertexId>(order.size()));
    }

    edges_.reserve(raw.size());
    for (std::size_t qi = 0; qi < order.size(); ++qi) {
      for (std::uint32_t ei : kids[order[qi]]) {
        VertexId a = new_id[raw[ei][1]], b = new_id[raw[ei][2]];
        if (a > b) std::swap(a, b);
        edges_.push_back(Edge{static_cast<VertexId>(qi), a, b});
      }
    }

    level_of_.resize(n);
    for (std::uint32_t lvl = 0; lvl + 1 < level_off_.size(); ++lvl)
      for (VertexId v = level_off_[lvl]; v < level_off_[lvl + 1]; ++v)
        level_of_[v] = lvl;

    parent_edge_.assign(n, kNoEdge);
    child_off_.assign(static_cast<std::size_t>(n) + 1, 0);
    for (std::uint32_t i = 0; i < edges_.size(); ++i) {
      parent_edge_[edges_[i].child_a] = i;
      parent_edge_[edges_[i].child_b] = i;
      ++child_off_[edges_[i].parent + 1];
    }
    for (std::size_t v = 0; v < n; ++v) child_off_[v + 1] += child_off_[v];
    child_ids_.resize(edges_.size());
    std::vector<std::uint32_t> cursor(child_off_.begin(), child_off_.end() - 1);
    for (std::uint32_t i = 0; i < edges_.size(); ++i)
      child_ids_[cursor[edges_[i].parent]++] = i;
  }

  VertexId n_ = 0;
  std::vector<Edge> edges_;
  std::vector<VertexId> level_off_;
  std::vector<std::uint32_t> level_of_;
  std::vector<std::uint32_t> parent_edge_;
  std::vector<std::uint32_t> child_off_, child_ids_;
};

namespace detail {
inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  if (b != 0 && a > 0xffffffffull * 4 / b)
    throw std::overflow_error("hypertree size overflows vertex id width");
  return a * b;
}
}  // namespace detail

/// Perfect d-ary hypertree of height h: every non-leaf vertex carries d
/// child edges (2d children), level i has (2d)^i vertices.
inline Hypertree perfect_d_ary(std::uint32_t d, std::uint32_t h) {
  if (d == 0) throw std::invalid_argument("perfect_d_ary: d must be >= 1");
  std::uint64_t level = 1, total = 1;
  std::vector<std::uint64_t> sizes{1};
  for (std::uint32_t i = 0; i < h; ++i) {
    level = detail::checked_mul(level, 2ull * d);
    total += level;
    if (total > 0xfffffff0ull)
      throw std::overflow_error("perfect_d_ary: tree too large");
    sizes.push_back(level);
  }
  std::vector<std::array<VertexId, 3>> edges;
  edges.reserve((total - 1) / 2);
  std::uint64_t start = 0, next_start = 1;
  for (std::uint32_t i = 0; i < h; ++i) {
    std::uint64_t child = next_start;
    for (std::uint64_t v = start; v < next_start; ++v) {
      for (std::uint32_t j = 0; j < d; ++j) {
        edges.push_back({static_cast<VertexId>(v), static_cast<VertexId>(child),
                         static_cast<VertexId>(child + 1)});
        child += 2;
      }
    }
    start = next_start;
    next_start = child;
  }
  return Hypertree(static_cast<VertexId>(total), edges);
}

/// D-ary hypertree driven by a per-level forward degree sequence: every
/// vertex at level j-1 has degs[j-1] child edges.
inline Hypertree d_sequence_tree(const std::vector<std::uint32_t>& degs) {
  for (std::uint32_t d : degs)
    if (d == 0) throw std::invalid_argument("d_sequence_tree: degrees must be >= 1");
  std::uint64_t level = 1, total = 1;
  for (std::uint32_t d : degs) {
    level = detail::checked_mul(level, 2ull * d);
    total += level;
    if (total > 0xfffffff0ull)
      throw std::overflow_error("d_sequence_tree: tree too large");
  }
  std::vector<std::array<VertexId, 3>> edges;
  edges.reserve((total - 1) / 2);
  std::uint64_t start = 0, next_start = 1;
  for (std::uint32_t d : degs) {
    std::uint64_t child = next_start;
    for (std::uint64_t v = start; v < next_start; ++v) {
      for (std::uint32_t j = 0; j < d; ++j) {
        edges.push_back({static_cast<VertexId>(v), static_cast<VertexId>(child),
                         static_cast<VertexId>(child + 1)});
        child += 2;
      }
    }
    start = next_start;
    next_start = child;
  }
  return Hypertree(static_cast<VertexId>(total), edges);
}

/// Almost perfect d-ary hypertree: the perfect tree minus its 2*t_remove
/// lexicographically smallest leaves. Leaves leave in sibling pairs, so each
/// removal deletes one whole bottom edge and the result stays a hypertree.
inline Hypertree almost_perfect(std::uint32_t d, std::uint32_t h,
                                std::uint64_t t_remove) {
  if (d == 0) throw std::invalid_argument("almost_perfect: d must be >= 1");
  if (t_remove == 0) return perfect_d_ary(d, h);
  if (h == 0) throw std::invalid_argument("almost_perfect: no leaves to remove at h=0");
  std::uint64_t last = 1;
  for (std::uint32_t i = 0; i < h; ++i) last = detail::checked_mul(last, 2ull * d);
  if (2 * t_remove > last)
    throw std::invalid_argument("almost_perfect: t_remove exceeds the last level");

  Hypertree full = perfect_d_ary(d, h);
  const VertexId cut_begin = full.level_begin(h);
  const VertexId cut_end = static_cast<VertexId>(cut_begin + 2 * t_remove);
  // Canonical ids are in BFS label order, so the 2t smallest leaves are the
  // first 2t ids of the last level.
  std::vector<std::array<VertexId, 3>> edges;
  edges.reserve(full.edge_count() - t_remove);
  auto remap = [&](VertexId v) -> VertexId {
    return v >= cut_end ? v - 2 * static_cast<VertexId>(t_remove) : v;
  };
  for (const Hypertree::Edge& e : full.edges()) {
    if (e.child_a >= cut_begin && e.child_a < cut_end) continue;  // removed pair
    edges.push_back({remap(e.parent), remap(e.child_a), remap(e.child_b)});
  }
  return Hypertree(static_cast<VertexId>(full.vertex_count() - 2 * t_remove), edges);
}

/// The perfect d-ary hypertree of maximal height whose size stays <= n.
inline Hypertree largest_perfect_at_most(std::uint32_t d, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("largest_perfect_at_most: n must be >= 1");
  std::uint32_t h = 0;
  std::uint64_t level = 1, total = 1;
  while (true) {
    std::uint64_t next_level = 0, next_total = 0;
    bool overflow = false;
    if (level > n / (2ull * d)) {
      overflow = true;  // next level alone would exceed n
    } else {
      next_level = level * 2ull * d;
      next_total = total + next_level;
    }
    if (overflow || next_total > n) break;
    level = next_level;
    total = next_total;
    ++h;
  }
  return perfect_d_ary(d, h);
}

/// Report-style wrapper over an already-built tree (always valid by class
/// invariant, but re-checkable for tests and the CLI).
inline ValidationReport validate_hypertree(const Hypertree& t) {
  std::vector<std::array<VertexId, 3>> raw;
  raw.reserve(t.edge_count());
  for (const Hypertree::Edge& e : t.edges()) raw.push_back({e.parent, e.child_a, e.child_b});
  return validate_hypertree_edges(t.vertex_count(), raw);
}

/// The split of T at i0 = max{ i : |V_i| <= eps*n }: the prefix tree T0 with
/// last level L0, and the remaining levels L_1..L_t that the pipeline feeds
/// class by class.
struct LevelDecomposition {
  std::uint32_t i0 = 0;
  std::uint32_t t = 0;
  std::vector<std::uint64_t> ell;  // ell[i] = |L_i|, i in [0, t]
  std::uint64_t t0_vertex_count = 0;

  std::uint64_t l_level(std::uint32_t i) const { return i0 + i; }
};

inline LevelDecomposition decompose_levels(const Hypertree& tree, double eps,
                                           std::uint64_t n) {
  if (eps * static_cast<double>(n) < 1.0)
    throw std::invalid_argument("decompose_levels: eps*n < 1, root level does not fit");
  const double budget = eps * static_cast<double>(n);
  std::uint32_t i0 = 0;
  for (std::uint32_t i = 0; i < tree.level_count(); ++i)
    if (static_cast<double>(tree.level_size(i)) <= budget) i0 = i;
  LevelDecomposition dec;
  dec.i0 = i0;
  dec.t = tree.height() - i0;
  for (std::uint32_t i = 0; i <= dec.t; ++i) dec.ell.push_back(tree.level_size(i0 + i));
  dec.t0_vertex_count = tree.level_end(i0);
  return dec;
}

}  // namespace stedi
