#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stedi/embedder.hpp"
#include "stedi/hypergraph.hpp"
#include "stedi/hypertree.hpp"

namespace stedi {

/// Exhaustive embedding decision for tiny instances. `determinate` is false
/// when the node budget ran out before the search space was exhausted.
struct OracleResult {
  bool determinate = false;
  bool embeddable = false;
  std::optional<Embedding> witness;
  std::uint64_t nodes_explored = 0;
};

namespace detail {

// AHU-style canonical form per vertex; equal strings == isomorphic rooted
// subtrees. Fine at oracle scale (trees of a dozen vertices).
inline std::vector<std::string> subtree_canon(const Hypertree& tree) {
  std::vector<std::string> canon(tree.vertex_count());
  for (std::uint32_t lvl = tree.level_count(); lvl-- > 0;) {
    for (VertexId v = tree.level_begin(lvl); v < tree.level_end(lvl); ++v) {
      std::vector<std::string> keys;
      for (std::uint32_t ei : tree.child_edges(v)) {
        const Hypertree::Edge& e = tree.edges()[ei];
        const std::string &ca = canon[e.child_a], &cb = canon[e.child_b];
        keys.push_back(ca <= cb ? "(" + ca + "," + cb + ")"
                                : "(" + cb + "," + ca + ")");
      }
      std::sort(keys.begin(), keys.end());
      std::string s = "[";
      for (const std::string& k : keys) s += k;
      s += "]";
      canon[v] = std::move(s);
    }
  }
  return canon;
}

struct OracleSearch {
  const TripleSystem& sys;
  const Hypertree& tree;
  std::uint64_t budget;

  std::vector<std::string> canon;
  std::vector<std::string> edge_key;      // canonical form of an edge's subtree
  std::vector<std::uint8_t> twin_of_prev; // edge shares parent+key with edge-1
  std::vector<std::uint8_t> symmetric_children;  // canon(a) == canon(b)

  std::vector<VertexId> phi;
  std::vector<std::uint8_t> used;
  std::vector<std::uint32_t> chosen_pos;  // incidence position per edge
  std::vector<std::uint32_t> chosen_triple;
  std::uint64_t nodes = 0;
  bool out_of_budget = false;

  OracleSearch(const TripleSystem& s, const Hypertree& t, std::uint64_t b)
      : sys(s), tree(t), budget(b) {
    canon = subtree_canon(tree);
    edge_key.resize(tree.edge_count());
    twin_of_prev.assign(tree.edge_count(), 0);
    symmetric_children.assign(tree.edge_count(), 0);
    for (std::uint32_t ei = 0; ei < tree.edge_count(); ++ei) {
      const Hypertree::Edge& e = tree.edges()[ei];
      const std::string &ca = canon[e.child_a], &cb = canon[e.child_b];
      edge_key[ei] = ca <= cb ? ca + "|" + cb : cb + "|" + ca;
      symmetric_children[ei] = (ca == cb);
      if (ei > 0 && tree.edges()[ei - 1].parent == e.parent &&
          edge_key[ei - 1] == edge_key[ei])
        twin_of_prev[ei] = 1;
    }
    phi.assign(tree.vertex_count(), kNoVertex);
    used.assign(sys.vertex_count(), 0);
    chosen_pos.assign(tree.edge_count(), 0);
    chosen_triple.assign(tree.edge_count(), 0);
  }

  bool place(std::uint32_t ei) {
    if (ei == tree.edge_count()) return true;
    if (++nodes > budget) {
      out_of_budget = true;
      return false;
    }
    const Hypertree::Edge& e = tree.edges()[ei];
    const VertexId host = phi[e.parent];
    auto inc = sys.incident(host);
    // interchangeable sibling edges must pick strictly increasing triples
    const std::uint32_t lo = twin_of_prev[ei] ? chosen_pos[ei - 1] + 1 : 0;
    for (std::uint32_t pos = lo; pos < inc.size(); ++pos) {
      const Triple& t = sys.triples()[inc[pos]];
      VertexId u = t.a == host ? t.b : t.a;
      VertexId w = t.c == host ? t.b : t.c;
      if (used[u] || used[w]) continue;
      const int orientations = symmetric_children[ei] ? 1 : 2;
      for (int o = 0; o < orientations; ++o) {
        const VertexId iu = o == 0 ? u : w;
        const VertexId iw = o == 0 ? w : u;
        phi[e.child_a] = iu;
        phi[e.child_b] = iw;
        used[iu] = used[iw] = 1;
        chosen_pos[ei] = pos;
        chosen_triple[ei] = inc[pos];
        if (place(ei + 1)) return true;
        used[iu] = used[iw] = 0;
        if (out_of_budget) return false;
      }
    }
    phi[e.child_a] = phi[e.child_b] = kNoVertex;
    return false;
  }
};

}  // namespace detail

inline OracleResult oracle_embed(const TripleSystem& sys, const Hypertree& tree,
                                 std::uint64_t budget = 50'000'000) {
  OracleResult res;
  if (tree.vertex_count() > sys.vertex_count()) {
    res.determinate = true;
    return res;
  }
  detail::OracleSearch search(sys, tree, budget);
  for (VertexId root = 0; root < sys.vertex_count(); ++root) {
    search.phi[0] = root;
    search.used[root] = 1;
    if (search.place(0)) {
      res.determinate = true;
      res.embeddable = true;
      res.witness = Embedding{search.phi, search.chosen_triple};
      res.nodes_explored = search.nodes;
      return res;
    }
    search.used[root] = 0;
    if (search.out_of_budget) {
      res.nodes_explored = search.nodes;
      return res;  // indeterminate
    }
  }
  res.determinate = true;
  res.embeddable = false;
  res.nodes_explored = search.nodes;
  return res;
}

}  // namespace stedi
