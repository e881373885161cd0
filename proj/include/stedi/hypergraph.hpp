#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace stedi {

using VertexId = std::uint32_t;

inline constexpr VertexId kNoVertex = 0xffffffffu;

/// A 3-element hyperedge, stored with a < b < c.
struct Triple {
  VertexId a = 0, b = 0, c = 0;
  friend bool operator==(const Triple&, const Triple&) = default;
  friend auto operator<=>(const Triple&, const Triple&) = default;
  bool contains(VertexId v) const { return v == a || v == b || v == c; }
};

inline Triple make_triple(VertexId x, VertexId y, VertexId z) {
  if (x == y || y == z || x == z)
    throw std::invalid_argument("triple vertices must be distinct");
  Triple t{x, y, z};
  if (t.a > t.b) std::swap(t.a, t.b);
  if (t.b > t.c) std::swap(t.b, t.c);
  if (t.a > t.b) std::swap(t.a, t.b);
  return t;
}

/// Outcome of a report-style validation: counts plus a capped list of
/// human-readable findings (the counts are always exact).
struct ValidationReport {
  std::vector<std::string> problems;
  std::uint64_t duplicate_pairs = 0;
  std::uint64_t uncovered_pairs = 0;

  bool valid() const {
    return problems.empty() && duplicate_pairs == 0 && uncovered_pairs == 0;
  }
  void add(std::string msg, std::size_t cap = 32) {
    if (problems.size() < cap) problems.push_back(std::move(msg));
  }
};

/// A simple 3-uniform hypergraph with a pair -> third-vertex index and
/// per-vertex incidence lists. Immutable after construction; construction
/// tolerates non-simple input so the validators can report on it.
///
/// The pair index is a flat triangular array, which keeps pair_partner O(1)
/// but caps the practical vertex count around 2*10^4 (the table is
/// m(m-1)/2 words).
class TripleSystem {
 public:
  TripleSystem(VertexId m, std::vector<Triple> triples)
      : m_(m), triples_(std::move(triples)) {
    for (const Triple& t : triples_) {
      if (t.c >= m_ || !(t.a < t.b && t.b < t.c))
        throw std::invalid_argument("triple out of range or not sorted");
    }
    std::sort(triples_.begin(), triples_.end());
    build_pair_index();
    build_incidence();
  }

  VertexId vertex_count() const { return m_; }
  std::size_t triple_count() const { return triples_.size(); }
  const std::vector<Triple>& triples() const { return triples_; }

  std::span<const std::uint32_t> incident(VertexId v) const {
    check_vertex(v);
    return {inc_.data() + inc_off_[v], inc_off_[v + 1] - inc_off_[v]};
  }

  std::uint32_t degree(VertexId v) const {
    check_vertex(v);
    return inc_off_[v + 1] - inc_off_[v];
  }

  /// The unique w with {u,v,w} an edge, or kNoVertex if the pair is
  /// uncovered. If two triples share the pair, the lexicographically first
  /// one wins (validate_simple reports the conflict).
  VertexId pair_partner(VertexId u, VertexId v) const {
    if (u == v) throw std::invalid_argument("pair_partner: u == v");
    check_vertex(u);
    check_vertex(v);
    return partner_[pair_slot(u, v)];
  }

  bool pair_covered(VertexId u, VertexId v) const {
    return pair_partner(u, v) != kNoVertex;
  }

  std::uint64_t pair_count() const {
    return static_cast<std::uint64_t>(m_) * (m_ - 1) / 2;
  }
  std::uint64_t covered_pair_count() const { return covered_pairs_; }
  std::uint64_t duplicate_pair_incidences() const { return dup_incidences_; }

  /// True iff every pair is covered exactly once (which forces
  /// |triples| = m(m-1)/6). Computed once at construction.
  bool is_sts() const {
    return dup_incidences_ == 0 && covered_pairs_ == pair_count();
  }

 private:
  void check_vertex(VertexId v) const {
    if (v >= m_) throw std::out_of_range("vertex id out of range");
  }

  // Upper-triangular slot of pair {u,v}, u != v.
  std::uint64_t pair_slot(VertexId u, VertexId v) const {
    if (u > v) std::swap(u, v);
    std::uint64_t row = u, col = v;
    return row * m_ - row * (row + 1) / 2 + (col - row - 1);
  }

  void build_pair_index() {
    partner_.assign(pair_count(), kNoVertex);
    covered_pairs_ = 0;
    dup_incidences_ = 0;
    for (const Triple& t : triples_) {
      record_pair(t.a, t.b, t.c);
      record_pair(t.a, t.c, t.b);
      record_pair(t.b, t.c, t.a);
    }
  }

  void record_pair(VertexId u, VertexId v, VertexId w) {
    VertexId& slot = partner_[pair_slot(u, v)];
    if (slot == kNoVertex) {
      slot = w;
      ++covered_pairs_;
    } else {
      ++dup_incidences_;
    }
  }

  void build_incidence() {
    inc_off_.assign(static_cast<std::size_t>(m_) + 1, 0);
    for (const Triple& t : triples_) {
      ++inc_off_[t.a + 1];
      ++inc_off_[t.b + 1];
      ++inc_off_[t.c + 1];
    }
    for (std::size_t v = 0; v < m_; ++v) inc_off_[v + 1] += inc_off_[v];
    inc_.resize(triples_.size() * 3);
    std::vector<std::uint32_t> cursor(inc_off_.begin(), inc_off_.end() - 1);
    for (std::uint32_t i = 0; i < triples_.size(); ++i) {
      const Triple& t = triples_[i];
      inc_[cursor[t.a]++] = i;
      inc_[cursor[t.b]++] = i;
      inc_[cursor[t.c]++] = i;
    }
  }

  VertexId m_;
  std::vector<Triple> triples_;
  std::vector<VertexId> partner_;
  std::vector<std::uint32_t> inc_off_, inc_;
  std::uint64_t covered_pairs_ = 0, dup_incidences_ = 0;
};

/// Lists every pair covered by two or more triples. Empty report iff the
/// hypergraph is simple (linear).
inline ValidationReport validate_simple(const TripleSystem& sys) {
  ValidationReport rep;
  if (sys.duplicate_pair_incidences() == 0) return rep;
  // Re-walk triples: a pair is duplicated iff some triple disagrees with
  // the (first-wins) index entry.
  auto check = [&](VertexId u, VertexId v, VertexId w) {
    if (sys.pair_partner(u, v) != w) {
      ++rep.duplicate_pairs;
      std::ostringstream os;
      os << "pair (" << u << "," << v << ") covered more than once";
      rep.add(os.str());
    }
  };
  for (const Triple& t : sys.triples()) {
    check(t.a, t.b, t.c);
    check(t.a, t.c, t.b);
    check(t.b, t.c, t.a);
  }
  return rep;
}

/// Valid iff every pair of vertices lies in exactly one triple.
inline ValidationReport validate_sts(const TripleSystem& sys) {
  ValidationReport rep = validate_simple(sys);
  const VertexId m = sys.vertex_count();
  if (sys.covered_pair_count() != sys.pair_count()) {
    for (VertexId u = 0; u < m; ++u) {
      for (VertexId v = u + 1; v < m; ++v) {
        if (!sys.pair_covered(u, v)) {
          ++rep.uncovered_pairs;
          std::ostringstream os;
          os << "pair (" << u << "," << v << ") uncovered";
          rep.add(os.str());
        }
      }
    }
  }
  return rep;
}

/// The cross subhypergraph S[X,Y]: edges with exactly one vertex in X and
/// two in Y. Edges are materialized once; degree queries are O(1).
class CrossView {
 public:
  CrossView(const TripleSystem& base, std::vector<VertexId> x,
            std::vector<VertexId> y)
      : base_(&base), x_(std::move(x)), y_(std::move(y)) {
    side_.assign(base.vertex_count(), 0);
    for (VertexId v : x_) {
      if (v >= base.vertex_count()) throw std::invalid_argument("X out of range");
      side_[v] = 1;
    }
    for (VertexId v : y_) {
      if (v >= base.vertex_count()) throw std::invalid_argument("Y out of range");
      if (side_[v] == 1) throw std::invalid_argument("X and Y overlap");
      side_[v] = 2;
    }
    deg_.assign(base.vertex_count(), 0);
    for (VertexId v : x_) {
      for (std::uint32_t ti : base.incident(v)) {
        const Triple& t = base.triples()[ti];
        VertexId u = t.a == v ? t.b : t.a;
        VertexId w = t.c == v ? t.b : t.c;
        if (side_[u] == 2 && side_[w] == 2) {
          edges_.push_back(t);
          ++deg_[v];
          ++deg_[u];
          ++deg_[w];
        }
      }
    }
  }

  const TripleSystem& base() const { return *base_; }
  const std::vector<VertexId>& x_side() const { return x_; }
  const std::vector<VertexId>& y_side() const { return y_; }
  const std::vector<Triple>& edges() const { return edges_; }

  bool in_x(VertexId v) const { return side_[v] == 1; }
  bool in_y(VertexId v) const { return side_[v] == 2; }

  /// Degree within the view; for v in X this counts edges centered at v.
  std::uint32_t view_degree(VertexId v) const { return deg_[v]; }

 private:
  const TripleSystem* base_;
  std::vector<VertexId> x_, y_;
  std::vector<std::uint8_t> side_;
  std::vector<std::uint32_t> deg_;
  std::vector<Triple> edges_;
};

inline CrossView cross_view(const TripleSystem& sys, std::vector<VertexId> x,
                            std::vector<VertexId> y) {
  return CrossView(sys, std::move(x), std::move(y));
}

/// Number of vertices v outside C with fewer than (1-alpha)*|L0| edges into
/// S[L0, V \ C]. For an STS this is at most |C|/alpha for any L0 inside C:
/// each x in L0 pairs every outside vertex with a unique partner, so at most
/// |C| of those partners per x can escape into C.
inline std::uint64_t low_cross_degree_count(const TripleSystem& sys,
                                            const std::vector<std::uint8_t>& in_c,
                                            const std::vector<std::uint8_t>& in_l0,
                                            double alpha) {
  std::uint64_t ell0 = 0;
  for (std::size_t v = 0; v < in_l0.size(); ++v)
    if (in_l0[v]) ++ell0;
  const double threshold = (1.0 - alpha) * static_cast<double>(ell0);
  std::uint64_t bad = 0;
  for (VertexId v = 0; v < sys.vertex_count(); ++v) {
    if (in_c[v]) continue;
    std::uint32_t deg = 0;
    for (std::uint32_t ti : sys.incident(v)) {
      const Triple& t = sys.triples()[ti];
      VertexId u = t.a == v ? t.b : t.a;
      VertexId w = t.c == v ? t.b : t.c;
      // exactly one of {u,w} in L0, the other outside C
      if ((in_l0[u] && !in_c[w]) || (in_l0[w] && !in_c[u])) ++deg;
    }
    if (static_cast<double>(deg) < threshold) ++bad;
  }
  return bad;
}

}  // namespace stedi
