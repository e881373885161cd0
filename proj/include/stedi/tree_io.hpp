#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "stedi/hypertree.hpp"
#include "stedi/sts_io.hpp"

namespace stedi {

// Format: header "|V| |E|", then |E| lines "parent childA childB".
// Comments ('#') and blank lines are skipped. Loading normalizes ids into
// canonical BFS order, so save(load(f)) is the canonical form of f.

inline Hypertree load_tree(std::istream& in) {
  std::string raw;
  std::size_t line_no = 0;
  auto next_line = [&](std::string& out) -> bool {
    while (std::getline(in, raw)) {
      ++line_no;
      std::size_t i = raw.find_first_not_of(" \t\r");
      if (i == std::string::npos || raw[i] == '#') continue;
      out = raw;
      return true;
    }
    return false;
  };

  std::string line;
  if (!next_line(line)) throw ParseError(line_no, "missing header");
  std::istringstream hs(line);
  std::uint64_t n = 0, k = 0;
  if (!(hs >> n >> k)) throw ParseError(line_no, "bad header, expected '|V| |E|'");
  if (n > 0xffffffffull) throw ParseError(line_no, "vertex count too large");

  std::vector<std::array<VertexId, 3>> edges;
  edges.reserve(k);
  for (std::uint64_t i = 0; i < k; ++i) {
    if (!next_line(line)) throw ParseError(line_no, "file truncated");
    std::istringstream ts(line);
    std::uint64_t p, a, b;
    if (!(ts >> p >> a >> b))
      throw ParseError(line_no, "bad edge, expected 'parent childA childB'");
    if (p >= n || a >= n || b >= n)
      throw ParseError(line_no, "vertex id out of range");
    edges.push_back({static_cast<VertexId>(p), static_cast<VertexId>(a),
                     static_cast<VertexId>(b)});
  }
  ValidationReport rep = validate_hypertree_edges(static_cast<VertexId>(n), edges);
  if (!rep.valid())
    throw std::runtime_error("invalid hypertree: " + rep.problems.front());
  return Hypertree(static_cast<VertexId>(n), edges);
}

inline Hypertree load_tree(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  return load_tree(f);
}

inline void save_tree(const Hypertree& t, std::ostream& out) {
  out << t.vertex_count() << ' ' << t.edge_count() << '\n';
  for (const Hypertree::Edge& e : t.edges())
    out << e.parent << ' ' << e.child_a << ' ' << e.child_b << '\n';
}

inline void save_tree(const Hypertree& t, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  save_tree(t, f);
}

}  // namespace stedi
