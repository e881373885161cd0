#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "stedi/hypergraph.hpp"

namespace stedi {

/// Malformed input text; `line` is 1-based. Distinct from validation
/// problems (a loaded system with duplicate pairs parses fine and is left
/// to validate_simple / validate_sts).
struct ParseError : std::runtime_error {
  ParseError(std::size_t line_no, const std::string& what_arg)
      : std::runtime_error("line " + std::to_string(line_no) + ": " + what_arg),
        line(line_no) {}
  std::size_t line;
};

// Format: header "m k", then k lines "a b c" with 0 <= a < b < c < m.
// Lines starting with '#' and blank lines are skipped.

inline TripleSystem load_sts(std::istream& in) {
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
  std::uint64_t m = 0, k = 0;
  if (!(hs >> m >> k)) throw ParseError(line_no, "bad header, expected 'm k'");
  if (m > 0xffffffffull) throw ParseError(line_no, "vertex count too large");

  std::vector<Triple> triples;
  triples.reserve(k);
  for (std::uint64_t i = 0; i < k; ++i) {
    if (!next_line(line))
      throw ParseError(line_no, "expected " + std::to_string(k) +
                                    " triples, file truncated");
    std::istringstream ts(line);
    std::uint64_t a, b, c;
    if (!(ts >> a >> b >> c))
      throw ParseError(line_no, "bad triple, expected 'a b c'");
    if (!(a < b && b < c))
      throw ParseError(line_no, "triple not strictly ascending");
    if (c >= m) throw ParseError(line_no, "vertex id out of range");
    triples.push_back(Triple{static_cast<VertexId>(a), static_cast<VertexId>(b),
                             static_cast<VertexId>(c)});
  }
  return TripleSystem(static_cast<VertexId>(m), std::move(triples));
}

inline TripleSystem load_sts(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  return load_sts(f);
}

inline void save_sts(const TripleSystem& sys, std::ostream& out) {
  out << sys.vertex_count() << ' ' << sys.triple_count() << '\n';
  for (const Triple& t : sys.triples())
    out << t.a << ' ' << t.b << ' ' << t.c << '\n';
}

inline void save_sts(const TripleSystem& sys, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  save_sts(sys, f);
}

inline std::string sts_to_string(const TripleSystem& sys) {
  std::ostringstream os;
  save_sts(sys, os);
  return os.str();
}

}  // namespace stedi
