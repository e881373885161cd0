#pragma once

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "stedi/hypertree.hpp"
#include "stedi/tree_io.hpp"

namespace stedi {

/// Builds a tree from a compact spec string:
///   largest            largest perfect d-ary tree with <= m/(1+mu) vertices
///   perfect:D,H        perfect D-ary of height H
///   almost:D,H,T       perfect D-ary of height H minus 2T smallest leaves
///   dseq:D1,D2,...     per-level forward degrees
///   star:A             hyperstar of size A
///   file:PATH          load from the hypertree text format
/// Throws std::invalid_argument on a malformed spec.
inline Hypertree make_tree(const std::string& spec, std::uint32_t d, double mu,
                           std::uint64_t m) {
  auto nums = [](const std::string& s) {
    std::vector<std::uint64_t> out;
    std::istringstream is(s);
    std::string item;
    while (std::getline(is, item, ',')) {
      std::istringstream vs(item);
      std::uint64_t v;
      if (!(vs >> v)) throw std::invalid_argument("bad number in tree spec");
      out.push_back(v);
    }
    return out;
  };
  if (spec == "largest") {
    const std::uint64_t budget =
        static_cast<std::uint64_t>(static_cast<double>(m) / (1.0 + mu));
    if (budget == 0) throw std::invalid_argument("tree spec: budget is zero");
    return largest_perfect_at_most(d, budget);
  }
  std::size_t colon = spec.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("bad tree spec '" + spec + "'");
  const std::string head = spec.substr(0, colon);
  const std::string tail = spec.substr(colon + 1);
  if (head == "perfect") {
    auto v = nums(tail);
    if (v.size() != 2) throw std::invalid_argument("perfect:D,H takes two numbers");
    return perfect_d_ary(static_cast<std::uint32_t>(v[0]),
                         static_cast<std::uint32_t>(v[1]));
  }
  if (head == "almost") {
    auto v = nums(tail);
    if (v.size() != 3) throw std::invalid_argument("almost:D,H,T takes three numbers");
    return almost_perfect(static_cast<std::uint32_t>(v[0]),
                          static_cast<std::uint32_t>(v[1]), v[2]);
  }
  if (head == "dseq") {
    auto v = nums(tail);
    if (v.empty()) throw std::invalid_argument("dseq needs at least one degree");
    std::vector<std::uint32_t> degs(v.begin(), v.end());
    return d_sequence_tree(degs);
  }
  if (head == "star") {
    auto v = nums(tail);
    if (v.size() != 1) throw std::invalid_argument("star:A takes one number");
    if (v[0] == 0) return perfect_d_ary(1, 0);
    return d_sequence_tree({static_cast<std::uint32_t>(v[0])});
  }
  if (head == "file") return load_tree(tail);
  throw std::invalid_argument("bad tree spec '" + spec + "'");
}

}  // namespace stedi
