#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "stedi/hypergraph.hpp"
#include "stedi/rng.hpp"

namespace stedi {

/// Bose construction, n = 3 (mod 6). Points are Z_q x {0,1,2} with q = n/3
/// odd, over the idempotent commutative quasigroup x*y = (x+y)(q+1)/2 mod q.
/// Vertex (x,j) gets id 3x+j.
inline TripleSystem bose(std::uint32_t n) {
  if (n % 6 != 3) throw std::invalid_argument("bose: n must be 3 (mod 6)");
  const std::uint32_t q = n / 3;
  const std::uint64_t half = (static_cast<std::uint64_t>(q) + 1) / 2;
  auto op = [&](std::uint32_t x, std::uint32_t y) -> std::uint32_t {
    return static_cast<std::uint32_t>((static_cast<std::uint64_t>(x) + y) * half % q);
  };
  auto id = [&](std::uint32_t x, std::uint32_t j) -> VertexId { return 3 * x + j; };

  std::vector<Triple> triples;
  triples.reserve(static_cast<std::size_t>(n) * (n - 1) / 6);
  for (std::uint32_t x = 0; x < q; ++x)
    triples.push_back(make_triple(id(x, 0), id(x, 1), id(x, 2)));
  for (std::uint32_t x = 0; x < q; ++x)
    for (std::uint32_t y = x + 1; y < q; ++y)
      for (std::uint32_t j = 0; j < 3; ++j)
        triples.push_back(make_triple(id(x, j), id(y, j), id(op(x, y), (j + 1) % 3)));
  return TripleSystem(n, std::move(triples));
}

/// Skolem construction, n = 1 (mod 6), n >= 7. Points are Z_{2s} x {0,1,2}
/// plus one point at infinity (id n-1), with s = (n-1)/6. Uses the
/// half-idempotent commutative quasigroup x*y = psi(x+y mod 2s) where psi
/// maps even e to e/2 and odd e to s+(e-1)/2.
inline TripleSystem skolem(std::uint32_t n) {
  if (n % 6 != 1 || n < 7)
    throw std::invalid_argument("skolem: n must be 1 (mod 6) and >= 7");
  const std::uint32_t s = (n - 1) / 6;
  const std::uint32_t q = 2 * s;
  auto psi = [&](std::uint32_t e) -> std::uint32_t {
    return e % 2 == 0 ? e / 2 : s + (e - 1) / 2;
  };
  auto op = [&](std::uint32_t x, std::uint32_t y) -> std::uint32_t {
    return psi((x + y) % q);
  };
  auto id = [&](std::uint32_t x, std::uint32_t j) -> VertexId { return 3 * x + j; };
  const VertexId inf = n - 1;

  std::vector<Triple> triples;
  triples.reserve(static_cast<std::size_t>(n) * (n - 1) / 6);
  for (std::uint32_t x = 0; x < s; ++x)
    triples.push_back(make_triple(id(x, 0), id(x, 1), id(x, 2)));
  for (std::uint32_t x = 0; x < s; ++x)
    for (std::uint32_t j = 0; j < 3; ++j)
      triples.push_back(make_triple(inf, id(s + x, j), id(x, (j + 1) % 3)));
  for (std::uint32_t x = 0; x < q; ++x)
    for (std::uint32_t y = x + 1; y < q; ++y)
      for (std::uint32_t j = 0; j < 3; ++j)
        triples.push_back(make_triple(id(x, j), id(y, j), id(op(x, y), (j + 1) % 3)));
  return TripleSystem(n, std::move(triples));
}

inline bool sts_order_admissible(std::uint64_t n) {
  return n % 6 == 1 || n % 6 == 3;
}

/// Stinson-style hill climbing: grow a partial triple system by resolving
/// one uncovered pair at a time; a collision with an existing triple swaps
/// that triple out. Reproducible for a fixed seed. Returns nullopt if the
/// iteration budget runs out (max_iters 0 means the 50*n^2 default).
inline std::optional<TripleSystem> random_sts(std::uint32_t n, std::uint64_t seed,
                                              std::uint64_t max_iters = 0) {
  if (!sts_order_admissible(n))
    throw std::invalid_argument("random_sts: n must be 1 or 3 (mod 6)");
  if (max_iters == 0) max_iters = 50ull * n * n;
  const std::uint64_t total_pairs = static_cast<std::uint64_t>(n) * (n - 1) / 2;

  std::vector<VertexId> partner(total_pairs, kNoVertex);
  auto slot = [&](VertexId u, VertexId v) -> std::uint64_t {
    if (u > v) std::swap(u, v);
    std::uint64_t row = u, col = v;
    return row * n - row * (row + 1) / 2 + (col - row - 1);
  };

  std::uint64_t covered = 0;
  auto cover = [&](VertexId u, VertexId v, VertexId w) {
    partner[slot(u, v)] = w;
    ++covered;
  };
  auto uncover = [&](VertexId u, VertexId v) {
    partner[slot(u, v)] = kNoVertex;
    --covered;
  };

  Rng rng(seed);

  // Uncovered pairs are sampled by rejection while they are plentiful; once
  // they get scarce we switch to an explicit list with lazy deletion.
  std::vector<std::uint64_t> open;  // packed (u<<32)|v, may hold stale entries
  bool dense = false;
  auto note_uncovered = [&](VertexId u, VertexId v) {
    if (dense) {
      if (u > v) std::swap(u, v);
      open.push_back((static_cast<std::uint64_t>(u) << 32) | v);
    }
  };
  auto switch_to_dense = [&]() {
    dense = true;
    open.clear();
    for (VertexId u = 0; u < n; ++u)
      for (VertexId v = u + 1; v < n; ++v)
        if (partner[slot(u, v)] == kNoVertex)
          open.push_back((static_cast<std::uint64_t>(u) << 32) | v);
  };

  auto pick_uncovered = [&](VertexId& u, VertexId& v) -> bool {
    if (!dense) {
      for (int tries = 0; tries < 64; ++tries) {
        VertexId a = static_cast<VertexId>(rng.below(n));
        VertexId b = static_cast<VertexId>(rng.below(n));
        if (a == b) continue;
        if (partner[slot(a, b)] == kNoVertex) {
          u = std::min(a, b);
          v = std::max(a, b);
          return true;
        }
      }
      switch_to_dense();
    }
    while (!open.empty()) {
      std::size_t i = static_cast<std::size_t>(rng.below(open.size()));
      std::uint64_t code = open[i];
      VertexId a = static_cast<VertexId>(code >> 32);
      VertexId b = static_cast<VertexId>(code & 0xffffffffu);
      if (partner[slot(a, b)] == kNoVertex) {
        u = a;
        v = b;
        return true;
      }
      open[i] = open.back();  // stale entry
      open.pop_back();
    }
    return false;
  };

  std::uint64_t iters = 0;
  while (covered < total_pairs && iters < max_iters) {
    ++iters;
    // keep the lazy list from accumulating too many stale entries
    if (dense && open.size() > 4 * (total_pairs - covered) + 1024) {
      std::size_t w = 0;
      for (std::uint64_t code : open) {
        VertexId a = static_cast<VertexId>(code >> 32);
        VertexId b = static_cast<VertexId>(code & 0xffffffffu);
        if (partner[slot(a, b)] == kNoVertex) open[w++] = code;
      }
      open.resize(w);
    }
    VertexId x, y;
    if (!pick_uncovered(x, y)) break;  // nothing uncovered after all

    VertexId z = x;
    while (z == x || z == y) z = static_cast<VertexId>(rng.below(n));
    VertexId px = partner[slot(x, z)];
    VertexId py = partner[slot(y, z)];
    if (px != kNoVertex && py != kNoVertex) continue;  // double collision, retry

    if (px != kNoVertex) {
      // swap out {x,z,px}
      uncover(x, z);
      uncover(x, px);
      uncover(z, px);
      note_uncovered(x, px);
      note_uncovered(z, px);
    } else if (py != kNoVertex) {
      uncover(y, z);
      uncover(y, py);
      uncover(z, py);
      note_uncovered(y, py);
      note_uncovered(z, py);
    }
    cover(x, y, z);
    cover(x, z, y);
    cover(y, z, x);
  }

  if (covered != total_pairs) return std::nullopt;

  std::vector<Triple> triples;
  triples.reserve(total_pairs / 3);
  for (VertexId u = 0; u < n; ++u) {
    for (VertexId v = u + 1; v < n; ++v) {
      VertexId w = partner[slot(u, v)];
      if (w != kNoVertex && w > v) triples.push_back(Triple{u, v, w});
    }
  }
  partner.clear();
  partner.shrink_to_fit();
  return TripleSystem(n, std::move(triples));
}

}  // namespace stedi
