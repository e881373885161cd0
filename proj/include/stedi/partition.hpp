#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "stedi/hypergraph.hpp"
#include "stedi/hypertree.hpp"
#include "stedi/matching.hpp"
#include "stedi/rng.hpp"

namespace stedi {

enum class Mode { paper_strict, practical };

inline const char* mode_name(Mode m) {
  return m == Mode::paper_strict ? "paper_strict" : "practical";
}

/// Knobs for the partition sampler and the embedding pipeline. In
/// paper_strict mode eps/delta/rho are recomputed from mu; in practical
/// mode (the default) they are taken as given, subject to the ordering
/// eps < delta < rho < mu.
struct EmbedConfig {
  double mu = 0.25;
  Mode mode = Mode::practical;

  double eps = 0.02;
  double delta = 0.05;
  double rho = 0.04;
  double K = 8.0;

  // p0 = 0 picks automatically: leave gamma = sqrt(2*rho*gamma_margin) for
  // the reservoir and give C0 the rest (clamped to keep both sides alive).
  double p0 = 0.0;
  double gamma_margin = 1.3;

  double tol_mult = 1.0;            // scales every K*sqrt(x ln x) band
  double e_exceptional_frac = 0.05; // practical stand-in for eps^0.1 in (e)
  double coverage_threshold = 0.5;  // acceptable per-level star-forest leave

  std::uint32_t max_resamples = 10;
  std::uint32_t max_pipeline_retries = 5;
  std::uint64_t seed = 0;

  MatcherKind matcher = MatcherKind::nibble;
  double bite = 0.1;

  bool check_a = true, check_b = true, check_c = true, check_d = true,
       check_e = true;
  bool disable_fast_path = false;
  bool verify_intermediate = false;
};

/// Fills in the mode-dependent constants. paper_strict evaluates
/// rho = ((3mu - mu^2) / (8(1+mu)))^2, delta = (1+mu) rho / 20, and
/// eps = min(delta^2, mu^2/16, 1e-100) / 2; mu beyond 1/4 is clamped for
/// these formulas (the theorem for small mu implies the larger ones).
/// practical validates the supplied ordering instead.
inline EmbedConfig derive_constants(double mu, std::uint64_t n, std::uint32_t d,
                                    Mode mode, EmbedConfig base = {}) {
  if (!(mu > 0.0)) throw std::invalid_argument("derive_constants: mu must be > 0");
  if (n == 0 || d == 0)
    throw std::invalid_argument("derive_constants: n and d must be >= 1");
  EmbedConfig cfg = base;
  cfg.mu = mu;
  cfg.mode = mode;
  if (mode == Mode::paper_strict) {
    const double me = std::min(mu, 0.25);
    cfg.rho = std::pow((3.0 * me - me * me) / (8.0 * (1.0 + me)), 2.0);
    cfg.delta = (1.0 + me) * cfg.rho / 20.0;
    cfg.eps = std::min({cfg.delta * cfg.delta, me * me / 16.0, 1e-100}) / 2.0;
    cfg.p0 = 4.0 * std::sqrt(cfg.eps);
  } else {
    if (!(0.0 < cfg.eps && cfg.eps < cfg.delta && cfg.delta < cfg.rho &&
          cfg.rho < cfg.mu))
      throw std::invalid_argument(
          "derive_constants: need 0 < eps < delta < rho < mu");
  }
  return cfg;
}

/// The class probabilities of the random partition: p0 for C0, p_i = l_i/m
/// for the candidate levels, gamma for the reservoir.
struct PartitionPlan {
  std::uint64_t m = 0;
  std::uint64_t n = 0;  // theorem budget, floor(m / (1+mu)) unless the tree is larger
  std::uint32_t t = 0;
  std::uint32_t i0 = 0;
  std::vector<double> p;           // p[0..t]
  double gamma = 0.0;
  std::vector<std::uint64_t> ell;  // ell[0..t]
  std::uint64_t t0_size = 0;
  std::vector<std::uint32_t> star_size;  // star_size[i], i in [1..t]
  bool precondition_ok = true;     // m >= (1+mu) |V(T)|
};

inline PartitionPlan build_plan(const EmbedConfig& cfg, std::uint64_t m,
                                std::uint64_t n, const LevelDecomposition& dec,
                                std::vector<std::uint32_t> star_sizes = {}) {
  PartitionPlan plan;
  plan.m = m;
  plan.n = n;
  plan.t = dec.t;
  plan.i0 = dec.i0;
  plan.ell = dec.ell;
  plan.t0_size = dec.t0_vertex_count;
  plan.star_size = std::move(star_sizes);

  plan.p.assign(dec.t + 1, 0.0);
  double sum_upper = 0.0;
  for (std::uint32_t i = 1; i <= dec.t; ++i) {
    plan.p[i] = static_cast<double>(dec.ell[i]) / static_cast<double>(m);
    sum_upper += plan.p[i];
  }
  const double leftover = 1.0 - sum_upper;
  if (leftover <= 0.0)
    throw std::domain_error("build_plan: reservoir vanished (sum p_i >= 1)");

  double p0 = cfg.p0;
  if (cfg.mode == Mode::paper_strict) p0 = 4.0 * std::sqrt(cfg.eps);
  if (p0 <= 0.0) {
    const double gamma_target = std::sqrt(2.0 * cfg.rho * cfg.gamma_margin);
    p0 = std::clamp(leftover - gamma_target, 0.2 * leftover, 0.8 * leftover);
    p0 = std::min(p0, 4.0 * std::sqrt(cfg.eps) + 0.2 * leftover);
  }
  plan.p[0] = p0;
  plan.gamma = 1.0 - sum_upper - p0;
  if (plan.gamma <= 0.0)
    throw std::domain_error("build_plan: reservoir vanished (gamma <= 0)");
  if (p0 >= 1.0)
    throw std::domain_error("build_plan: p0 >= 1");
  return plan;
}

/// Greedy copy of T0 inside C0: phi over the first t0_count tree vertices
/// plus the S-triple realizing each T0 edge.
struct T0Embedding {
  std::vector<VertexId> phi;
  std::vector<std::uint32_t> edge_triples;
  std::vector<VertexId> l0_image;  // images of level-i0 vertices, in id order
};

/// One sampled partition C_0 .. C_t, R, as both a label array and class
/// lists. t0 is attached once embed_T0_greedy succeeds.
struct Partition {
  static constexpr std::int16_t kReservoir = -1;
  std::vector<std::int16_t> class_of;
  std::vector<std::vector<VertexId>> classes;
  std::vector<VertexId> reservoir;
  std::optional<T0Embedding> t0;
};

inline Partition sample_partition(const PartitionPlan& plan, const TripleSystem& sys,
                                  std::uint64_t seed) {
  Rng rng(seed);
  Partition part;
  part.class_of.assign(sys.vertex_count(), Partition::kReservoir);
  part.classes.assign(plan.t + 1, {});
  for (VertexId v = 0; v < sys.vertex_count(); ++v) {
    double u = rng.unit();
    double cum = 0.0;
    for (std::uint32_t i = 0; i <= plan.t; ++i) {
      cum += plan.p[i];
      if (u < cum) {
        part.class_of[v] = static_cast<std::int16_t>(i);
        part.classes[i].push_back(v);
        break;
      }
    }
    if (part.class_of[v] == Partition::kReservoir) part.reservoir.push_back(v);
  }
  return part;
}

/// BFS first-fit embedding of the top of the tree (levels 0..i0) into C0.
/// Fails (nullopt) as soon as some parent runs out of fresh triples, which
/// the sampler treats as a property-(e) failure.
inline std::optional<T0Embedding> embed_T0_greedy(const TripleSystem& sys,
                                                  const std::vector<VertexId>& c0,
                                                  const Hypertree& tree,
                                                  std::uint32_t i0) {
  if (c0.empty()) return std::nullopt;
  const VertexId t0_count = tree.level_end(i0);
  const std::size_t t0_edges = (static_cast<std::size_t>(t0_count) - 1) / 2;

  std::vector<std::uint8_t> in_c0(sys.vertex_count(), 0);
  for (VertexId v : c0) in_c0[v] = 1;
  std::vector<std::uint8_t> used(sys.vertex_count(), 0);

  T0Embedding emb;
  emb.phi.assign(t0_count, kNoVertex);
  emb.phi[0] = c0.front();
  used[c0.front()] = 1;

  // Canonical edge order is BFS, so parents are always embedded first.
  for (std::uint32_t ei = 0; ei < t0_edges; ++ei) {
    const Hypertree::Edge& e = tree.edges()[ei];
    const VertexId host = emb.phi[e.parent];
    bool placed = false;
    for (std::uint32_t ti : sys.incident(host)) {
      const Triple& tr = sys.triples()[ti];
      VertexId u = tr.a == host ? tr.b : tr.a;
      VertexId w = tr.c == host ? tr.b : tr.c;
      if (in_c0[u] && in_c0[w] && !used[u] && !used[w]) {
        emb.phi[e.child_a] = u;
        emb.phi[e.child_b] = w;
        used[u] = used[w] = 1;
        emb.edge_triples.push_back(ti);
        placed = true;
        break;
      }
    }
    if (!placed) return std::nullopt;
  }
  for (VertexId v = tree.level_begin(i0); v < tree.level_end(i0); ++v)
    emb.l0_image.push_back(emb.phi[v]);
  return emb;
}

struct PropertyCheck {
  std::string name;
  bool enabled = true;
  bool pass = true;
  std::uint64_t violations = 0;
  std::string witness;
  std::string note;
};

struct PartitionReport {
  std::vector<PropertyCheck> checks;

  bool all_pass() const {
    for (const PropertyCheck& c : checks)
      if (c.enabled && !c.pass) return false;
    return true;
  }
  const PropertyCheck* find(const std::string& name) const {
    for (const PropertyCheck& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

namespace detail {

// K * sqrt(x ln x) with ln clamped below at 1 so the band stays meaningful
// for tiny expectations.
inline double dev_band(double x, double k, double tol_mult) {
  const double lx = std::max(std::log(std::max(x, 1.0)), 1.0);
  return k * tol_mult * std::sqrt(std::max(x, 0.0) * lx);
}

struct DegreeCounter {
  const TripleSystem& sys;
  const std::vector<std::int16_t>& class_of;

  // triples {v,u,w} with both u,w in class `cls`
  std::uint32_t both_in(VertexId v, std::int16_t cls) const {
    std::uint32_t deg = 0;
    for (std::uint32_t ti : sys.incident(v)) {
      const Triple& t = sys.triples()[ti];
      VertexId u = t.a == v ? t.b : t.a;
      VertexId w = t.c == v ? t.b : t.c;
      if (class_of[u] == cls && class_of[w] == cls) ++deg;
    }
    return deg;
  }

  // triples {v,u,w} with one endpoint in `one` and the other in `two`
  std::uint32_t split_between(VertexId v, std::int16_t one, std::int16_t two) const {
    std::uint32_t deg = 0;
    for (std::uint32_t ti : sys.incident(v)) {
      const Triple& t = sys.triples()[ti];
      VertexId u = t.a == v ? t.b : t.a;
      VertexId w = t.c == v ? t.b : t.c;
      if ((class_of[u] == one && class_of[w] == two) ||
          (class_of[u] == two && class_of[w] == one))
        ++deg;
    }
    return deg;
  }
};

}  // namespace detail

/// Checks Lemma-style properties (a)-(e) of a sampled partition at the
/// config's tolerances. Report-style: every enabled property gets a verdict
/// with a violation count and one concrete witness.
///
/// Interpretation note: the center-side degree bound for i = 1 concerns the
/// embedded L0, so it is checked as part of (e); (b) covers i in [2, t].
inline PartitionReport verify_properties(const TripleSystem& sys,
                                         const Partition& part,
                                         const PartitionPlan& plan,
                                         const EmbedConfig& cfg) {
  PartitionReport rep;
  const detail::DegreeCounter deg{sys, part.class_of};
  const double K = cfg.K, tm = cfg.tol_mult;
  const double md = static_cast<double>(plan.m);

  // (a) class sizes
  {
    PropertyCheck c{.name = "a", .enabled = cfg.check_a};
    if (c.enabled) {
      for (std::uint32_t i = 1; i <= plan.t; ++i) {
        const double target = static_cast<double>(plan.ell[i]);
        const double band = detail::dev_band(target, K, tm);
        const double size = static_cast<double>(part.classes[i].size());
        if (std::abs(size - target) > band) {
          ++c.violations;
          if (c.witness.empty()) {
            std::ostringstream os;
            os << "|C_" << i << "| = " << size << " outside " << target
               << " +- " << band;
            c.witness = os.str();
          }
        }
      }
      c.pass = c.violations == 0;
    }
    rep.checks.push_back(std::move(c));
  }

  // (b) center-side degrees in S[C_{i-1}, C_i], i in [2, t]
  {
    PropertyCheck c{.name = "b", .enabled = cfg.check_b};
    c.note = "i = 1 centers are the embedded L0, checked under (e)";
    if (c.enabled) {
      for (std::uint32_t i = 2; i <= plan.t; ++i) {
        const double D = plan.p[i] * static_cast<double>(plan.ell[i - 1]);
        const double d_eff = static_cast<double>(plan.ell[i]) /
                             (2.0 * static_cast<double>(plan.ell[i - 1]));
        const double center = d_eff * D;
        const double band = d_eff * detail::dev_band(D, K, tm);
        for (VertexId v : part.classes[i - 1]) {
          const double dv = deg.both_in(v, static_cast<std::int16_t>(i));
          if (std::abs(dv - center) > band) {
            ++c.violations;
            if (c.witness.empty()) {
              std::ostringstream os;
              os << "v=" << v << " in C_" << i - 1 << ": center degree " << dv
                 << " outside " << center << " +- " << band;
              c.witness = os.str();
            }
          }
        }
      }
      c.pass = c.violations == 0;
    }
    rep.checks.push_back(std::move(c));
  }

  // (c) leaf-side degrees in S[C_{i-1}, C_i], i in [2, t]
  {
    PropertyCheck c{.name = "c", .enabled = cfg.check_c};
    if (c.enabled) {
      for (std::uint32_t i = 2; i <= plan.t; ++i) {
        const double D = plan.p[i] * static_cast<double>(plan.ell[i - 1]);
        const double band = detail::dev_band(D, K, tm);
        for (VertexId v : part.classes[i]) {
          const double dv = deg.split_between(v, static_cast<std::int16_t>(i - 1),
                                              static_cast<std::int16_t>(i));
          if (std::abs(dv - D) > band) {
            ++c.violations;
            if (c.witness.empty()) {
              std::ostringstream os;
              os << "v=" << v << " in C_" << i << ": leaf degree " << dv
                 << " outside " << D << " +- " << band;
              c.witness = os.str();
            }
          }
        }
      }
      c.pass = c.violations == 0;
    }
    rep.checks.push_back(std::move(c));
  }

  // (d) reservoir degrees: every vertex keeps >= rho*m triples inside R
  {
    PropertyCheck c{.name = "d", .enabled = cfg.check_d};
    if (c.enabled) {
      const double threshold = cfg.rho * md;
      for (VertexId v = 0; v < sys.vertex_count(); ++v) {
        const double dv = deg.both_in(v, Partition::kReservoir);
        if (dv < threshold) {
          ++c.violations;
          if (c.witness.empty()) {
            std::ostringstream os;
            os << "v=" << v << ": reservoir degree " << dv << " < " << threshold;
            c.witness = os.str();
          }
        }
      }
      c.pass = c.violations == 0;
    }
    rep.checks.push_back(std::move(c));
  }

  // (e) C0 size, T0 copy, and the L0 <-> C1 degree profile
  {
    PropertyCheck c{.name = "e", .enabled = cfg.check_e};
    if (c.enabled) {
      const double p0m = plan.p[0] * md;
      const double band0 = detail::dev_band(p0m, K, tm);
      const double size0 = static_cast<double>(part.classes[0].size());
      if (std::abs(size0 - p0m) > band0) {
        ++c.violations;
        std::ostringstream os;
        os << "|C_0| = " << size0 << " outside " << p0m << " +- " << band0;
        if (c.witness.empty()) c.witness = os.str();
      }
      if (!part.t0) {
        ++c.violations;
        if (c.witness.empty()) c.witness = "T0 embedding failed in S[C_0]";
      } else if (plan.t >= 1) {
        const double D1 = plan.p[1] * static_cast<double>(plan.ell[0]);
        const double d_eff = static_cast<double>(plan.ell[1]) /
                             (2.0 * static_cast<double>(plan.ell[0]));

        // center side (the i = 1 case of (b))
        const double center = d_eff * D1;
        const double cband = d_eff * detail::dev_band(D1, K, tm);
        for (VertexId v : part.t0->l0_image) {
          const double dv = deg.both_in(v, 1);
          if (std::abs(dv - center) > cband) {
            ++c.violations;
            if (c.witness.empty()) {
              std::ostringstream os;
              os << "L0 vertex " << v << ": degree into C_1 " << dv
                 << " outside " << center << " +- " << cband;
              c.witness = os.str();
            }
          }
        }

        // leaf side: near-regular degrees for all but a small slice of C_1,
        // and a hard cap for everyone
        std::vector<std::uint8_t> in_l0(sys.vertex_count(), 0);
        for (VertexId v : part.t0->l0_image) in_l0[v] = 1;
        double lo, hi, cap;
        double exceptional_allowed;
        if (cfg.mode == Mode::paper_strict) {
          const double slack = std::pow(cfg.eps, 0.1);
          lo = (1.0 - slack) * D1;
          hi = (1.0 + slack) * D1;
          cap = 2.0 * D1;
          exceptional_allowed = slack * static_cast<double>(part.classes[1].size());
        } else {
          const double band = detail::dev_band(D1, K, tm);
          lo = D1 - band;
          hi = D1 + band;
          cap = std::max(2.0 * D1, D1 + band);
          exceptional_allowed =
              cfg.e_exceptional_frac * static_cast<double>(part.classes[1].size());
        }
        std::uint64_t exceptional = 0;
        std::uint64_t cap_violations = 0;
        VertexId cap_witness = kNoVertex;
        for (VertexId v : part.classes[1]) {
          std::uint32_t dv = 0;
          for (std::uint32_t ti : sys.incident(v)) {
            const Triple& t = sys.triples()[ti];
            VertexId u = t.a == v ? t.b : t.a;
            VertexId w = t.c == v ? t.b : t.c;
            if ((in_l0[u] && part.class_of[w] == 1) ||
                (in_l0[w] && part.class_of[u] == 1))
              ++dv;
          }
          if (dv < lo || dv > hi) ++exceptional;
          if (dv > cap) {
            ++cap_violations;
            if (cap_witness == kNoVertex) cap_witness = v;
          }
        }
        if (static_cast<double>(exceptional) > exceptional_allowed) {
          ++c.violations;
          if (c.witness.empty()) {
            std::ostringstream os;
            os << exceptional << " vertices of C_1 outside [" << lo << ", " << hi
               << "], allowed " << exceptional_allowed;
            c.witness = os.str();
          }
        }
        if (cap_violations > 0) {
          c.violations += cap_violations;
          if (c.witness.empty()) {
            std::ostringstream os;
            os << "v=" << cap_witness << " in C_1 exceeds degree cap " << cap;
            c.witness = os.str();
          }
        }

        // deterministic counting bound (holds for every STS; a failure here
        // means the degree bookkeeping itself is broken)
        std::vector<std::uint8_t> in_c0(sys.vertex_count(), 0);
        for (VertexId v : part.classes[0]) in_c0[v] = 1;
        const double alpha = std::pow(cfg.eps, 0.2);
        const std::uint64_t bad = low_cross_degree_count(sys, in_c0, in_l0, alpha);
        const double bound =
            static_cast<double>(part.classes[0].size()) / alpha;
        if (static_cast<double>(bad) > bound) {
          ++c.violations;
          if (c.witness.empty()) {
            std::ostringstream os;
            os << "counting bound violated: " << bad << " low-degree vertices > "
               << bound;
            c.witness = os.str();
          }
        }
      }
      c.pass = c.violations == 0;
    }
    rep.checks.push_back(std::move(c));
  }

  return rep;
}

struct SampleOutcome {
  bool ok = false;
  Partition partition;
  PartitionReport report;
  std::uint32_t resamples_used = 0;
  std::map<std::string, std::uint32_t> failure_histogram;
};

/// Rejection-resamples partitions until one passes every enabled property.
/// The T0 copy is attempted on every sample; with (e) enabled its failure
/// rejects the sample. On budget exhaustion the histogram says which
/// properties kept failing.
inline SampleOutcome sample_until_valid(const TripleSystem& sys,
                                        const Hypertree& tree,
                                        const PartitionPlan& plan,
                                        const EmbedConfig& cfg,
                                        std::uint64_t seed) {
  if (cfg.max_resamples == 0)
    throw std::invalid_argument("sample_until_valid: max_resamples must be >= 1");
  SampleOutcome out;
  for (std::uint32_t r = 0; r < cfg.max_resamples; ++r) {
    out.resamples_used = r + 1;
    Partition part = sample_partition(plan, sys, derive_seed(seed, 7000 + r));
    part.t0 = embed_T0_greedy(sys, part.classes[0], tree, plan.i0);
    PartitionReport rep = verify_properties(sys, part, plan, cfg);
    if (rep.all_pass()) {
      out.ok = true;
      out.partition = std::move(part);
      out.report = std::move(rep);
      return out;
    }
    for (const PropertyCheck& c : rep.checks)
      if (c.enabled && !c.pass) ++out.failure_histogram[c.name];
    out.report = std::move(rep);
    out.partition = std::move(part);
  }
  out.ok = false;
  return out;
}

}  // namespace stedi
