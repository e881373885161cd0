#include "stedi/embedder.hpp"

#include <gtest/gtest.h>

#include "stedi/constructors.hpp"
#include "stedi/oracle.hpp"
#include "test_support.hpp"

using namespace stedi;
using stedi::testing::fano;

namespace {

// Host system shaped exactly like perfect(1,3) under the identity map, plus
// optional spare triples; lets the pipeline stages be driven by hand.
TripleSystem tree_shaped_host(bool with_spares) {
  std::vector<Triple> triples;
  Hypertree t = perfect_d_ary(1, 3);
  for (const Hypertree::Edge& e : t.edges())
    triples.push_back(make_triple(e.parent, e.child_a, e.child_b));
  VertexId m = 15;
  if (with_spares) {
    m = 21;
    triples.push_back(make_triple(2, 15, 16));
    triples.push_back(make_triple(15, 17, 18));
    triples.push_back(make_triple(16, 19, 20));
  }
  return TripleSystem(m, std::move(triples));
}

PartitionPlan identity_plan(std::uint64_t m) {
  PartitionPlan plan;
  plan.m = m;
  plan.n = 15;
  plan.t = 3;
  plan.i0 = 0;
  plan.ell = {1, 2, 4, 8};
  plan.t0_size = 1;
  plan.p = {0.1, 0.1, 0.2, 0.4};
  plan.gamma = 0.2;
  plan.star_size = {0, 1, 1, 1};
  return plan;
}

Partition identity_partition(const TripleSystem& sys) {
  Partition part;
  part.class_of.assign(sys.vertex_count(), Partition::kReservoir);
  part.classes.assign(4, {});
  auto assign = [&](std::initializer_list<VertexId> vs, std::int16_t cls) {
    for (VertexId v : vs) {
      part.class_of[v] = cls;
      part.classes[cls].push_back(v);
    }
  };
  assign({0}, 0);
  assign({1, 2}, 1);
  assign({3, 4, 5, 6}, 2);
  assign({7, 8, 9, 10, 11, 12, 13, 14}, 3);
  for (VertexId v = 0; v < sys.vertex_count(); ++v)
    if (part.class_of[v] == Partition::kReservoir) part.reservoir.push_back(v);
  part.t0 = T0Embedding{{0}, {}, {0}};
  return part;
}

Star star_of(const TripleSystem& sys, VertexId center, VertexId a, VertexId b) {
  return Star{center, {make_triple(center, a, b)}};
}

void touch_covered(StarForest& f) {
  std::vector<VertexId> covered;
  for (const Star& s : f.stars) {
    covered.push_back(s.center);
    for (const Triple& t : s.edges)
      for (VertexId v : {t.a, t.b, t.c})
        if (v != s.center) covered.push_back(v);
  }
  f.covered = std::move(covered);
}

}  // namespace

TEST(VerifyEmbedding, AcceptsIdentityAndRejectsCorruption) {
  TripleSystem sys = tree_shaped_host(false);
  Hypertree tree = perfect_d_ary(1, 3);
  Embedding emb;
  for (VertexId v = 0; v < 15; ++v) emb.phi.push_back(v);
  for (std::uint32_t ei = 0; ei < tree.edge_count(); ++ei) {
    const Hypertree::Edge& e = tree.edges()[ei];
    Triple want = make_triple(e.parent, e.child_a, e.child_b);
    for (std::uint32_t ti = 0; ti < sys.triple_count(); ++ti)
      if (sys.triples()[ti] == want) emb.edge_triples.push_back(ti);
  }
  EXPECT_TRUE(verify_embedding(sys, tree, emb).valid());

  Embedding corrupt = emb;
  corrupt.phi[14] = 3;  // duplicate image
  EXPECT_FALSE(verify_embedding(sys, tree, corrupt).valid());

  Embedding wrong_edge = emb;
  // swap leaves of two different edges: injective, but both edge images break
  std::swap(wrong_edge.phi[12], wrong_edge.phi[14]);
  EXPECT_FALSE(verify_embedding(sys, tree, wrong_edge).valid());
}

TEST(FastPath, HyperstarIntoFano) {
  TripleSystem sys = fano();
  Hypertree star = d_sequence_tree({3});  // hyperstar of size 3 = (7-1)/2
  PipelineTrace trace;
  auto emb = fast_path(sys, star, &trace);
  ASSERT_TRUE(emb.has_value());
  EXPECT_TRUE(trace.fast_path_star);
  EXPECT_TRUE(verify_embedding(sys, star, *emb).valid());

  Hypertree too_big = d_sequence_tree({4});  // degree bound (m-1)/2 = 3
  EXPECT_FALSE(fast_path(sys, too_big).has_value());
}

TEST(FastPath, GreedyWhenHostIsTwiceTheTree) {
  TripleSystem sys = bose(15);
  Hypertree tree = perfect_d_ary(1, 2);  // 7 vertices, 15 > 14
  PipelineTrace trace;
  auto emb = fast_path(sys, tree, &trace);
  ASSERT_TRUE(emb.has_value());
  EXPECT_TRUE(trace.fast_path_greedy);
  EXPECT_TRUE(verify_embedding(sys, tree, *emb).valid());
}

TEST(FastPath, NotApplicableInTheMainRegime) {
  TripleSystem sys = bose(21);
  Hypertree tree = perfect_d_ary(1, 3);  // 15 vertices; 21 <= 30, not a star
  EXPECT_FALSE(fast_path(sys, tree).has_value());
}

TEST(PruneToT1, FullCoverKeepsEverything) {
  TripleSystem sys = tree_shaped_host(false);
  Hypertree tree = perfect_d_ary(1, 3);
  Partition part = identity_partition(sys);
  PartitionPlan plan = identity_plan(15);

  ForestState forest;
  StarForest f1;
  f1.stars = {star_of(sys, 0, 1, 2)};
  StarForest f2;
  f2.stars = {star_of(sys, 1, 3, 4), star_of(sys, 2, 5, 6)};
  StarForest f3;
  f3.stars = {star_of(sys, 3, 7, 8), star_of(sys, 4, 9, 10),
              star_of(sys, 5, 11, 12), star_of(sys, 6, 13, 14)};
  for (StarForest* f : {&f1, &f2, &f3}) touch_covered(*f);
  forest.forests = {f1, f2, f3};
  forest.uncovered = {{}, {}, {}};

  PruneResult t1 = prune_to_t1(sys, tree, part, plan, forest);
  EXPECT_EQ(t1.v_t1, 15u);
  EXPECT_EQ(t1.e_t1, 7u);
  EXPECT_TRUE(t1.missing.empty());
  EXPECT_EQ(t1.v_f, 15u);
  EXPECT_EQ(t1.v_f, t1.v_t1);  // no orphan subtrees discarded
}

TEST(PruneToT1, OrphanAtLevelOneDiscardsItsSubtree) {
  TripleSystem sys = tree_shaped_host(true);
  Hypertree tree = perfect_d_ary(1, 3);
  Partition part = identity_partition(sys);
  PartitionPlan plan = identity_plan(21);

  // level-2 star at vertex 2 is missing: vertices 5 and 6 become orphans
  ForestState forest;
  StarForest f1;
  f1.stars = {star_of(sys, 0, 1, 2)};
  StarForest f2;
  f2.stars = {star_of(sys, 1, 3, 4)};
  StarForest f3;
  f3.stars = {star_of(sys, 3, 7, 8), star_of(sys, 4, 9, 10),
              star_of(sys, 5, 11, 12), star_of(sys, 6, 13, 14)};
  for (StarForest* f : {&f1, &f2, &f3}) touch_covered(*f);
  forest.forests = {f1, f2, f3};
  forest.uncovered = {{}, {5, 6}, {}};

  PruneResult t1 = prune_to_t1(sys, tree, part, plan, forest);
  // pruned: 5, 6 and the four grandchildren below them
  EXPECT_EQ(t1.v_t1, 9u);
  EXPECT_EQ(t1.e_t1, 4u);
  ASSERT_EQ(t1.missing.size(), 3u);
  // conservation: |V(T1)| + discarded orphan subtrees = |V(F)|
  EXPECT_EQ(t1.v_f, 15u);
  EXPECT_EQ(t1.v_f - t1.v_t1, 6u);

  // reservoir completion needs 6 fresh vertices; the spare block has them
  EXPECT_EQ(part.reservoir.size(), 6u);
  ReservoirResult rr = reservoir_complete(sys, tree, part.reservoir, t1, true);
  ASSERT_TRUE(rr.ok) << rr.error;
  EXPECT_EQ(rr.steps, 3u);
  Embedding emb{t1.phi, t1.edge_triples};
  EXPECT_TRUE(verify_embedding(sys, tree, emb).valid());
}

TEST(PruneToT1, LeafOrphanCostsOnlyItself) {
  TripleSystem sys = tree_shaped_host(false);
  Hypertree tree = perfect_d_ary(1, 3);
  Partition part = identity_partition(sys);
  PartitionPlan plan = identity_plan(15);

  // everything covered except the last level-3 star ({6,13,14} missing)
  ForestState forest;
  StarForest f1;
  f1.stars = {star_of(sys, 0, 1, 2)};
  StarForest f2;
  f2.stars = {star_of(sys, 1, 3, 4), star_of(sys, 2, 5, 6)};
  StarForest f3;
  f3.stars = {star_of(sys, 3, 7, 8), star_of(sys, 4, 9, 10),
              star_of(sys, 5, 11, 12)};
  for (StarForest* f : {&f1, &f2, &f3}) touch_covered(*f);
  forest.forests = {f1, f2, f3};
  forest.uncovered = {{}, {}, {13, 14}};

  PruneResult t1 = prune_to_t1(sys, tree, part, plan, forest);
  EXPECT_EQ(t1.v_t1, 13u);
  EXPECT_EQ(t1.missing.size(), 1u);
  // leaf orphans have no subtree below, so F loses exactly the deficit
  EXPECT_EQ(t1.v_f - t1.v_t1, 2u);
}

TEST(ReservoirComplete, IdentityWhenNothingMissing) {
  TripleSystem sys = tree_shaped_host(false);
  Hypertree tree = perfect_d_ary(1, 3);
  PruneResult t1;
  t1.phi.assign(15, kNoVertex);
  for (VertexId v = 0; v < 15; ++v) t1.phi[v] = v;
  t1.edge_triples.assign(7, kNoEdgeTriple);
  for (std::uint32_t ei = 0; ei < tree.edge_count(); ++ei) {
    const Hypertree::Edge& e = tree.edges()[ei];
    Triple want = make_triple(e.parent, e.child_a, e.child_b);
    for (std::uint32_t ti = 0; ti < sys.triple_count(); ++ti)
      if (sys.triples()[ti] == want) t1.edge_triples[ei] = ti;
  }
  ReservoirResult rr = reservoir_complete(sys, tree, {}, t1);
  EXPECT_TRUE(rr.ok);
  EXPECT_EQ(rr.steps, 0u);
}

TEST(ReservoirComplete, EmptyReservoirWithMissingEdgesFailsFeasibility) {
  TripleSystem sys = tree_shaped_host(false);
  Hypertree tree = perfect_d_ary(1, 3);
  PruneResult t1;
  t1.phi.assign(15, kNoVertex);
  t1.phi[0] = 0;
  t1.edge_triples.assign(7, kNoEdgeTriple);
  t1.missing = {0};
  ReservoirResult rr = reservoir_complete(sys, tree, {}, t1);
  EXPECT_FALSE(rr.ok);
  EXPECT_FALSE(rr.error.empty());
}

TEST(ReservoirComplete, ExhaustionIsReportedWithStep) {
  // reservoir large enough by count, but no usable pair at the host
  TripleSystem sys = tree_shaped_host(true);
  Hypertree tree = perfect_d_ary(1, 3);
  PruneResult t1;
  t1.phi.assign(15, kNoVertex);
  t1.phi[0] = 0;
  t1.edge_triples.assign(7, kNoEdgeTriple);
  t1.missing = {0};  // root edge; host 0 has one triple {0,1,2}
  std::vector<VertexId> reservoir{17, 18};  // not adjacent to 0 anywhere
  ReservoirResult rr = reservoir_complete(sys, tree, reservoir, t1);
  EXPECT_FALSE(rr.ok);
  EXPECT_NE(rr.error.find("step 1"), std::string::npos);
}

TEST(Embed, PigeonholeFailsImmediately) {
  TripleSystem sys = fano();
  Hypertree tree = perfect_d_ary(1, 3);  // 15 > 7
  EmbedConfig cfg;
  EmbedResult res = embed(sys, tree, cfg);
  EXPECT_FALSE(res.ok());
  EXPECT_EQ(res.trace.outcome, "failed:pigeonhole");
}

TEST(Embed, FastPathCaseIsCertified) {
  TripleSystem sys = bose(15);
  Hypertree tree = perfect_d_ary(1, 2);
  EmbedConfig cfg;
  EmbedResult res = embed(sys, tree, cfg);
  ASSERT_TRUE(res.ok());
  EXPECT_EQ(res.trace.outcome, "embedded");
  EXPECT_TRUE(res.trace.fast_path_greedy);
  EXPECT_TRUE(verify_embedding(sys, tree, *res.embedding).valid());
  OracleResult oracle = oracle_embed(sys, tree);
  EXPECT_TRUE(oracle.embeddable);  // no false successes
}

TEST(Embed, SmallPipelineSuccessesAreAlwaysCertified) {
  // m <= 2n forces the full pipeline; at this scale it may fail, but any
  // success must verify, and the embedded tree must match the oracle's
  // verdict that an embedding exists.
  TripleSystem sys = skolem(19);
  Hypertree tree = perfect_d_ary(1, 3);  // 15 vertices, 19 <= 30
  EmbedConfig cfg;
  cfg.eps = 0.1;
  cfg.delta = 0.12;
  cfg.rho = 0.15;
  cfg.check_d = false;  // no reservoir guarantees at m = 19
  cfg.max_pipeline_retries = 4;
  int successes = 0;
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    cfg.seed = seed;
    EmbedResult res = embed(sys, tree, cfg);
    if (res.ok()) {
      ++successes;
      EXPECT_TRUE(verify_embedding(sys, tree, *res.embedding).valid());
    }
  }
  SUCCEED() << successes << "/6 pipeline successes at desk scale";
}

TEST(Embed, ModerateScalePipelineEmbeds) {
  // large enough that the practical-mode machinery can really work:
  // m = 333, tree = largest 1-ary (255 vertices), m < 2n
  TripleSystem sys = bose(333);
  Hypertree tree = largest_perfect_at_most(1, 266);
  ASSERT_EQ(tree.vertex_count(), 255u);
  EmbedConfig cfg;
  cfg.eps = 0.1;
  cfg.delta = 0.12;
  cfg.rho = 0.15;
  cfg.check_d = false;
  cfg.max_pipeline_retries = 8;
  cfg.max_resamples = 10;
  cfg.seed = 11;
  EmbedResult res = embed(sys, tree, cfg);
  if (res.ok()) {
    EXPECT_TRUE(verify_embedding(sys, tree, *res.embedding).valid());
    EXPECT_FALSE(res.trace.fast_path_greedy);
    EXPECT_FALSE(res.trace.fast_path_star);
  }
  // stage sizes recorded either way
  EXPECT_GT(res.trace.retries_used, 0u);
}
