#include "stedi/constructors.hpp"

#include <gtest/gtest.h>

#include <sstream>

#include "stedi/sts_io.hpp"

using namespace stedi;

TEST(Bose, SmallOrders) {
  TripleSystem s9 = bose(9);
  EXPECT_EQ(s9.triple_count(), 12u);
  EXPECT_TRUE(validate_sts(s9).valid());

  TripleSystem s15 = bose(15);
  EXPECT_EQ(s15.triple_count(), 35u);
  for (VertexId v = 0; v < 15; ++v) EXPECT_EQ(s15.degree(v), 7u);
  EXPECT_TRUE(validate_sts(s15).valid());
}

TEST(Bose, RejectsWrongResidue) {
  EXPECT_THROW(bose(8), std::invalid_argument);
  EXPECT_THROW(bose(10), std::invalid_argument);
}

TEST(Skolem, SmallOrders) {
  TripleSystem s7 = skolem(7);
  EXPECT_EQ(s7.triple_count(), 7u);
  EXPECT_TRUE(validate_sts(s7).valid());

  TripleSystem s13 = skolem(13);
  EXPECT_EQ(s13.triple_count(), 26u);
  EXPECT_TRUE(validate_sts(s13).valid());
}

TEST(Skolem, RejectsWrongResidue) {
  EXPECT_THROW(skolem(9), std::invalid_argument);
  EXPECT_THROW(skolem(1), std::invalid_argument);
}

TEST(Constructors, Deterministic) {
  EXPECT_EQ(bose(21).triples(), bose(21).triples());
  EXPECT_EQ(skolem(19).triples(), skolem(19).triples());
}

TEST(RandomSts, SevenPointsIsAlwaysAnSts) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto sys = random_sts(7, seed);
    ASSERT_TRUE(sys.has_value());
    EXPECT_TRUE(validate_sts(*sys).valid());
  }
}

TEST(RandomSts, TenSeedsOnNinePoints) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto sys = random_sts(9, seed);
    ASSERT_TRUE(sys.has_value());
    EXPECT_TRUE(validate_sts(*sys).valid());
  }
}

TEST(RandomSts, RejectsInadmissibleOrder) {
  EXPECT_THROW(random_sts(11, 0), std::invalid_argument);
}

TEST(RandomSts, ReproducibleBitForBit) {
  auto a = random_sts(15, 42);
  auto b = random_sts(15, 42);
  ASSERT_TRUE(a && b);
  EXPECT_EQ(a->triples(), b->triples());
}

TEST(RandomSts, TinyBudgetFails) {
  auto sys = random_sts(21, 0, 3);
  EXPECT_FALSE(sys.has_value());
}

TEST(StsIo, RoundTripIsIdentity) {
  TripleSystem sys = bose(9);
  std::string text = sts_to_string(sys);
  std::istringstream in(text);
  TripleSystem back = load_sts(in);
  EXPECT_EQ(back.vertex_count(), sys.vertex_count());
  EXPECT_EQ(back.triples(), sys.triples());
  EXPECT_EQ(sts_to_string(back), text);  // canonical form is stable
}

TEST(StsIo, CommentsAndBlanksAreSkipped) {
  std::istringstream in("# a Fano-sized header\n\n7 1\n# line\n0 1 2\n");
  TripleSystem sys = load_sts(in);
  EXPECT_EQ(sys.triple_count(), 1u);
}

TEST(StsIo, DuplicatePairLoadsButFailsValidation) {
  std::istringstream in("4 2\n0 1 2\n0 1 3\n");
  TripleSystem sys = load_sts(in);
  EXPECT_FALSE(validate_simple(sys).valid());
}

TEST(StsIo, TruncatedFileReportsLine) {
  std::istringstream in("7 3\n0 1 2\n");
  try {
    load_sts(in);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line, 2u);
  }
}

TEST(StsIo, MalformedTripleReportsLine) {
  std::istringstream in("7 1\n0 2 1\n");  // not ascending
  try {
    load_sts(in);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line, 2u);
  }
}
