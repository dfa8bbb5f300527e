#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "reference.hpp"
#include "simt/error.hpp"
#include "simt/program.hpp"

namespace simt {
namespace {

Program P(const char* s) { return Program::parse(s); }

TEST(Program, ParseAndPrint) {
  EXPECT_EQ(P("RWRRWW").str(), "RWRRWW");
  EXPECT_EQ(P("RRW").readCount(), 2u);
  EXPECT_EQ(P("RRW").writeCount(), 1u);
  EXPECT_THROW(P("RWX"), ParseError);
  EXPECT_TRUE(P("").empty());
}

TEST(IsValid, AlternatingIsValid) {
  const auto v = isValid(P("RWRW"), 2, 2);
  EXPECT_TRUE(v.countValid);
  EXPECT_TRUE(v.boundaryValid);
}

TEST(IsValid, LeadingWriteIsNotBoundaryValid) {
  const auto v = isValid(P("WRRW"), 2, 2);
  EXPECT_TRUE(v.countValid);
  EXPECT_FALSE(v.boundaryValid);
  EXPECT_EQ(v.firstAction, Action::Write);
}

TEST(IsValid, WrongWriteCount) {
  const auto v = isValid(P("RRW"), 2, 2);
  EXPECT_FALSE(v.countValid);
  EXPECT_EQ(v.writeCount, 1u);
}

TEST(IsValid, TrailingReadIsNotBoundaryValid) {
  const auto v = isValid(P("RWWR"), 2, 2);
  EXPECT_TRUE(v.countValid);
  EXPECT_FALSE(v.boundaryValid);
}

TEST(IsValid, EmptyProgram) {
  const auto v = isValid(Program{}, 1, 1);
  EXPECT_FALSE(v.countValid);
  EXPECT_FALSE(v.boundaryValid);
  EXPECT_EQ(v.readCount, 0u);
  EXPECT_EQ(v.writeCount, 0u);
}

TEST(GVector, Examples) {
  EXPECT_EQ(gVector(P("RWRWRW")), (std::vector<std::size_t>{1, 2, 3}));
  EXPECT_EQ(gVector(P("RRRWWW")), (std::vector<std::size_t>{3, 3, 3}));
  EXPECT_EQ(gVector(P("RRWWRW")), (std::vector<std::size_t>{2, 2, 3}));
}

TEST(GVector, MatchesReferenceAndEndsAtReadCount) {
  std::mt19937_64 eng(3);
  for (int trial = 0; trial < 1000; ++trial) {
    const int x = ref::uniformInt(eng, 1, 30), y = ref::uniformInt(eng, 1, 30);
    const auto s = ref::randomValidProgram(eng, x, y);
    const auto g = gVector(Program::parse(s));
    const auto expected = ref::lags(s);
    ASSERT_EQ(g.size(), expected.size());
    for (std::size_t k = 0; k < g.size(); ++k) ASSERT_EQ(static_cast<std::int64_t>(g[k]), expected[k]);
    ASSERT_TRUE(std::is_sorted(g.begin(), g.end()));
    ASSERT_EQ(g.back(), static_cast<std::size_t>(x));
  }
}

TEST(WaitK, Examples) {
  EXPECT_EQ(waitK(1, 3, 3).str(), "RWRWRW");
  EXPECT_EQ(waitK(2, 3, 4).str(), "RRWRWWW");
  EXPECT_EQ(waitK(3, 3, 2).str(), "RRRWW");
  EXPECT_EQ(waitK(100, 3, 2).str(), "RRRWW");
}

TEST(WaitK, ZeroRejected) { EXPECT_THROW(waitK(0, 3, 3), InvalidArgument); }

TEST(WaitK, ShortTargetStillEndsWithWrite) {
  EXPECT_EQ(waitK(1, 4, 2).str(), "RWRRRW");
  EXPECT_EQ(waitK(2, 5, 1).str(), "RRRRRW");
}

TEST(WaitK, BoundaryValidForRandomTriples) {
  std::mt19937_64 eng(17);
  for (int trial = 0; trial < 5000; ++trial) {
    const int k = ref::uniformInt(eng, 1, 40), x = ref::uniformInt(eng, 1, 40), y = ref::uniformInt(eng, 1, 40);
    const auto p = waitK(static_cast<std::size_t>(k), static_cast<std::size_t>(x), static_cast<std::size_t>(y));
    ASSERT_TRUE(isBoundaryValid(p, static_cast<std::size_t>(x), static_cast<std::size_t>(y)))
        << k << ' ' << x << ' ' << y << ' ' << p.str();
  }
}

TEST(WaitK, LagsFollowClosedFormWhileSourceRemains) {
  for (std::size_t k = 1; k <= 6; ++k) {
    for (std::size_t n = 1; n <= 12; ++n) {
      const auto g = gVector(waitK(k, n, n));
      for (std::size_t j = 1; j <= n; ++j) EXPECT_EQ(g[j - 1], std::min(n, k + j - 1));
    }
  }
}

TEST(AddDelay, Examples) {
  EXPECT_EQ(addDelay(P("RWRW"), 1).str(), "RRWW");
  EXPECT_EQ(addDelay(P("RRRWWW"), 3).str(), "RRRWWW");
  EXPECT_EQ(addDelay(P("RWRWRW"), 1).str(), "RRWRWW");
  EXPECT_EQ(addDelay(P("RWRWRW"), 0).str(), "RWRWRW");
}

TEST(AddDelay, RejectsInvalidInput) {
  EXPECT_THROW(addDelay(P("WRRW"), 1), InvalidArgument);
  EXPECT_THROW(addDelay(P("RWWR"), 1), InvalidArgument);
}

TEST(AddDelay, Properties) {
  std::mt19937_64 eng(23);
  for (int trial = 0; trial < 1000; ++trial) {
    const int x = ref::uniformInt(eng, 1, 20), y = ref::uniformInt(eng, 1, 20);
    const auto p = Program::parse(ref::randomValidProgram(eng, x, y));
    const auto d1 = static_cast<std::size_t>(ref::uniformInt(eng, 0, 6));
    const auto d2 = static_cast<std::size_t>(ref::uniformInt(eng, 0, 6));
    const auto q = addDelay(p, d1);
    ASSERT_TRUE(isBoundaryValid(q, static_cast<std::size_t>(x), static_cast<std::size_t>(y)));
    ASSERT_EQ(addDelay(p, d1 + d2), addDelay(q, d2));
    const auto gp = gVector(p), gq = gVector(q);
    for (std::size_t j = 0; j < gp.size(); ++j) ASSERT_GE(gq[j], gp[j]);
  }
}

TEST(PerturbProgValid, ZeroBetaIsIdentity) {
  Rng rng(1);
  EXPECT_EQ(perturbProgValid(P("RWRRWWRW"), 0.0, rng).str(), "RWRRWWRW");
}

TEST(PerturbProgValid, InteriorPairSwapsHalfTheTime) {
  Rng rng(2);
  const int trials = 20000;
  int swapped = 0;
  for (int k = 0; k < trials; ++k) {
    const auto out = perturbProgValid(P("RWRW"), 1.0, rng).str();
    ASSERT_TRUE(out == "RRWW" || out == "RWRW") << out;
    swapped += out == "RRWW";
  }
  const double rate = static_cast<double>(swapped) / trials;
  const double sigma = std::sqrt(0.25 / trials);
  EXPECT_NEAR(rate, 0.5, 3 * sigma);
}

TEST(PerturbProgValid, PreservesMultisetAndBoundaries) {
  std::mt19937_64 eng(29);
  Rng rng(29);
  for (int trial = 0; trial < 10000; ++trial) {
    const int x = ref::uniformInt(eng, 1, 25), y = ref::uniformInt(eng, 1, 25);
    const auto p = Program::parse(ref::randomValidProgram(eng, x, y));
    const double beta = std::uniform_real_distribution<double>(0.0, 1.0)(eng);
    const auto q = perturbProgValid(p, beta, rng);
    ASSERT_EQ(q.size(), p.size());
    ASSERT_EQ(q.readCount(), p.readCount());
    ASSERT_EQ(q[0], p[0]);
    ASSERT_EQ(q[q.size() - 1], p[p.size() - 1]);
    ASSERT_TRUE(isBoundaryValid(q, static_cast<std::size_t>(x), static_cast<std::size_t>(y)));
  }
}

TEST(PerturbSeq, ZeroBetaIsIdentity) {
  Rng rng(3);
  const std::vector<int> seq{0, 1, 1, 0, 1};
  int calls = 0;
  const PositionSampler sampler = [&](std::size_t) {
    ++calls;
    return std::vector<double>{0.5, 0.5};
  };
  EXPECT_EQ(perturbSeq(seq, 0.0, sampler, rng), seq);
  EXPECT_EQ(calls, 0);
}

TEST(PerturbSeq, PointMassOnTruthIsIdentity) {
  Rng rng(4);
  const std::vector<int> seq{0, 2, 1, 2, 0, 1};
  const PositionSampler sampler = [&](std::size_t t) {
    std::vector<double> d(3, 0.0);
    d[static_cast<std::size_t>(seq[t])] = 1.0;
    return d;
  };
  EXPECT_EQ(perturbSeq(seq, 1.0, sampler, rng), seq);
}

TEST(PerturbSeq, UniformSamplerFrequency) {
  Rng rng(5);
  const std::vector<int> seq(10000, 0);
  const PositionSampler sampler = [](std::size_t) { return std::vector<double>{0.5, 0.5}; };
  const auto out = perturbSeq(seq, 1.0, sampler, rng);
  const double ones = static_cast<double>(std::count(out.begin(), out.end(), 1)) / 10000.0;
  EXPECT_NEAR(ones, 0.5, 0.02);
}

TEST(PerturbSeq, ReplacementRateWithinThreeSigma) {
  const std::size_t n = 20000;
  const std::vector<int> seq(n, 0);
  const PositionSampler flip = [](std::size_t) { return std::vector<double>{0.0, 1.0}; };
  for (double beta : {0.05, 0.15, 0.5}) {
    Rng rng(6);
    const auto out = perturbSeq(seq, beta, flip, rng);
    const double rate = static_cast<double>(std::count(out.begin(), out.end(), 1)) / static_cast<double>(n);
    EXPECT_NEAR(rate, beta, 3 * std::sqrt(beta * (1 - beta) / static_cast<double>(n))) << beta;
  }
}

TEST(PerturbSeq, ProgramOverloadKeepsLength) {
  Rng rng(7);
  const PositionSampler sampler = [](std::size_t) { return std::vector<double>{0.5, 0.5}; };
  const auto out = perturbSeq(P("RWRWRRWW"), 0.5, sampler, rng);
  EXPECT_EQ(out.size(), 8u);
}

}  // namespace
}  // namespace simt
