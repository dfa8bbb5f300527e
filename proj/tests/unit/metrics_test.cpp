#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <string>

#include "reference.hpp"
#include "simt/error.hpp"
#include "simt/metrics.hpp"

namespace simt {
namespace {

using G = std::vector<std::size_t>;
constexpr double kTol = 1e-12;

TEST(AverageProportion, Examples) {
  EXPECT_NEAR(averageProportion(G{3, 3, 3}, 3, 3), 1.0, kTol);
  EXPECT_NEAR(averageProportion(G{1, 2, 3}, 3, 3), 6.0 / 9.0, kTol);
  EXPECT_NEAR(averageProportion(G{1, 2, 3, 4}, 4, 4), 10.0 / 16.0, kTol);
  EXPECT_NEAR(averageProportion(G{1, 2, 2}, 2, 3), 5.0 / 6.0, kTol);
}

TEST(AverageProportion, LengthMismatch) { EXPECT_THROW(averageProportion(G{1, 2}, 2, 3), InvalidArgument); }

TEST(AverageLagging, Examples) {
  EXPECT_NEAR(averageLagging(G{3, 3, 3}, 3, 3), 3.0, kTol);
  EXPECT_NEAR(averageLagging(G{1, 2, 3, 4}, 4, 4), 1.0, kTol);
  EXPECT_NEAR(averageLagging(G{1, 2, 2}, 2, 3), 7.0 / 6.0, kTol);
}

TEST(AverageLagging, IncompleteSourceRejected) {
  try {
    averageLagging(G{1, 2}, 3, 2);
    FAIL();
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("does not read full source"), std::string::npos);
  }
}

TEST(DifferentiableAL, Examples) {
  EXPECT_EQ(dalAdjustedLags(G{3, 3, 3}, 3, 3), (std::vector<double>{3, 4, 5}));
  EXPECT_NEAR(differentiableAL(G{3, 3, 3}, 3, 3), 3.0, kTol);
  EXPECT_NEAR(differentiableAL(G{1, 2, 3, 4}, 4, 4), 1.0, kTol);
  const auto gp = dalAdjustedLags(G{1, 2, 2}, 2, 3);
  EXPECT_NEAR(gp[0], 1.0, kTol);
  EXPECT_NEAR(gp[1], 2.0, kTol);
  EXPECT_NEAR(gp[2], 8.0 / 3.0, kTol);
  EXPECT_NEAR(differentiableAL(G{1, 2, 2}, 2, 3), 11.0 / 9.0, kTol);
}

TEST(DifferentiableAL, LengthMismatch) { EXPECT_THROW(differentiableAL(G{1}, 2, 3), InvalidArgument); }

TEST(DelayReport, WaitInfinity) {
  for (std::size_t x = 1; x <= 20; ++x) {
    for (std::size_t y = 1; y <= 20; ++y) {
      const auto r = delayReport(waitK(x, x, y), x, y);
      EXPECT_NEAR(r.ap, 1.0, kTol);
      EXPECT_NEAR(r.al, static_cast<double>(x), 1e-9);
      EXPECT_NEAR(r.dal, static_cast<double>(x), 1e-9);
    }
  }
}

TEST(DelayReport, WaitOneEqualLengths) {
  for (std::size_t n = 1; n <= 30; ++n) {
    const auto r = delayReport(waitK(1, n, n), n, n);
    EXPECT_NEAR(r.ap, static_cast<double>(n + 1) / (2.0 * static_cast<double>(n)), kTol);
    EXPECT_NEAR(r.al, 1.0, 1e-9);
    EXPECT_NEAR(r.dal, 1.0, 1e-9);
  }
}

TEST(DelayReport, DiagonalOracle) {
  const auto r = delayReport(Program::parse("RWRWRW"), 3, 3);
  EXPECT_NEAR(r.ap, 2.0 / 3.0, kTol);
  EXPECT_NEAR(r.al, 1.0, kTol);
  EXPECT_NEAR(r.dal, 1.0, kTol);
}

TEST(DelayReport, RequiresBoundaryValidProgram) {
  EXPECT_THROW(delayReport(Program::parse("WRRW"), 2, 2), InvalidArgument);
  EXPECT_THROW(delayReport(Program::parse("RWRW"), 3, 1), InvalidArgument);
}

TEST(DelayReport, MatchesExactRationalReference) {
  std::mt19937_64 eng(51);
  for (int trial = 0; trial < 3000; ++trial) {
    const int x = ref::uniformInt(eng, 1, 40), y = ref::uniformInt(eng, 1, 40);
    const auto s = ref::randomValidProgram(eng, x, y);
    const auto r = delayReport(Program::parse(s), static_cast<std::size_t>(x), static_cast<std::size_t>(y));
    const auto g = ref::lags(s);
    ASSERT_NEAR(r.ap, ref::ap(g, x, y).value(), 1e-12) << s;
    ASSERT_NEAR(r.al, ref::al(g, x, y).value(), 1e-9) << s;
    ASSERT_NEAR(r.dal, ref::dal(g, x, y).value(), 1e-9) << s;
  }
}

TEST(DelayReport, AdjustedLagInvariants) {
  std::mt19937_64 eng(53);
  for (int trial = 0; trial < 2000; ++trial) {
    const int x = ref::uniformInt(eng, 1, 30), y = ref::uniformInt(eng, 1, 30);
    const auto r = delayReport(Program::parse(ref::randomValidProgram(eng, x, y)), static_cast<std::size_t>(x),
                               static_cast<std::size_t>(y));
    const double step = static_cast<double>(x) / static_cast<double>(y);
    ASSERT_GT(r.ap, 0.0);
    ASSERT_LE(r.ap, 1.0 + kTol);
    ASSERT_TRUE(std::isfinite(r.al) && std::isfinite(r.dal));
    for (std::size_t j = 0; j < r.g.size(); ++j) {
      ASSERT_GE(r.gPrime[j], static_cast<double>(r.g[j]));
      const double prev = j == 0 ? 0.0 : r.gPrime[j - 1];
      ASSERT_NEAR(r.gPrime[j], std::max(static_cast<double>(r.g[j]), prev + step), 1e-12);
      if (j > 0) ASSERT_GE(r.gPrime[j] - r.gPrime[j - 1], step - 1e-12);
    }
  }
}

TEST(DelayReport, ApIsOneOnlyForReadAllFirst) {
  std::mt19937_64 eng(57);
  for (int trial = 0; trial < 2000; ++trial) {
    const int x = ref::uniformInt(eng, 1, 8), y = ref::uniformInt(eng, 1, 8);
    const auto s = ref::randomValidProgram(eng, x, y);
    const auto r = delayReport(Program::parse(s), static_cast<std::size_t>(x), static_cast<std::size_t>(y));
    const bool readAllFirst = s == std::string(static_cast<std::size_t>(x), 'R') + std::string(static_cast<std::size_t>(y), 'W');
    ASSERT_EQ(std::abs(r.ap - 1.0) < 1e-12, readAllFirst) << s;
  }
}

TEST(DelayReport, ApAndDalMonotoneUnderAddDelay) {
  std::mt19937_64 eng(59);
  for (int trial = 0; trial < 500; ++trial) {
    const int x = ref::uniformInt(eng, 1, 30), y = ref::uniformInt(eng, 1, 30);
    const auto p = Program::parse(ref::randomValidProgram(eng, x, y));
    DelayReport prev = delayReport(p, static_cast<std::size_t>(x), static_cast<std::size_t>(y));
    for (std::size_t d = 1; d <= 5; ++d) {
      const auto cur = delayReport(addDelay(p, d), static_cast<std::size_t>(x), static_cast<std::size_t>(y));
      ASSERT_GE(cur.ap, prev.ap - 1e-12);
      ASSERT_GE(cur.dal, prev.dal - 1e-12);
      prev = cur;
    }
  }
}

TEST(DelayReport, AlMonotoneWhileCutoffStays) {
  std::mt19937_64 eng(61);
  for (int trial = 0; trial < 500; ++trial) {
    const int x = ref::uniformInt(eng, 1, 30), y = ref::uniformInt(eng, 1, 30);
    const auto p = Program::parse(ref::randomValidProgram(eng, x, y));
    const auto q = addDelay(p, 1);
    const auto sx = static_cast<std::size_t>(x), sy = static_cast<std::size_t>(y);
    const auto cutoff = [sx](const std::vector<std::size_t>& g) { return std::find(g.begin(), g.end(), sx) - g.begin(); };
    if (cutoff(gVector(p)) != cutoff(gVector(q))) continue;
    ASSERT_GE(delayReport(q, sx, sy).al, delayReport(p, sx, sy).al - 1e-12) << p.str();
  }
}

// Delay can move the cutoff earlier and drop positive terms from the average.
TEST(DelayReport, AlCanDropWhenCutoffMovesEarlier) {
  const auto p = Program::parse("RWRWRWRRRWWRRRRRRRRRRRRRRRRRRWWRW");
  const auto q = addDelay(p, 1);
  EXPECT_DOUBLE_EQ(delayReport(p, 25, 8).al, 7.0 / 16.0);
  EXPECT_DOUBLE_EQ(delayReport(q, 25, 8).al, 3.0 / 16.0);
  EXPECT_GT(delayReport(q, 25, 8).dal, delayReport(p, 25, 8).dal);
}

using Sent = std::vector<std::string>;

Sent words(const std::string& s) {
  Sent out;
  std::string cur;
  for (char c : s) {
    if (c == ' ') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

TEST(CorpusBleu, IdentityIsHundred) {
  const std::vector<Sent> refs{words("the cat sat on the mat"), words("a b c d e")};
  EXPECT_NEAR(corpusBleu(refs, refs).score, 100.0, 1e-9);
}

TEST(CorpusBleu, NoUnigramOverlapIsZero) {
  EXPECT_EQ(corpusBleu(std::vector<Sent>{words("x y z")}, std::vector<Sent>{words("a b c")}).score, 0.0);
}

TEST(CorpusBleu, HandComputedSmoothing) {
  const auto s = corpusBleu(std::vector<Sent>{words("a b c d")}, std::vector<Sent>{words("a b c e")});
  EXPECT_NEAR(s.nGramPrecisions[0], 3.0 / 4.0, kTol);
  EXPECT_NEAR(s.nGramPrecisions[1], 2.0 / 3.0, kTol);
  EXPECT_NEAR(s.nGramPrecisions[2], 1.0 / 2.0, kTol);
  // No 4-gram matches out of one: smoothed to 1 / (2 * 1).
  EXPECT_NEAR(s.nGramPrecisions[3], 1.0 / 2.0, kTol);
  EXPECT_NEAR(s.brevityPenalty, 1.0, kTol);
  EXPECT_NEAR(s.score, 100.0 * std::pow(2.0, -0.75), 1e-9);
}

TEST(CorpusBleu, ClippedCountsAndBrevityPenalty) {
  // "the the the" vs "the cat": unigram matches clipped to 1 of 3.
  const auto s = corpusBleu(std::vector<Sent>{words("the the the")}, std::vector<Sent>{words("the cat")});
  EXPECT_NEAR(s.nGramPrecisions[0], 1.0 / 3.0, kTol);
  const auto shortHyp = corpusBleu(std::vector<Sent>{words("a b")}, std::vector<Sent>{words("a b c d")});
  EXPECT_NEAR(shortHyp.brevityPenalty, std::exp(1.0 - 4.0 / 2.0), kTol);
}

TEST(CorpusBleu, EmptyOrMismatchedInputs) {
  EXPECT_THROW(corpusBleu(std::vector<Sent>{}, std::vector<Sent>{}), InvalidArgument);
  EXPECT_THROW(corpusBleu(std::vector<Sent>{words("a")}, std::vector<Sent>{}), InvalidArgument);
}

TEST(CorpusBleu, PermutationInvariantAndHundredOnlyWhenEqual) {
  std::mt19937_64 eng(61);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = ref::uniformInt(eng, 1, 8);
    std::vector<std::vector<int>> hyps, refs;
    bool allEqual = true;
    for (int k = 0; k < n; ++k) {
      std::vector<int> r(static_cast<std::size_t>(ref::uniformInt(eng, 4, 12)));
      for (auto& t : r) t = ref::uniformInt(eng, 0, 5);
      auto h = r;
      if (ref::uniformInt(eng, 0, 2) == 0) {
        h[static_cast<std::size_t>(ref::uniformInt(eng, 0, static_cast<int>(h.size()) - 1))] = 9;
        allEqual = false;
      }
      hyps.push_back(h);
      refs.push_back(r);
    }
    const double score = corpusBleu(hyps, refs).score;
    std::vector<std::size_t> order(hyps.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), eng);
    std::vector<std::vector<int>> h2, r2;
    for (auto k : order) {
      h2.push_back(hyps[k]);
      r2.push_back(refs[k]);
    }
    ASSERT_NEAR(corpusBleu(h2, r2).score, score, 1e-9);
    ASSERT_EQ(std::abs(score - 100.0) < 1e-9, allEqual);
  }
}

TEST(BleuStats, MergeIsAssociative) {
  const auto a = sentenceBleuStats(words("a b c"), words("a b d"));
  const auto b = sentenceBleuStats(words("x y"), words("x y"));
  const auto c = sentenceBleuStats(words("p q r s"), words("q r s p"));
  BleuStats left = a;
  left.merge(b);
  left.merge(c);
  BleuStats bc = b;
  bc.merge(c);
  BleuStats right = a;
  right.merge(bc);
  EXPECT_EQ(left.matches, right.matches);
  EXPECT_EQ(left.totals, right.totals);
  EXPECT_NEAR(bleuFromStats(left).score, bleuFromStats(right).score, 1e-12);
}

}  // namespace
}  // namespace simt
