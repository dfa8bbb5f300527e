#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "simt/program.hpp"

namespace simt {

// Lag metrics over a g-vector.  g is stored 0-indexed: g[j-1] is the number
// of source tokens read when target token j (1-indexed) is written.

// AP = sum_j g(j) / (|x| |y|).
double averageProportion(std::span<const std::size_t> g, std::size_t srcLen, std::size_t tgtLen);

// AL = (1/tau) sum_{j<=tau} [g(j) - (j-1)/r], r = |y|/|x|,
// tau = first j with g(j) = |x|.
double averageLagging(std::span<const std::size_t> g, std::size_t srcLen, std::size_t tgtLen);

// g'(j) = max(g(j), g'(j-1) + 1/r) with g'(0) = 0.
std::vector<double> dalAdjustedLags(std::span<const std::size_t> g, std::size_t srcLen, std::size_t tgtLen);

// DAL = (1/|y|) sum_j [g'(j) - (j-1)/r].
double differentiableAL(std::span<const std::size_t> g, std::size_t srcLen, std::size_t tgtLen);

struct DelayReport {
  double ap = 0.0;
  double al = 0.0;
  double dal = 0.0;
  std::vector<std::size_t> g;
  std::vector<double> gPrime;
  std::size_t srcLen = 0;
  std::size_t tgtLen = 0;
};

// Requires a boundary-valid program for (srcLen, tgtLen).
DelayReport delayReport(const Program& p, std::size_t srcLen, std::size_t tgtLen);

struct BleuScore {
  double score = 0.0;
  std::array<double, 4> nGramPrecisions{};
  double brevityPenalty = 0.0;
  std::size_t hypothesisLength = 0;
  std::size_t referenceLength = 0;
};

// Sufficient statistics for corpus BLEU; merge is associative.
struct BleuStats {
  std::array<std::size_t, 4> matches{};
  std::array<std::size_t, 4> totals{};
  std::size_t hypothesisLength = 0;
  std::size_t referenceLength = 0;

  void merge(const BleuStats& other);
};

namespace detail {

void checkBleuInputs(std::size_t hypotheses, std::size_t references);

template <class Token>
std::map<std::vector<Token>, std::size_t> countNgrams(const std::vector<Token>& s, std::size_t n) {
  std::map<std::vector<Token>, std::size_t> counts;
  for (std::size_t k = 0; k + n <= s.size(); ++k) {
    ++counts[std::vector<Token>(s.begin() + static_cast<std::ptrdiff_t>(k),
                                s.begin() + static_cast<std::ptrdiff_t>(k + n))];
  }
  return counts;
}

}  // namespace detail

template <class Token>
BleuStats sentenceBleuStats(const std::vector<Token>& hyp, const std::vector<Token>& ref, std::size_t maxN = 4) {
  BleuStats s;
  s.hypothesisLength = hyp.size();
  s.referenceLength = ref.size();
  for (std::size_t n = 1; n <= maxN && n <= 4; ++n) {
    const auto h = detail::countNgrams(hyp, n);
    const auto r = detail::countNgrams(ref, n);
    for (const auto& [gram, count] : h) {
      auto it = r.find(gram);
      if (it != r.end()) s.matches[n - 1] += std::min(count, it->second);
    }
    s.totals[n - 1] = hyp.size() >= n ? hyp.size() - n + 1 : 0;
  }
  return s;
}

// Clipped n-gram precisions with exponential smoothing for zero matches at
// orders above one, exponential brevity penalty.
BleuScore bleuFromStats(const BleuStats& stats, std::size_t maxN = 4);

template <class Token>
BleuScore corpusBleu(const std::vector<std::vector<Token>>& hypotheses,
                     const std::vector<std::vector<Token>>& references, std::size_t maxN = 4) {
  detail::checkBleuInputs(hypotheses.size(), references.size());
  BleuStats total;
  for (std::size_t k = 0; k < hypotheses.size(); ++k) {
    total.merge(sentenceBleuStats(hypotheses[k], references[k], maxN));
  }
  return bleuFromStats(total, maxN);
}

}  // namespace simt
