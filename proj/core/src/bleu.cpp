#include <cmath>

#include "simt/error.hpp"
#include "simt/metrics.hpp"

namespace simt {

namespace detail {

void checkBleuInputs(std::size_t hypotheses, std::size_t references) {
  if (hypotheses == 0) throw InvalidArgument("corpusBleu: empty hypothesis set");
  if (hypotheses != references) {
    throw InvalidArgument("corpusBleu: " + std::to_string(hypotheses) + " hypotheses but " +
                          std::to_string(references) + " references");
  }
}

}  // namespace detail

void BleuStats::merge(const BleuStats& other) {
  for (std::size_t n = 0; n < 4; ++n) {
    matches[n] += other.matches[n];
    totals[n] += other.totals[n];
  }
  hypothesisLength += other.hypothesisLength;
  referenceLength += other.referenceLength;
}

BleuScore bleuFromStats(const BleuStats& stats, std::size_t maxN) {
  if (maxN < 1 || maxN > 4) throw InvalidArgument("corpusBleu: maxN must be in [1, 4]");
  BleuScore out;
  out.hypothesisLength = stats.hypothesisLength;
  out.referenceLength = stats.referenceLength;
  if (stats.hypothesisLength == 0) return out;
  out.brevityPenalty =
      stats.hypothesisLength < stats.referenceLength
          ? std::exp(1.0 - static_cast<double>(stats.referenceLength) / static_cast<double>(stats.hypothesisLength))
          : 1.0;
  double smooth = 1.0;
  double logSum = 0.0;
  bool zero = false;
  for (std::size_t n = 0; n < maxN; ++n) {
    const auto total = static_cast<double>(stats.totals[n]);
    if (stats.totals[n] == 0) {
      zero = true;
      continue;
    }
    double precision;
    if (stats.matches[n] > 0) {
      precision = static_cast<double>(stats.matches[n]) / total;
    } else if (n == 0) {
      precision = 0.0;
      zero = true;
    } else {
      smooth *= 2.0;
      precision = 1.0 / (smooth * total);
    }
    out.nGramPrecisions[n] = precision;
    if (precision > 0.0) logSum += std::log(precision);
  }
  if (zero) return out;
  out.score = 100.0 * out.brevityPenalty * std::exp(logSum / static_cast<double>(maxN));
  return out;
}

}  // namespace simt
