#include "simt/features.hpp"

#include <algorithm>
#include <cmath>

namespace simt {
namespace {

constexpr std::size_t kCounterBuckets = 16;
constexpr std::size_t kHistoryCodes = 27;  // 3 slots of {none, READ, WRITE}
constexpr long kProgressMin = -4;
constexpr long kProgressMax = 12;
constexpr std::size_t kPhases = 6;
constexpr long kLagMin = -2;
constexpr long kLagMax = 5;

std::uint32_t bucket(std::size_t v) { return static_cast<std::uint32_t>(std::min(v, kCounterBuckets - 1)); }

std::uint32_t tok(TokenId id, std::size_t vocab) {
  // Out-of-range ids (a foreign vocabulary) share the <unk> slot.
  return id >= 0 && static_cast<std::size_t>(id) < vocab ? static_cast<std::uint32_t>(id) : 0u;
}

}  // namespace

ProgrammerFeatureMap::ProgrammerFeatureMap(std::size_t sourceVocabSize, std::size_t targetVocabSize,
                                           double meanLengthRatio)
    : sourceVocab_(sourceVocabSize), targetVocab_(targetVocabSize), meanRatio_(meanLengthRatio) {
  std::size_t off = 1;  // bias
  counterOffset_ = static_cast<std::uint32_t>(off);
  off += 2 * kCounterBuckets;
  historyOffset_ = static_cast<std::uint32_t>(off);
  off += kHistoryCodes;
  lastReadOffset_ = static_cast<std::uint32_t>(off);
  off += sourceVocab_;
  lastWrittenOffset_ = static_cast<std::uint32_t>(off);
  off += targetVocab_;
  progressOffset_ = static_cast<std::uint32_t>(off);
  off += static_cast<std::size_t>(kProgressMax - kProgressMin + 1);
  exhaustedOffset_ = static_cast<std::uint32_t>(off);
  off += 2;
  dimension_ = off;
}

void ProgrammerFeatureMap::extract(const EpisodeView& view, FeatureVector& out) const {
  out.clear();
  const auto i = view.reads();
  const auto j = view.writes();
  out.push_back({0, 1.0});
  out.push_back({counterOffset_ + bucket(i), 1.0});
  out.push_back({counterOffset_ + static_cast<std::uint32_t>(kCounterBuckets) + bucket(j), 1.0});

  std::uint32_t code = 0;
  const auto t = view.actions.size();
  for (std::size_t back = 1; back <= 3; ++back) {
    const std::uint32_t slot = back <= t ? 1u + static_cast<std::uint32_t>(view.actions[t - back]) : 0u;
    code = code * 3 + slot;
  }
  out.push_back({historyOffset_ + code, 1.0});

  if (i > 0) out.push_back({lastReadOffset_ + tok(view.source[i - 1], sourceVocab_), 1.0});
  if (j > 0) out.push_back({lastWrittenOffset_ + tok(view.target[j - 1], targetVocab_), 1.0});

  const double progress = static_cast<double>(i) - static_cast<double>(j) * meanRatio_;
  const long p = std::clamp(std::lround(progress), kProgressMin, kProgressMax);
  out.push_back({progressOffset_ + static_cast<std::uint32_t>(p - kProgressMin), 1.0});
  out.push_back({exhaustedOffset_ + (view.sourceExhausted ? 1u : 0u), 1.0});
}

InterpreterFeatureMap::InterpreterFeatureMap(std::size_t sourceVocabSize, std::size_t targetVocabSize)
    : sourceVocab_(sourceVocabSize), targetVocab_(targetVocabSize) {
  std::size_t off = 1;  // bias
  positionOffset_ = static_cast<std::uint32_t>(off);
  off += kCounterBuckets;
  lagOffset_ = static_cast<std::uint32_t>(off);
  off += 2 * static_cast<std::size_t>(kLagMax - kLagMin + 1);
  lastReadOffset_ = static_cast<std::uint32_t>(off);
  off += kPhases * sourceVocab_;
  alignedOffset_ = static_cast<std::uint32_t>(off);
  off += kPhases * sourceVocab_;
  alignedPrevOffset_ = static_cast<std::uint32_t>(off);
  off += kPhases * sourceVocab_;
  prevWrittenOffset_ = static_cast<std::uint32_t>(off);
  off += kPhases * targetVocab_;
  bagOffset_ = static_cast<std::uint32_t>(off);
  off += sourceVocab_;
  dimension_ = off;
}

void InterpreterFeatureMap::extract(const EpisodeView& view, FeatureVector& out) const {
  out.clear();
  const auto i = view.reads();
  const auto j = view.writes();
  const std::uint32_t exhausted = view.sourceExhausted ? 1u : 0u;
  const std::uint32_t phase = static_cast<std::uint32_t>(std::min<std::size_t>(j, 2)) * 2 + exhausted;
  const auto sv = static_cast<std::uint32_t>(sourceVocab_);
  const auto tv = static_cast<std::uint32_t>(targetVocab_);

  out.push_back({0, 1.0});
  out.push_back({positionOffset_ + bucket(j), 1.0});
  const long lag = std::clamp(static_cast<long>(i) - static_cast<long>(j), kLagMin, kLagMax);
  out.push_back({lagOffset_ + exhausted * static_cast<std::uint32_t>(kLagMax - kLagMin + 1) +
                     static_cast<std::uint32_t>(lag - kLagMin),
                 1.0});
  if (i > 0) out.push_back({lastReadOffset_ + phase * sv + tok(view.source[i - 1], sourceVocab_), 1.0});
  if (j < i) out.push_back({alignedOffset_ + phase * sv + tok(view.source[j], sourceVocab_), 1.0});
  if (j >= 1 && j <= i) out.push_back({alignedPrevOffset_ + phase * sv + tok(view.source[j - 1], sourceVocab_), 1.0});
  if (j > 0) out.push_back({prevWrittenOffset_ + phase * tv + tok(view.target[j - 1], targetVocab_), 1.0});
  if (i > 0) {
    const double w = 1.0 / static_cast<double>(i);
    const auto first = out.size();
    for (std::size_t k = 0; k < i; ++k) {
      const std::uint32_t idx = bagOffset_ + tok(view.source[k], sourceVocab_);
      auto it = std::find_if(out.begin() + static_cast<std::ptrdiff_t>(first), out.end(),
                             [idx](const SparseFeature& f) { return f.index == idx; });
      if (it == out.end()) {
        out.push_back({idx, w});
      } else {
        it->value += w;
      }
    }
  }
}

}  // namespace simt
