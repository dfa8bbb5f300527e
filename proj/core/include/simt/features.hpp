#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "simt/simulate.hpp"

namespace simt {

inline constexpr std::string_view kFeatureMapVersion = "simt-linear-v1";

struct SparseFeature {
  std::uint32_t index = 0;
  double value = 1.0;
};

using FeatureVector = std::vector<SparseFeature>;

// Programmer view: read/write counters, the last three actions, the last
// read and last written tokens, the progress term i - j * meanRatio and the
// source-exhausted flag.  Only revealed prefixes are consulted.
class ProgrammerFeatureMap {
 public:
  ProgrammerFeatureMap(std::size_t sourceVocabSize, std::size_t targetVocabSize, double meanLengthRatio);

  std::size_t dimension() const { return dimension_; }
  double meanLengthRatio() const { return meanRatio_; }
  void extract(const EpisodeView& view, FeatureVector& out) const;

 private:
  std::size_t sourceVocab_;
  std::size_t targetVocab_;
  double meanRatio_;
  std::uint32_t counterOffset_ = 0;
  std::uint32_t historyOffset_ = 0;
  std::uint32_t lastReadOffset_ = 0;
  std::uint32_t lastWrittenOffset_ = 0;
  std::uint32_t progressOffset_ = 0;
  std::uint32_t exhaustedOffset_ = 0;
  std::size_t dimension_ = 0;
};

// Interpreter view: the next target position j, the last read token, the
// previous written token, the source tokens at positions j and j-1 when
// already read, a bag-of-words summary of the read prefix and the read/write
// lag.  Token features are conjoined with a coarse phase
// (min(j, 2), source exhausted) so one linear model can switch between them.
class InterpreterFeatureMap {
 public:
  InterpreterFeatureMap(std::size_t sourceVocabSize, std::size_t targetVocabSize);

  std::size_t dimension() const { return dimension_; }
  void extract(const EpisodeView& view, FeatureVector& out) const;

 private:
  std::size_t sourceVocab_;
  std::size_t targetVocab_;
  std::uint32_t positionOffset_ = 0;
  std::uint32_t lagOffset_ = 0;
  std::uint32_t lastReadOffset_ = 0;
  std::uint32_t alignedOffset_ = 0;
  std::uint32_t alignedPrevOffset_ = 0;
  std::uint32_t prevWrittenOffset_ = 0;
  std::uint32_t bagOffset_ = 0;
  std::size_t dimension_ = 0;
};

}  // namespace simt
