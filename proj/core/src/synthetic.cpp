#include <numeric>

#include "simt/corpus.hpp"
#include "simt/error.hpp"
#include "simt/rng.hpp"

namespace simt {

std::string_view toString(ReorderRule rule) {
  switch (rule) {
    case ReorderRule::Monotone:
      return "monotone";
    case ReorderRule::FinalToSecond:
      return "finalToSecond";
  }
  return "?";
}

ReorderRule parseReorderRule(std::string_view text) {
  if (text == "monotone") return ReorderRule::Monotone;
  if (text == "finalToSecond") return ReorderRule::FinalToSecond;
  throw InvalidArgument("unknown reorder rule '" + std::string(text) + "'");
}

SyntheticTask::SyntheticTask(SyntheticTaskConfig config) : config_(config) {
  if (config_.vocabSize < 2) throw InvalidArgument("synthetic vocabSize must be at least 2");
  if (config_.minLen < 1 || config_.minLen > config_.maxLen) {
    throw InvalidArgument("synthetic lengths must satisfy 1 <= minLen <= maxLen");
  }
  for (std::size_t v = 0; v < config_.vocabSize; ++v) {
    sourceVocab_.intern("s" + std::to_string(v));
    targetVocab_.intern("t" + std::to_string(v));
  }
  std::vector<TokenId> perm(config_.vocabSize);
  std::iota(perm.begin(), perm.end(), TokenId{0});
  Rng rng(deriveSeed(config_.seed, "mapping"));
  rng.shuffle(perm.begin(), perm.end());
  mapping_.resize(sourceVocab_.size(), Vocabulary::kUnk);
  for (std::size_t v = 0; v < config_.vocabSize; ++v) {
    mapping_[v + 2] = perm[v] + 2;
  }
}

TokenId SyntheticTask::translate(TokenId sourceToken) const {
  if (sourceToken < 2 || static_cast<std::size_t>(sourceToken) >= mapping_.size()) {
    throw InvalidArgument("token id " + std::to_string(sourceToken) + " is not a synthetic source word");
  }
  return mapping_[static_cast<std::size_t>(sourceToken)];
}

SentencePair SyntheticTask::makePair(std::vector<TokenId> source) const {
  if (source.empty()) throw InvalidArgument("synthetic source must be non-empty");
  const std::size_t n = source.size();
  // order[j] is the source position translated at target position j.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (config_.reorderRule == ReorderRule::FinalToSecond && n >= 3) {
    order[1] = n - 1;
    for (std::size_t j = 2; j < n; ++j) order[j] = j - 1;
  }
  SentencePair pair;
  pair.target.reserve(n);
  AlignmentSet gold;
  for (std::size_t j = 0; j < n; ++j) {
    pair.target.push_back(translate(source[order[j]]));
    gold.insert({order[j], j});
  }
  pair.source = std::move(source);
  pair.alignment = std::move(gold);
  return pair;
}

SentencePair SyntheticTask::generatePair(std::uint64_t index) const {
  Rng rng(deriveSeed(deriveSeed(config_.seed, "sentences"), index));
  const std::size_t len = config_.minLen + rng.below(config_.maxLen - config_.minLen + 1);
  std::vector<TokenId> source(len);
  for (auto& tok : source) tok = static_cast<TokenId>(rng.below(config_.vocabSize)) + 2;
  return makePair(std::move(source));
}

ParallelCorpus SyntheticTask::generate(std::size_t n, std::uint64_t firstIndex) const {
  ParallelCorpus corpus{{}, sourceVocab_, targetVocab_};
  corpus.pairs.reserve(n);
  for (std::size_t k = 0; k < n; ++k) corpus.pairs.push_back(generatePair(firstIndex + k));
  return corpus;
}

ParallelCorpus genSynthetic(const SyntheticTaskConfig& config, std::size_t n) {
  if (n < 1) throw InvalidArgument("genSynthetic needs n >= 1");
  return SyntheticTask(config).generate(n);
}

}  // namespace simt
