#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "simt/vocabulary.hpp"

namespace simt {

// One alignment link: source word `src` is aligned to target word `tgt`.
struct Link {
  std::size_t src = 0;
  std::size_t tgt = 0;

  friend bool operator==(const Link&, const Link&) = default;
};

// Set of alignment links, kept sorted by (tgt, src) without duplicates.
class AlignmentSet {
 public:
  AlignmentSet() = default;
  AlignmentSet(std::initializer_list<Link> links);

  // Returns false when the link was already present.
  bool insert(Link link);
  bool contains(Link link) const;

  const std::vector<Link>& links() const { return links_; }
  std::size_t size() const { return links_.size(); }
  bool empty() const { return links_.empty(); }

  // Throws InvalidArgument naming the first link outside [0,srcLen) x [0,tgtLen).
  void checkRange(std::size_t srcLen, std::size_t tgtLen) const;

  friend bool operator==(const AlignmentSet&, const AlignmentSet&) = default;

 private:
  std::vector<Link> links_;
};

// Parses one line of Pharaoh "i-j" pairs.  An empty line is an empty set.
AlignmentSet parseAlignment(std::string_view line);
// Inverse of parseAlignment; links in (tgt, src) order.
std::string formatAlignment(const AlignmentSet& a);

struct SentencePair {
  std::vector<TokenId> source;
  std::vector<TokenId> target;
  std::optional<AlignmentSet> alignment;
};

struct ParallelCorpus {
  std::vector<SentencePair> pairs;
  Vocabulary sourceVocab;
  Vocabulary targetVocab;
};

enum class VocabMode { Grow, Frozen };

// Reads line-aligned, whitespace-tokenized text.  With VocabMode::Frozen
// unknown tokens map to Vocabulary::kUnk.
std::vector<SentencePair> parseParallel(std::string_view sourceText, std::string_view targetText,
                                        Vocabulary& sourceVocab, Vocabulary& targetVocab,
                                        VocabMode mode = VocabMode::Grow);

// One whitespace-tokenized sentence per line; `side` names the input in
// error messages.
std::vector<std::vector<TokenId>> parseSentences(std::string_view text, Vocabulary& vocab, VocabMode mode,
                                                 std::string_view side);

// Attaches one Pharaoh line per pair, validating link ranges.
void attachAlignments(std::vector<SentencePair>& pairs, std::string_view alignmentText);

std::vector<std::string_view> splitLines(std::string_view text);
std::vector<std::string_view> splitTokens(std::string_view line);
std::string readFile(const std::filesystem::path& path);

std::string joinTokens(const std::vector<TokenId>& ids, const Vocabulary& vocab);

enum class ReorderRule { Monotone, FinalToSecond };

struct SyntheticTaskConfig {
  std::size_t vocabSize = 64;
  std::size_t minLen = 5;
  std::size_t maxLen = 15;
  ReorderRule reorderRule = ReorderRule::Monotone;
  std::uint64_t seed = 1;
};

std::string_view toString(ReorderRule rule);
ReorderRule parseReorderRule(std::string_view text);

// Synthetic translation task with gold alignments.  Source word v maps to
// target word m(v) through a seed-derived permutation shared by every pair
// generated from the same config; pair k draws from its own per-index stream,
// so `firstIndex` selects a disjoint slice (e.g. a dev split) of the same task.
class SyntheticTask {
 public:
  explicit SyntheticTask(SyntheticTaskConfig config);

  const SyntheticTaskConfig& config() const { return config_; }
  const Vocabulary& sourceVocab() const { return sourceVocab_; }
  const Vocabulary& targetVocab() const { return targetVocab_; }

  // Target token id for source token id.
  TokenId translate(TokenId sourceToken) const;
  // Builds the pair for a given source sentence under the reorder rule.
  SentencePair makePair(std::vector<TokenId> source) const;
  SentencePair generatePair(std::uint64_t index) const;
  ParallelCorpus generate(std::size_t n, std::uint64_t firstIndex = 0) const;

 private:
  SyntheticTaskConfig config_;
  Vocabulary sourceVocab_;
  Vocabulary targetVocab_;
  std::vector<TokenId> mapping_;
};

// Convenience wrapper: SyntheticTask(config).generate(n).
ParallelCorpus genSynthetic(const SyntheticTaskConfig& config, std::size_t n);

// Plain-text corpus files: <prefix>.src, .tgt, .align, .src.vocab, .tgt.vocab
// and a JSON manifest <prefix>.manifest.json.
void writeCorpus(const ParallelCorpus& corpus, const std::string& prefix);
std::string corpusManifestJson(const ParallelCorpus& corpus, const std::string& prefix);

}  // namespace simt
