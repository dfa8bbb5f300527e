#include <fstream>
#include <sstream>

#include <json.hpp>

#include "simt/corpus.hpp"
#include "simt/error.hpp"

namespace simt {

std::vector<std::string_view> splitLines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (true) {
    const auto nl = text.find('\n', start);
    auto line = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (nl == std::string_view::npos) {
      // A terminating newline does not open another line.
      if (!(start == text.size() && start != 0)) lines.push_back(line);
      break;
    }
    lines.push_back(line);
    start = nl + 1;
  }
  return lines;
}

std::vector<std::string_view> splitTokens(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t k = 0;
  auto isSpace = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; };
  while (k < line.size()) {
    while (k < line.size() && isSpace(line[k])) ++k;
    const auto begin = k;
    while (k < line.size() && !isSpace(line[k])) ++k;
    if (k > begin) tokens.push_back(line.substr(begin, k - begin));
  }
  return tokens;
}

std::string readFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string joinTokens(const std::vector<TokenId>& ids, const Vocabulary& vocab) {
  std::string out;
  for (auto id : ids) {
    if (!out.empty()) out += ' ';
    out += vocab.text(id);
  }
  return out;
}

std::vector<std::vector<TokenId>> parseSentences(std::string_view text, Vocabulary& vocab, VocabMode mode,
                                                 std::string_view side) {
  std::vector<std::vector<TokenId>> sentences;
  const auto lines = splitLines(text);
  sentences.reserve(lines.size());
  for (std::size_t k = 0; k < lines.size(); ++k) {
    std::vector<TokenId> ids;
    for (auto tok : splitTokens(lines[k])) {
      ids.push_back(mode == VocabMode::Grow ? vocab.intern(tok) : vocab.lookup(tok));
    }
    if (ids.empty()) throw ParseError("empty " + std::string(side) + " line " + std::to_string(k + 1));
    sentences.push_back(std::move(ids));
  }
  return sentences;
}

std::vector<SentencePair> parseParallel(std::string_view sourceText, std::string_view targetText,
                                        Vocabulary& sourceVocab, Vocabulary& targetVocab,
                                        VocabMode mode) {
  const auto srcLines = splitLines(sourceText).size();
  const auto tgtLines = splitLines(targetText).size();
  if (srcLines != tgtLines) {
    throw ParseError("line count mismatch: source has " + std::to_string(srcLines) +
                     " lines, target has " + std::to_string(tgtLines));
  }
  auto src = parseSentences(sourceText, sourceVocab, mode, "source");
  auto tgt = parseSentences(targetText, targetVocab, mode, "target");
  std::vector<SentencePair> pairs(src.size());
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    pairs[k].source = std::move(src[k]);
    pairs[k].target = std::move(tgt[k]);
  }
  return pairs;
}

void attachAlignments(std::vector<SentencePair>& pairs, std::string_view alignmentText) {
  auto lines = splitLines(alignmentText);
  if (lines.size() != pairs.size()) {
    throw ParseError("alignment file has " + std::to_string(lines.size()) + " lines, corpus has " +
                     std::to_string(pairs.size()) + " pairs");
  }
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    auto a = parseAlignment(lines[k]);
    try {
      a.checkRange(pairs[k].source.size(), pairs[k].target.size());
    } catch (const InvalidArgument& e) {
      throw ParseError("alignment line " + std::to_string(k + 1) + ": " + e.what());
    }
    pairs[k].alignment = std::move(a);
  }
}

std::string corpusManifestJson(const ParallelCorpus& corpus, const std::string& prefix) {
  std::size_t srcTokens = 0;
  std::size_t tgtTokens = 0;
  std::size_t aligned = 0;
  for (const auto& p : corpus.pairs) {
    srcTokens += p.source.size();
    tgtTokens += p.target.size();
    if (p.alignment) ++aligned;
  }
  nlohmann::ordered_json j;
  j["pairs"] = corpus.pairs.size();
  j["sourceTokens"] = srcTokens;
  j["targetTokens"] = tgtTokens;
  j["alignedPairs"] = aligned;
  j["sourceVocabulary"] = {{"path", prefix + ".src.vocab"}, {"size", corpus.sourceVocab.size()}};
  j["targetVocabulary"] = {{"path", prefix + ".tgt.vocab"}, {"size", corpus.targetVocab.size()}};
  return j.dump(2) + "\n";
}

void writeCorpus(const ParallelCorpus& corpus, const std::string& prefix) {
  std::ofstream src(prefix + ".src");
  std::ofstream tgt(prefix + ".tgt");
  std::ofstream align(prefix + ".align");
  if (!src || !tgt || !align) throw Error("cannot write corpus files with prefix " + prefix);
  for (const auto& p : corpus.pairs) {
    src << joinTokens(p.source, corpus.sourceVocab) << '\n';
    tgt << joinTokens(p.target, corpus.targetVocab) << '\n';
    align << (p.alignment ? formatAlignment(*p.alignment) : std::string()) << '\n';
  }
  corpus.sourceVocab.save(prefix + ".src.vocab");
  corpus.targetVocab.save(prefix + ".tgt.vocab");
  std::ofstream manifest(prefix + ".manifest.json");
  manifest << corpusManifestJson(corpus, prefix);
}

}  // namespace simt
