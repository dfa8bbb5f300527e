#include "simt/oracle.hpp"

#include <cassert>
#include <optional>

#include "simt/error.hpp"
#include "simt/metrics.hpp"
#include "simt/parallel.hpp"

namespace simt {

AlignmentSet anchorAlignment(const AlignmentSet& a, std::size_t srcLen, std::size_t tgtLen) {
  if (srcLen == 0 || tgtLen == 0) throw InvalidArgument("anchorAlignment needs non-empty sentences");
  a.checkRange(srcLen, tgtLen);
  AlignmentSet out = a;
  out.insert({0, 0});
  out.insert({srcLen - 1, tgtLen - 1});
  return out;
}

Program generateOracle(const AlignmentSet& a, std::size_t srcLen, std::size_t tgtLen, const OracleConfig& cfg) {
  if (srcLen == 0 || tgtLen == 0) throw InvalidArgument("generateOracle needs non-empty sentences");
  a.checkRange(srcLen, tgtLen);
  const AlignmentSet links = cfg.anchorEndpoints ? anchorAlignment(a, srcLen, tgtLen) : a;

  // Links are sorted by (tgt, src): the last link of each target group holds
  // the furthest aligned source word.
  std::vector<std::optional<std::size_t>> furthest(tgtLen);
  for (const auto& l : links.links()) furthest[l.tgt] = l.src;

  std::vector<Action> actions;
  actions.reserve(srcLen + tgtLen);
  long lastRead = -1;
  for (std::size_t j = 0; j < tgtLen; ++j) {
    if (furthest[j]) {
      const long target = static_cast<long>(*furthest[j]);
      for (long r = lastRead; r < target; ++r) actions.push_back(Action::Read);
      lastRead = std::max(lastRead, target);
    }
    assert(lastRead < static_cast<long>(srcLen));
    actions.push_back(Action::Write);
  }
  return Program(std::move(actions));
}

OracleStats OracleStats::merged(const OracleStats& other) const {
  OracleStats m;
  m.sentences = sentences + other.sentences;
  m.invalidPrograms = invalidPrograms + other.invalidPrograms;
  m.anchoredLinksAdded = anchoredLinksAdded + other.anchoredLinksAdded;
  m.unalignedTargetWords = unalignedTargetWords + other.unalignedTargetWords;
  auto mix = [](double a, std::size_t na, double b, std::size_t nb) {
    return na + nb == 0 ? 0.0 : (a * static_cast<double>(na) + b * static_cast<double>(nb)) /
                                    static_cast<double>(na + nb);
  };
  m.meanProgramLength = mix(meanProgramLength, sentences, other.meanProgramLength, other.sentences);
  const auto validA = sentences - invalidPrograms;
  const auto validB = other.sentences - other.invalidPrograms;
  m.meanAp = mix(meanAp, validA, other.meanAp, validB);
  m.meanAl = mix(meanAl, validA, other.meanAl, validB);
  m.meanDal = mix(meanDal, validA, other.meanDal, validB);
  return m;
}

namespace {

OracleStats sentenceStats(const SentencePair& pair, const Program& program, const OracleConfig& cfg) {
  const auto srcLen = pair.source.size();
  const auto tgtLen = pair.target.size();
  OracleStats s;
  s.sentences = 1;
  s.meanProgramLength = static_cast<double>(program.size());
  AlignmentSet used = *pair.alignment;
  if (cfg.anchorEndpoints) {
    used = anchorAlignment(used, srcLen, tgtLen);
    s.anchoredLinksAdded = used.size() - pair.alignment->size();
  }
  std::vector<bool> aligned(tgtLen, false);
  for (const auto& l : used.links()) aligned[l.tgt] = true;
  for (bool b : aligned) s.unalignedTargetWords += b ? 0 : 1;
  if (isBoundaryValid(program, srcLen, tgtLen)) {
    const auto report = delayReport(program, srcLen, tgtLen);
    s.meanAp = report.ap;
    s.meanAl = report.al;
    s.meanDal = report.dal;
  } else {
    s.invalidPrograms = 1;
  }
  return s;
}

}  // namespace

OracleCorpusResult oracleCorpus(const std::vector<SentencePair>& pairs, const OracleConfig& cfg,
                                std::size_t jobs) {
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    if (!pairs[k].alignment) throw InvalidArgument("sentence " + std::to_string(k) + " has no alignment");
  }
  OracleCorpusResult result;
  result.programs.resize(pairs.size());
  std::vector<OracleStats> perSentence(pairs.size());
  parallelFor(pairs.size(), jobs, [&](std::size_t k) {
    const auto& p = pairs[k];
    result.programs[k] = generateOracle(*p.alignment, p.source.size(), p.target.size(), cfg);
    perSentence[k] = sentenceStats(p, result.programs[k], cfg);
  });
  for (const auto& s : perSentence) result.stats = result.stats.merged(s);
  return result;
}

}  // namespace simt
