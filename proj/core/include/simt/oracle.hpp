#pragma once

#include <cstddef>
#include <vector>

#include "simt/corpus.hpp"
#include "simt/program.hpp"

namespace simt {

struct OracleConfig {
  // Add the links (0,0) and (|x|-1,|y|-1) before generation.
  bool anchorEndpoints = true;
};

// Returns a ∪ {(0,0), (srcLen-1, tgtLen-1)}.
AlignmentSet anchorAlignment(const AlignmentSet& a, std::size_t srcLen, std::size_t tgtLen);

// Alignment-driven oracle program.  For each target word j, in order, READ up
// to the furthest source word aligned to j (nothing when j is unaligned or the
// word was already read), then WRITE.  With anchoring the result is always
// boundary-valid; without it the program is returned as is and the caller
// decides via isValid.
Program generateOracle(const AlignmentSet& a, std::size_t srcLen, std::size_t tgtLen,
                       const OracleConfig& cfg = {});

struct OracleStats {
  std::size_t sentences = 0;
  std::size_t invalidPrograms = 0;
  std::size_t anchoredLinksAdded = 0;
  std::size_t unalignedTargetWords = 0;
  double meanProgramLength = 0.0;
  // Means over boundary-valid programs only.
  double meanAp = 0.0;
  double meanAl = 0.0;
  double meanDal = 0.0;

  // Associative merge of two partial aggregates.
  OracleStats merged(const OracleStats& other) const;
};

struct OracleCorpusResult {
  std::vector<Program> programs;
  OracleStats stats;
};

// Throws InvalidArgument naming the index of the first pair without alignment.
OracleCorpusResult oracleCorpus(const std::vector<SentencePair>& pairs, const OracleConfig& cfg = {},
                                std::size_t jobs = 1);

}  // namespace simt
