#include <charconv>
#include <iostream>
#include <memory>
#include <optional>

#include "simt/error.hpp"
#include "simt/metrics.hpp"
#include "simt/oracle.hpp"
#include "simt/parallel.hpp"
#include "simt/simulate.hpp"
#include "support.hpp"

namespace simt::cli {
namespace {

void writePrograms(std::ostream& out, const std::vector<Program>& programs) {
  for (const auto& p : programs) out << p.str() << '\n';
}

void requireSameCount(std::size_t programs, std::size_t sentences) {
  if (programs != sentences) {
    throw ParseError("program file has " + std::to_string(programs) + " lines, corpus has " +
                     std::to_string(sentences) + " pairs");
  }
}

}  // namespace

void registerSynth(CLI::App& app, ActionTable& actions) {
  struct Opts {
    std::string task = "finalToSecond";
    std::size_t vocab = 64;
    std::size_t minLen = 5;
    std::size_t maxLen = 15;
    std::size_t n = 1000;
    std::uint64_t firstIndex = 0;
    std::string prefix;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("synth", "Generate a synthetic parallel corpus with gold alignments");
  sub->add_option("--task", o->task, "Reordering rule")->check(CLI::IsMember({"monotone", "finalToSecond"}));
  sub->add_option("--vocab", o->vocab, "Vocabulary size")->check(CLI::PositiveNumber);
  sub->add_option("--min-len", o->minLen, "Minimum sentence length")->check(CLI::PositiveNumber);
  sub->add_option("--max-len", o->maxLen, "Maximum sentence length")->check(CLI::PositiveNumber);
  sub->add_option("--n", o->n, "Number of pairs")->check(CLI::PositiveNumber);
  sub->add_option("--first-index", o->firstIndex, "Index of the first pair; disjoint ranges give disjoint splits");
  sub->add_option("--out-prefix", o->prefix, "Writes PREFIX.src, .tgt, .align, .src.vocab, .tgt.vocab")->required();
  actions.emplace_back(sub, [o](Run& run) {
    if (o->minLen > o->maxLen) throw UsageError("--min-len exceeds --max-len");
    SyntheticTaskConfig cfg;
    cfg.vocabSize = o->vocab;
    cfg.minLen = o->minLen;
    cfg.maxLen = o->maxLen;
    cfg.reorderRule = parseReorderRule(o->task);
    cfg.seed = run.global().seed;
    writeCorpus(SyntheticTask(cfg).generate(o->n, o->firstIndex), o->prefix);
    run.setPrimaryOutput(o->prefix);
    return 0;
  });
}

void registerOracle(CLI::App& app, ActionTable& actions) {
  struct Opts {
    std::string src, tgt, align, out = "-", stats;
    bool noAnchor = false;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("oracle", "Generate oracle programs from word alignments");
  sub->add_option("--src", o->src, "Source sentences")->required()->check(kInputPath);
  sub->add_option("--tgt", o->tgt, "Target sentences")->required()->check(kInputPath);
  sub->add_option("--align", o->align, "Pharaoh alignments, one line per pair")->required()->check(kInputPath);
  sub->add_option("--out", o->out, "Program file");
  sub->add_option("--stats", o->stats, "Statistics TSV (default: stderr)");
  sub->add_flag("--no-anchor", o->noAnchor, "Skip first/last word anchoring");
  actions.emplace_back(sub, [o](Run& run) {
    const auto corpus = loadCorpus(run, o->src, o->tgt, o->align);
    OracleConfig cfg;
    cfg.anchorEndpoints = !o->noAnchor;
    const auto result = oracleCorpus(corpus.pairs, cfg, run.global().jobs);
    writePrograms(run.open(o->out), result.programs);
    std::ostream& stats = o->stats.empty() ? std::cerr : run.open(o->stats);
    const auto& s = result.stats;
    stats << "sentences\tinvalid\tanchored_links\tunaligned_targets\tmean_length\tDAL\tAL\tAP\n"
          << s.sentences << '\t' << s.invalidPrograms << '\t' << s.anchoredLinksAdded << '\t'
          << s.unalignedTargetWords << '\t' << fmt(s.meanProgramLength) << '\t' << fmt(s.meanDal) << '\t'
          << fmt(s.meanAl) << '\t' << fmt(s.meanAp) << '\n';
    run.setPrimaryOutput(o->out);
    return 0;
  });
}

void registerValidate(CLI::App& app, ActionTable& actions) {
  struct Opts {
    std::string programs = "-", src, tgt, out = "-";
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand(
      "validate", "Check programs for validity; without a corpus the programs' own counts are used");
  sub->add_option("--programs", o->programs, "Program file")->check(kInputPath);
  auto* src = sub->add_option("--src", o->src, "Source sentences")->check(kInputPath);
  auto* tgt = sub->add_option("--tgt", o->tgt, "Target sentences")->check(kInputPath);
  src->needs(tgt);
  tgt->needs(src);
  sub->add_option("--out", o->out, "Report");
  actions.emplace_back(sub, [o](Run& run) {
    const auto programs = run.readPrograms(o->programs);
    std::optional<LoadedCorpus> corpus;
    if (!o->src.empty()) {
      corpus = loadCorpus(run, o->src, o->tgt);
      requireSameCount(programs.size(), corpus->pairs.size());
    }
    std::size_t countValid = 0, boundaryValid = 0;
    for (std::size_t k = 0; k < programs.size(); ++k) {
      const auto& p = programs[k];
      const std::size_t srcLen = corpus ? corpus->pairs[k].source.size() : p.readCount();
      const std::size_t tgtLen = corpus ? corpus->pairs[k].target.size() : p.writeCount();
      const auto v = isValid(p, srcLen, tgtLen);
      countValid += v.countValid;
      boundaryValid += v.boundaryValid;
      if (!v.boundaryValid) {
        std::cerr << "line " << k + 1 << ": " << p.readCount() << " READs for " << srcLen << " source words, "
                  << p.writeCount() << " WRITEs for " << tgtLen << " target words";
        if (!p.empty()) std::cerr << ", starts with " << toChar(p[0]) << ", ends with " << toChar(p[p.size() - 1]);
        std::cerr << '\n';
      }
    }
    const double pct = programs.empty() ? 100.0 : 100.0 * static_cast<double>(boundaryValid) /
                                                      static_cast<double>(programs.size());
    run.open(o->out) << "programs\tcount_valid\tboundary_valid\tpercent_valid\n"
                     << programs.size() << '\t' << countValid << '\t' << boundaryValid << '\t' << fmt(pct, 2)
                     << '\n';
    run.setPrimaryOutput(o->out);
    return boundaryValid == programs.size() ? 0 : 1;
  });
}

void registerPerturb(CLI::App& app, ActionTable& actions) {
  struct Opts {
    std::string programs = "-", out = "-";
    double beta3 = 0.15;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("perturb", "Shuffle interior actions of each program (validity preserving)");
  sub->add_option("--programs", o->programs, "Program file")->check(kInputPath);
  sub->add_option("--beta3", o->beta3, "Per-position selection probability")->check(CLI::Range(0.0, 1.0));
  sub->add_option("--out", o->out, "Program file");
  actions.emplace_back(sub, [o](Run& run) {
    auto programs = run.readPrograms(o->programs);
    const std::uint64_t stream = deriveSeed(run.global().seed, "perturb");
    for (std::size_t k = 0; k < programs.size(); ++k) {
      Rng rng(deriveSeed(stream, static_cast<std::uint64_t>(k)));
      programs[k] = perturbProgValid(programs[k], o->beta3, rng);
    }
    writePrograms(run.open(o->out), programs);
    run.setPrimaryOutput(o->out);
    return 0;
  });
}

void registerWaitK(CLI::App& app, ActionTable& actions) {
  struct Opts {
    std::string k, src, tgt, out = "-";
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("waitk", "Wait-k programs for a corpus");
  sub->add_option("--k", o->k, "Positive integer, or 'inf' to read the whole source first")->required();
  sub->add_option("--src", o->src, "Source sentences")->required()->check(kInputPath);
  sub->add_option("--tgt", o->tgt, "Target sentences")->required()->check(kInputPath);
  sub->add_option("--out", o->out, "Program file");
  actions.emplace_back(sub, [o](Run& run) {
    std::optional<std::size_t> k;
    if (o->k != "inf") {
      std::size_t value = 0;
      const auto* end = o->k.data() + o->k.size();
      const auto [ptr, ec] = std::from_chars(o->k.data(), end, value);
      if (ec != std::errc() || ptr != end || value == 0) throw UsageError("--k must be a positive integer or 'inf'");
      k = value;
    }
    const auto corpus = loadCorpus(run, o->src, o->tgt);
    std::vector<Program> programs;
    programs.reserve(corpus.pairs.size());
    for (const auto& pair : corpus.pairs) {
      programs.push_back(waitK(k.value_or(pair.source.size()), pair.source.size(), pair.target.size()));
    }
    writePrograms(run.open(o->out), programs);
    run.setPrimaryOutput(o->out);
    return 0;
  });
}

void registerDelay(CLI::App& app, ActionTable& actions) {
  struct Opts {
    std::string programs = "-", out = "-";
    std::size_t d = 1;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("delay", "Add d steps of delay to each program");
  sub->add_option("--programs", o->programs, "Program file")->check(kInputPath);
  sub->add_option("--d", o->d, "Number of delay steps");
  sub->add_option("--out", o->out, "Program file");
  actions.emplace_back(sub, [o](Run& run) {
    auto programs = run.readPrograms(o->programs);
    for (std::size_t k = 0; k < programs.size(); ++k) {
      if (!isWellFormed(programs[k])) {
        throw ValidationFailure("line " + std::to_string(k + 1) + ": program is not boundary-valid");
      }
      programs[k] = addDelay(programs[k], o->d);
    }
    writePrograms(run.open(o->out), programs);
    run.setPrimaryOutput(o->out);
    return 0;
  });
}

void registerMetrics(CLI::App& app, ActionTable& actions) {
  struct Opts {
    std::string programs = "-", src, tgt, hyp, ref, out = "-";
    bool perSentence = false;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("metrics", "Delay metrics (and BLEU) as a TSV report");
  sub->add_option("--programs", o->programs, "Program file")->check(kInputPath);
  sub->add_option("--src", o->src, "Source sentences")->required()->check(kInputPath);
  sub->add_option("--tgt", o->tgt, "Sentences written by the programs")->required()->check(kInputPath);
  auto* hyp = sub->add_option("--hyp", o->hyp, "Hypotheses for BLEU")->check(kInputPath);
  auto* ref = sub->add_option("--ref", o->ref, "References for BLEU")->check(kInputPath);
  hyp->needs(ref);
  ref->needs(hyp);
  sub->add_option("--out", o->out, "TSV report");
  sub->add_flag("--per-sentence", o->perSentence, "One row per sentence before the corpus row");
  actions.emplace_back(sub, [o](Run& run) {
    const auto programs = run.readPrograms(o->programs);
    const auto corpus = loadCorpus(run, o->src, o->tgt);
    requireSameCount(programs.size(), corpus.pairs.size());
    const std::size_t n = programs.size();
    for (std::size_t k = 0; k < n; ++k) {
      const auto& pair = corpus.pairs[k];
      if (!isBoundaryValid(programs[k], pair.source.size(), pair.target.size())) {
        throw ValidationFailure("line " + std::to_string(k + 1) + ": program is not boundary-valid for (" +
                                std::to_string(pair.source.size()) + ", " + std::to_string(pair.target.size()) +
                                ")");
      }
    }
    std::vector<DelayReport> reports(n);
    parallelFor(n, run.global().jobs, [&](std::size_t k) {
      reports[k] = delayReport(programs[k], corpus.pairs[k].source.size(), corpus.pairs[k].target.size());
    });

    const bool withBleu = !o->hyp.empty();
    std::vector<std::vector<TokenId>> hyps, refs;
    if (withBleu) {
      Vocabulary shared;
      hyps = parseSentences(run.read(o->hyp), shared, VocabMode::Grow, "hypothesis");
      refs = parseSentences(run.read(o->ref), shared, VocabMode::Grow, "reference");
      if (hyps.size() != n || refs.size() != n) {
        throw ParseError("BLEU inputs must have one line per program (" + std::to_string(n) + ")");
      }
    }

    std::ostream& out = run.open(o->out);
    if (o->perSentence) out << "sentence\t";
    out << (withBleu ? "BLEU\t" : "") << "DAL\tAL\tAP\n";
    double ap = 0, al = 0, dal = 0;
    for (std::size_t k = 0; k < n; ++k) {
      ap += reports[k].ap;
      al += reports[k].al;
      dal += reports[k].dal;
      if (!o->perSentence) continue;
      out << k + 1 << '\t';
      if (withBleu) out << fmt(bleuFromStats(sentenceBleuStats(hyps[k], refs[k])).score, 2) << '\t';
      out << fmt(reports[k].dal) << '\t' << fmt(reports[k].al) << '\t' << fmt(reports[k].ap) << '\n';
    }
    const double denom = n == 0 ? 1.0 : static_cast<double>(n);
    if (o->perSentence) out << "corpus\t";
    if (withBleu) out << fmt(corpusBleu(hyps, refs).score, 2) << '\t';
    out << fmt(dal / denom) << '\t' << fmt(al / denom) << '\t' << fmt(ap / denom) << '\n';
    run.setPrimaryOutput(o->out);
    return 0;
  });
}

void registerTrace(CLI::App& app, ActionTable& actions) {
  struct Opts {
    std::string programs = "-", src, written, ref, out = "-";
    std::vector<std::size_t> lines;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("trace", "Render READ/WRITE chunk tables");
  sub->add_option("--programs", o->programs, "Program file")->check(kInputPath);
  sub->add_option("--src", o->src, "Source sentences")->required()->check(kInputPath);
  sub->add_option("--written", o->written, "Sentences written by the programs")->required()->check(kInputPath);
  sub->add_option("--ref", o->ref, "Reference translations shown under each table")->check(kInputPath);
  sub->add_option("--lines", o->lines, "1-based line numbers to render (default: all)")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  sub->add_option("--out", o->out, "Text report");
  actions.emplace_back(sub, [o](Run& run) {
    const auto programs = run.readPrograms(o->programs);
    const std::string sourceText = run.read(o->src);
    const std::string writtenText = run.read(o->written);
    const auto source = splitLines(sourceText);
    const auto written = splitLines(writtenText);
    std::string refText;
    std::vector<std::string_view> refs;
    if (!o->ref.empty()) {
      refText = run.read(o->ref);
      refs = splitLines(refText);
    }
    requireSameCount(programs.size(), source.size());
    requireSameCount(programs.size(), written.size());
    if (!o->ref.empty()) requireSameCount(programs.size(), refs.size());
    auto words = [](std::string_view line) {
      std::vector<std::string> w;
      for (auto t : splitTokens(line)) w.emplace_back(t);
      return w;
    };
    std::vector<std::size_t> selected = o->lines;
    if (selected.empty()) {
      for (std::size_t k = 1; k <= programs.size(); ++k) selected.push_back(k);
    }
    std::ostream& out = run.open(o->out);
    bool first = true;
    for (std::size_t line : selected) {
      if (line > programs.size()) throw UsageError("--lines: no line " + std::to_string(line));
      const std::size_t k = line - 1;
      const auto refWords = refs.empty() ? std::vector<std::string>{} : words(refs[k]);
      if (!first) out << '\n';
      first = false;
      out << "# " << line << '\n';
      const auto src = words(source[k]);
      const auto tgt = words(written[k]);
      if (refs.empty()) {
        out << renderTrace(programs[k], src, tgt);
      } else {
        out << renderTrace(programs[k], src, tgt, std::span<const std::string>(refWords));
      }
    }
    run.setPrimaryOutput(o->out);
    return 0;
  });
}

}  // namespace simt::cli
