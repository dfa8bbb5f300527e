#include <iostream>
#include <memory>

#include "simt/bundle.hpp"
#include "simt/error.hpp"
#include "simt/imitation.hpp"
#include "simt/metrics.hpp"
#include "support.hpp"

namespace simt::cli {
namespace {

struct SimFlags {
  std::string decoding = "greedy";
  double maxFactor = 2.0;
  std::size_t maxSlack = 10;

  void add(CLI::App* sub) {
    sub->add_option("--decoding", decoding, "Token and action choice")->check(CLI::IsMember({"greedy", "sample"}));
    sub->add_option("--max-factor", maxFactor, "WRITE cap is floor(factor * |x|) + slack")
        ->check(CLI::PositiveNumber);
    sub->add_option("--max-slack", maxSlack, "WRITE cap slack");
  }

  SimConfig config() const {
    SimConfig cfg;
    cfg.maxTargetFactor = maxFactor;
    cfg.maxTargetSlack = maxSlack;
    cfg.decoding = parseDecoding(decoding);
    return cfg;
  }
};

// Dev/test pairs read against the vocabularies a bundle was trained with.
std::vector<TrainingExample> loadExamples(Run& run, const PolicyPair& pair, const std::string& src,
                                          const std::string& tgt, const std::string& align) {
  Vocabulary sv = pair.sourceVocab();
  Vocabulary tv = pair.targetVocab();
  const std::string s = run.read(src);
  const std::string t = run.read(tgt);
  auto pairs = parseParallel(s, t, sv, tv, VocabMode::Frozen);
  attachAlignments(pairs, run.read(align));
  return oracleExamples(pairs);
}

void writeHistory(std::ostream& out, const char* phase, const TrainResult& r) {
  for (const auto& e : r.history) {
    out << phase << '\t' << e.epoch << '\t' << fmt(e.trainProgrammerLoss, 6) << '\t'
        << fmt(e.trainInterpreterLoss, 6) << '\t' << fmt(e.devProgrammerPerplexity, 6) << '\t'
        << fmt(e.devInterpreterPerplexity, 6) << '\t' << e.programmerRate << '\t' << e.interpreterRate << '\n';
  }
}

}  // namespace

void registerSimulate(CLI::App& app, ActionTable& actions) {
  struct Opts {
    std::string bundle, src, programs, out = "-", hypOut, programsOut;
    SimFlags sim;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("simulate", "Translate with trained policies");
  sub->add_option("--bundle", o->bundle, "Policy bundle")->required()->check(CLI::ExistingFile);
  sub->add_option("--src", o->src, "Source sentences")->required()->check(kInputPath);
  sub->add_option("--programs", o->programs, "Execute these programs instead of the learned programmer")
      ->check(kInputPath);
  sub->add_option("--out", o->out, "Transcript TSV: program, hypothesis, DAL, AL, AP, termination");
  sub->add_option("--hyp-out", o->hypOut, "Hypotheses, one per line");
  sub->add_option("--programs-out", o->programsOut, "Executed programs, one per line");
  o->sim.add(sub);
  actions.emplace_back(sub, [o](Run& run) {
    const PolicyPair pair = deserializeBundle(run.read(o->bundle));
    Vocabulary sv = pair.sourceVocab();
    const auto sources = parseSentences(run.read(o->src), sv, VocabMode::Frozen, "source");
    std::vector<Program> given;
    if (!o->programs.empty()) {
      given = run.readPrograms(o->programs);
      if (given.size() != sources.size()) {
        throw ParseError("program file has " + std::to_string(given.size()) + " lines, source has " +
                         std::to_string(sources.size()));
      }
    }
    const SimConfig cfg = o->sim.config();
    const std::uint64_t stream = deriveSeed(run.global().seed, "sample");
    std::ostream& out = run.open(o->out);
    out << "program\thypothesis\tDAL\tAL\tAP\ttermination\n";
    std::ostream* hyps = o->hypOut.empty() ? nullptr : &run.open(o->hypOut);
    std::ostream* progs = o->programsOut.empty() ? nullptr : &run.open(o->programsOut);
    for (std::size_t k = 0; k < sources.size(); ++k) {
      LinearInterpreter interpreter(pair);
      Transcript tr;
      if (!given.empty()) {
        tr = playback(given[k], interpreter, sources[k]);
      } else {
        LinearProgrammer programmer(pair);
        Rng rng(deriveSeed(stream, static_cast<std::uint64_t>(k)));
        tr = runEpisode(programmer, interpreter, sources[k], cfg, &rng);
      }
      const std::string hyp = joinTokens(tr.hypothesis, pair.targetVocab());
      const auto d = delayReport(tr.program, sources[k].size(), tr.hypothesis.size());
      out << tr.program.str() << '\t' << hyp << '\t' << fmt(d.dal) << '\t' << fmt(d.al) << '\t' << fmt(d.ap) << '\t'
          << toString(tr.terminated) << '\n';
      if (hyps) *hyps << hyp << '\n';
      if (progs) *progs << tr.program.str() << '\n';
    }
    run.setPrimaryOutput(o->out);
    return 0;
  });
}

void registerTrain(CLI::App& app, ActionTable& actions) {
  struct Opts {
    std::string src, tgt, align, devSrc, devTgt, devAlign, out, history;
    double beta1 = 0.05, beta2 = 0.15, beta3 = 0.15, alpha = 0.001;
    std::size_t epochs = 20, warmStartK = 0, batchSize = 1, maxDecays = 4;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("train", "Imitation learning of programmer and interpreter from oracle programs");
  sub->add_option("--src", o->src, "Training source sentences")->required()->check(CLI::ExistingFile);
  sub->add_option("--tgt", o->tgt, "Training target sentences")->required()->check(CLI::ExistingFile);
  sub->add_option("--align", o->align, "Training alignments")->required()->check(CLI::ExistingFile);
  sub->add_option("--dev-src", o->devSrc, "Dev source sentences")->required()->check(CLI::ExistingFile);
  sub->add_option("--dev-tgt", o->devTgt, "Dev target sentences")->required()->check(CLI::ExistingFile);
  sub->add_option("--dev-align", o->devAlign, "Dev alignments")->required()->check(CLI::ExistingFile);
  sub->add_option("--out", o->out, "Policy bundle")->required();
  sub->add_option("--history", o->history, "Per-epoch TSV (default: stderr)");
  sub->add_option("--beta1", o->beta1, "Interpreter token sampling probability")->check(CLI::Range(0.0, 1.0));
  sub->add_option("--beta2", o->beta2, "Programmer action sampling probability")->check(CLI::Range(0.0, 1.0));
  sub->add_option("--beta3", o->beta3, "Executed program shuffle probability")->check(CLI::Range(0.0, 1.0));
  sub->add_option("--alpha", o->alpha, "Initial learning rate of both policies")->check(CLI::PositiveNumber);
  sub->add_option("--epochs", o->epochs, "Maximum number of epochs")->check(CLI::PositiveNumber);
  sub->add_option("--max-decays", o->maxDecays, "Stop at this many learning-rate halvings")
      ->check(CLI::PositiveNumber);
  sub->add_option("--batch-size", o->batchSize, "Examples per update")->check(CLI::PositiveNumber);
  sub->add_option("--warm-start-k", o->warmStartK, "First clone wait-k programs without sampling (0: off)");
  actions.emplace_back(sub, [o](Run& run) {
    ParallelCorpus corpus;
    {
      const std::string s = run.read(o->src);
      const std::string t = run.read(o->tgt);
      corpus.pairs = parseParallel(s, t, corpus.sourceVocab, corpus.targetVocab);
      attachAlignments(corpus.pairs, run.read(o->align));
    }
    const TrainingSet trainSet = oracleTrainingSet(corpus);
    std::vector<TrainingExample> dev;
    {
      Vocabulary sv = corpus.sourceVocab;
      Vocabulary tv = corpus.targetVocab;
      const std::string s = run.read(o->devSrc);
      const std::string t = run.read(o->devTgt);
      auto pairs = parseParallel(s, t, sv, tv, VocabMode::Frozen);
      attachAlignments(pairs, run.read(o->devAlign));
      dev = oracleExamples(pairs);
    }
    TrainConfig cfg;
    cfg.betas = {o->beta1, o->beta2, o->beta3};
    cfg.alphaInterpreter = o->alpha;
    cfg.alphaProgrammer = o->alpha;
    cfg.maxEpochs = o->epochs;
    cfg.maxDecays = o->maxDecays;
    cfg.batchSize = o->batchSize;
    cfg.seed = run.global().seed;

    std::ostream& history = o->history.empty() ? std::cerr : run.open(o->history);
    history << "phase\tepoch\ttrain_programmer_loss\ttrain_interpreter_loss\tdev_programmer_ppl\t"
               "dev_interpreter_ppl\tprogrammer_rate\tinterpreter_rate\n";
    if (o->warmStartK > 0) {
      const auto result = warmStartWaitK(trainSet, dev, o->warmStartK, cfg);
      writeHistory(history, "waitk", result.waitK);
      writeHistory(history, "finetune", result.finetune);
      saveBundle(result.finetune.pair, o->out);
    } else {
      const auto result = train(trainSet, dev, cfg);
      writeHistory(history, "train", result);
      saveBundle(result.pair, o->out);
    }
    run.setPrimaryOutput(o->out);
    return 0;
  });
}

void registerEvaluate(CLI::App& app, ActionTable& actions) {
  struct Opts {
    std::string bundle, src, tgt, align, out = "-";
    bool oracleAtTest = false;
    SimFlags sim;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("evaluate", "BLEU, delay and teacher-forced scores of a policy bundle");
  sub->add_option("--bundle", o->bundle, "Policy bundle")->required()->check(CLI::ExistingFile);
  sub->add_option("--src", o->src, "Source sentences")->required()->check(kInputPath);
  sub->add_option("--tgt", o->tgt, "Reference translations")->required()->check(kInputPath);
  sub->add_option("--align", o->align, "Alignments for the oracle programs")->required()->check(kInputPath);
  sub->add_flag("--oracle-at-test", o->oracleAtTest, "Execute the oracle programs instead of the programmer");
  sub->add_option("--out", o->out, "TSV report");
  o->sim.add(sub);
  actions.emplace_back(sub, [o](Run& run) {
    const PolicyPair pair = deserializeBundle(run.read(o->bundle));
    const auto dev = loadExamples(run, pair, o->src, o->tgt, o->align);
    EvalOptions options;
    options.sim = o->sim.config();
    options.mode = o->oracleAtTest ? EvalMode::OracleAtTest : EvalMode::Learned;
    options.jobs = run.global().jobs;
    options.seed = run.global().seed;
    const EvalReport r = evaluate(pair, dev, options);
    run.open(o->out) << "BLEU\tDAL\tAL\tAP\tprogrammer_accuracy\tinterpreter_accuracy\tprogrammer_ppl\t"
                        "interpreter_ppl\tsentences\teos_terminated\n"
                     << fmt(r.bleu, 2) << '\t' << fmt(r.dal) << '\t' << fmt(r.al) << '\t' << fmt(r.ap) << '\t'
                     << fmt(r.programmerAccuracy) << '\t' << fmt(r.interpreterAccuracy) << '\t'
                     << fmt(r.programmerPerplexity) << '\t' << fmt(r.interpreterPerplexity) << '\t' << r.sentences
                     << '\t' << r.eosTerminated << '\n';
    run.setPrimaryOutput(o->out);
    return 0;
  });
}

}  // namespace simt::cli
