#include "simt/imitation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "simt/error.hpp"
#include "simt/metrics.hpp"
#include "simt/parallel.hpp"

namespace simt {

std::vector<TrainingExample> oracleExamples(const std::vector<SentencePair>& pairs, const OracleConfig& cfg) {
  auto oracle = oracleCorpus(pairs, cfg);
  std::vector<TrainingExample> out;
  out.reserve(pairs.size());
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    out.push_back({pairs[k].source, pairs[k].target, std::move(oracle.programs[k])});
  }
  return out;
}

TrainingSet oracleTrainingSet(const ParallelCorpus& corpus, const OracleConfig& cfg) {
  return {oracleExamples(corpus.pairs, cfg), corpus.sourceVocab, corpus.targetVocab};
}

std::vector<TrainingExample> withWaitKPrograms(std::vector<TrainingExample> examples, std::size_t k) {
  for (auto& ex : examples) ex.program = waitK(k, ex.source.size(), ex.target.size());
  return examples;
}

double meanLengthRatio(std::span<const TrainingExample> examples) {
  if (examples.empty()) return 1.0;
  double sum = 0.0;
  for (const auto& ex : examples) {
    sum += static_cast<double>(ex.target.size()) / static_cast<double>(ex.source.size());
  }
  return sum / static_cast<double>(examples.size());
}

// ---------------------------------------------------------------------------

PolicyPair::PolicyPair(Vocabulary sourceVocab, Vocabulary targetVocab, double meanLengthRatio)
    : sourceVocab_(std::move(sourceVocab)),
      targetVocab_(std::move(targetVocab)),
      programmerFeatures_(sourceVocab_.size(), targetVocab_.size(), meanLengthRatio),
      interpreterFeatures_(sourceVocab_.size(), targetVocab_.size()),
      programmer_(programmerFeatures_.dimension(), kNumActions),
      interpreter_(interpreterFeatures_.dimension(), targetVocab_.size()) {}

ActionDistribution PolicyPair::actionDistribution(const EpisodeView& view) const {
  thread_local FeatureVector phi;
  thread_local std::vector<double> p;
  programmerFeatures_.extract(view, phi);
  programmer_.probabilities(phi, p);
  return {p[0], p[1]};
}

std::vector<double> PolicyPair::tokenDistribution(const EpisodeView& view) const {
  thread_local FeatureVector phi;
  interpreterFeatures_.extract(view, phi);
  return interpreter_.probabilities(phi);
}

// ---------------------------------------------------------------------------

namespace {

void requireValidExample(const TrainingExample& ex) {
  if (ex.source.empty() || ex.target.empty()) throw InvalidArgument("training example with empty side");
  if (!isBoundaryValid(ex.program, ex.source.size(), ex.target.size())) {
    throw InvalidArgument("training program '" + ex.program.str() + "' is not boundary-valid for lengths (" +
                          std::to_string(ex.source.size()) + ", " + std::to_string(ex.target.size()) + ")");
  }
}

std::vector<int> toSymbols(const std::vector<TokenId>& tokens) { return {tokens.begin(), tokens.end()}; }

}  // namespace

CoupledBatch buildCoupledBatch(const PolicyPair& pair, const TrainingExample& ex, const ScheduledSampling& betas,
                               bool includeEos, Rng& rng) {
  requireValidExample(ex);
  const std::span<const TokenId> x = ex.source;
  const std::span<const TokenId> y = ex.target;
  const auto& a = ex.program;
  const std::span<const Action> oracleActions = a.view();
  const std::size_t srcLen = x.size();
  const std::size_t tgtLen = y.size();

  // Oracle states (teacher forcing over the unperturbed x, y, a).
  std::vector<std::size_t> readsBefore(a.size() + 1, 0);
  std::vector<std::size_t> writeSteps;
  for (std::size_t t = 0; t < a.size(); ++t) {
    readsBefore[t + 1] = readsBefore[t] + (a[t] == Action::Read ? 1 : 0);
    if (a[t] == Action::Write) writeSteps.push_back(t);
  }

  CoupledBatch batch;

  // y' from the interpreter's teacher-forced predictive distribution.
  const PositionSampler tokenSampler = [&](std::size_t j) {
    const std::size_t t = writeSteps[j];
    const EpisodeView view{x.first(readsBefore[t]), y.first(j), oracleActions.first(t), readsBefore[t] == srcLen};
    return pair.tokenDistribution(view);
  };
  const auto ySymbols = toSymbols(ex.target);
  const auto yPrime = perturbSeq(std::span<const int>(ySymbols), betas.beta1, tokenSampler, rng);
  batch.perturbedTarget.assign(yPrime.begin(), yPrime.end());

  // a' from the programmer's teacher-forced predictive distribution.
  const PositionSampler actionSampler = [&](std::size_t t) {
    const std::size_t i = readsBefore[t];
    const EpisodeView view{x.first(i), y.first(t - i), oracleActions.first(t), i == srcLen};
    const auto d = pair.actionDistribution(view);
    return std::vector<double>(d.begin(), d.end());
  };
  batch.perturbedProgram = perturbSeq(a, betas.beta2, actionSampler, rng);

  // a'' keeps the multiset and the boundary actions of a.
  batch.executedProgram = perturbProgValid(a, betas.beta3, rng);

  const std::span<const TokenId> yp = batch.perturbedTarget;

  // Interpreter pass over (x, y', a'').  Its cached view of the written
  // prefix is y' itself, which the programmer pass below reads.
  const auto& exec = batch.executedProgram;
  const std::span<const Action> execActions = exec.view();
  std::size_t i = 0;
  std::size_t j = 0;
  batch.interpreterPositions.reserve(tgtLen);
  for (std::size_t t = 0; t < exec.size(); ++t) {
    if (exec[t] == Action::Read) {
      ++i;
      continue;
    }
    LabeledPosition pos;
    pos.step = t;
    pos.label = static_cast<std::size_t>(y[j]);
    pair.interpreterFeatures().extract({x.first(i), yp.first(j), execActions.first(t), i == srcLen}, pos.features);
    batch.interpreterPositions.push_back(std::move(pos));
    ++j;
  }
  if (includeEos) {
    LabeledPosition pos;
    pos.step = exec.size();
    pos.label = static_cast<std::size_t>(Vocabulary::kEos);
    pair.interpreterFeatures().extract({x, yp, execActions, true}, pos.features);
    batch.eosPosition = std::move(pos);
  }

  // Programmer pass over a', labels from a.
  const auto& ap = batch.perturbedProgram;
  const std::span<const Action> apActions = ap.view();
  i = 0;
  j = 0;
  batch.programmerPositions.reserve(ap.size());
  for (std::size_t t = 0; t < ap.size(); ++t) {
    LabeledPosition pos;
    pos.step = t;
    pos.label = static_cast<std::size_t>(a[t]);
    const std::size_t ic = std::min(i, srcLen);
    const std::size_t jc = std::min(j, tgtLen);
    pair.programmerFeatures().extract({x.first(ic), yp.first(jc), apActions.first(t), ic == srcLen}, pos.features);
    batch.programmerPositions.push_back(std::move(pos));
    if (ap[t] == Action::Read) {
      ++i;
    } else {
      ++j;
    }
  }
  return batch;
}

double positionsLoss(const LinearSoftmax& model, std::span<const LabeledPosition> positions, SparseGradient* grad) {
  double total = 0.0;
  for (const auto& pos : positions) total += model.loss(pos.features, pos.label, grad);
  return total;
}

// ---------------------------------------------------------------------------

CoupledTrainer::CoupledTrainer(PolicyPair pair, TrainConfig cfg)
    : pair_(std::move(pair)),
      cfg_(cfg),
      programmerOpt_(pair_.programmer()),
      interpreterOpt_(pair_.interpreter()),
      programmerGrad_(pair_.programmer().features(), pair_.programmer().classes()),
      interpreterGrad_(pair_.interpreter().features(), pair_.interpreter().classes()),
      programmerRate_(cfg.alphaProgrammer),
      interpreterRate_(cfg.alphaInterpreter) {
  if (cfg_.batchSize == 0) throw InvalidArgument("batch size must be positive");
  auto checkBeta = [](double b) {
    if (!(b >= 0.0 && b <= 1.0)) throw InvalidArgument("scheduled sampling probabilities must lie in [0, 1]");
  };
  checkBeta(cfg_.betas.beta1);
  checkBeta(cfg_.betas.beta2);
  checkBeta(cfg_.betas.beta3);
  if (!(cfg_.alphaProgrammer > 0.0) || !(cfg_.alphaInterpreter > 0.0)) {
    throw InvalidArgument("learning rates must be positive");
  }
}

StepLosses CoupledTrainer::cloneStep(const TrainingExample& example, Rng& rng) {
  const auto batch = buildCoupledBatch(pair_, example, cfg_.betas, cfg_.trainEos, rng);
  StepLosses losses;
  losses.interpreter = positionsLoss(pair_.interpreter(), batch.interpreterPositions, &interpreterGrad_);
  losses.interpreterPositions = batch.interpreterPositions.size();
  if (batch.eosPosition) {
    losses.interpreter += pair_.interpreter().loss(batch.eosPosition->features, batch.eosPosition->label, &interpreterGrad_);
    ++losses.interpreterPositions;
  }
  losses.programmer = positionsLoss(pair_.programmer(), batch.programmerPositions, &programmerGrad_);
  losses.programmerPositions = batch.programmerPositions.size();
  if (!std::isfinite(losses.interpreter) || !std::isfinite(losses.programmer)) {
    throw TrainingDiverged("non-finite loss (programmer " + std::to_string(losses.programmer) + ", interpreter " +
                           std::to_string(losses.interpreter) + ")");
  }
  if (++pending_ >= cfg_.batchSize) flush();
  return losses;
}

void CoupledTrainer::flush() {
  if (pending_ == 0) return;
  if (pending_ > 1) {
    interpreterGrad_.scale(1.0 / static_cast<double>(pending_));
    programmerGrad_.scale(1.0 / static_cast<double>(pending_));
  }
  interpreterOpt_.step(pair_.interpreter(), interpreterGrad_, interpreterRate_);
  programmerOpt_.step(pair_.programmer(), programmerGrad_, programmerRate_);
  interpreterGrad_.clear();
  programmerGrad_.clear();
  pending_ = 0;
}

// ---------------------------------------------------------------------------

namespace {

struct ScoreAccumulator {
  double programmerNll = 0.0;
  double interpreterNll = 0.0;
  std::size_t programmerCount = 0;
  std::size_t interpreterCount = 0;
  std::size_t programmerCorrect = 0;
  std::size_t interpreterCorrect = 0;

  void addProgrammer(std::span<const double> p, std::size_t label) {
    programmerNll -= std::log(std::max(p[label], 1e-12));
    programmerCorrect += static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin()) == label;
    ++programmerCount;
  }
  void addInterpreter(std::span<const double> p, std::size_t label) {
    interpreterNll -= std::log(std::max(p[label], 1e-12));
    interpreterCorrect += static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin()) == label;
    ++interpreterCount;
  }
  void merge(const ScoreAccumulator& o) {
    programmerNll += o.programmerNll;
    interpreterNll += o.interpreterNll;
    programmerCount += o.programmerCount;
    interpreterCount += o.interpreterCount;
    programmerCorrect += o.programmerCorrect;
    interpreterCorrect += o.interpreterCorrect;
  }
  TeacherForcedScores scores() const {
    auto ratio = [](double a, std::size_t n) { return n == 0 ? 0.0 : a / static_cast<double>(n); };
    return {std::exp(ratio(programmerNll, programmerCount)), std::exp(ratio(interpreterNll, interpreterCount)),
            ratio(static_cast<double>(programmerCorrect), programmerCount),
            ratio(static_cast<double>(interpreterCorrect), interpreterCount)};
  }
};

// Teacher-forced pass over (x, y, a) with arbitrary policies.
void scoreExample(ProgrammerPolicy& programmer, InterpreterPolicy& interpreter, const TrainingExample& ex,
                  bool includeEos, ScoreAccumulator& acc) {
  const std::span<const TokenId> x = ex.source;
  const std::span<const TokenId> y = ex.target;
  const std::span<const Action> a = ex.program.view();
  programmer.reset();
  interpreter.reset();
  std::size_t i = 0;
  std::size_t j = 0;
  for (std::size_t t = 0; t < a.size(); ++t) {
    const EpisodeView view{x.first(i), y.first(j), a.first(t), i == x.size()};
    const auto pa = programmer.actionDistribution(view);
    acc.addProgrammer(pa, static_cast<std::size_t>(a[t]));
    if (a[t] == Action::Read) {
      ++i;
    } else {
      const auto py = interpreter.tokenDistribution(view);
      acc.addInterpreter(py, static_cast<std::size_t>(y[j]));
      ++j;
    }
  }
  if (includeEos) {
    const auto py = interpreter.tokenDistribution({x, y, a, true});
    acc.addInterpreter(py, static_cast<std::size_t>(Vocabulary::kEos));
  }
}

ScoreAccumulator linearScores(const PolicyPair& pair, std::span<const TrainingExample> examples, bool includeEos,
                              std::size_t jobs) {
  std::vector<ScoreAccumulator> parts(examples.size());
  parallelFor(examples.size(), jobs, [&](std::size_t k) {
    LinearProgrammer programmer(pair);
    LinearInterpreter interpreter(pair);
    scoreExample(programmer, interpreter, examples[k], includeEos, parts[k]);
  });
  ScoreAccumulator total;
  for (const auto& p : parts) total.merge(p);
  return total;
}

}  // namespace

TeacherForcedScores teacherForcedScores(const PolicyPair& pair, std::span<const TrainingExample> examples,
                                        bool includeEos) {
  for (const auto& ex : examples) requireValidExample(ex);
  return linearScores(pair, examples, includeEos, 1).scores();
}

// ---------------------------------------------------------------------------

TrainResult train(PolicyPair initial, std::span<const TrainingExample> trainSet,
                  std::span<const TrainingExample> devSet, const TrainConfig& cfg) {
  if (trainSet.empty() || devSet.empty()) throw InvalidArgument("train needs non-empty training and dev sets");
  for (const auto& ex : trainSet) requireValidExample(ex);
  for (const auto& ex : devSet) requireValidExample(ex);

  Rng rng(deriveSeed(cfg.seed, "train"));
  CoupledTrainer trainer(std::move(initial), cfg);

  TrainResult result{trainer.pair(), {}, 0, 0, "epoch cap"};
  const auto initialScores = teacherForcedScores(trainer.pair(), devSet, cfg.trainEos);
  double prevProgrammer = initialScores.programmerPerplexity;
  double prevInterpreter = initialScores.interpreterPerplexity;
  double bestProgrammer = prevProgrammer;
  double bestInterpreter = prevInterpreter;
  std::size_t programmerDecays = 0;
  std::size_t interpreterDecays = 0;

  std::vector<std::size_t> order(trainSet.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  for (std::size_t epoch = 1; epoch <= cfg.maxEpochs; ++epoch) {
    rng.shuffle(order.begin(), order.end());
    double progLoss = 0.0;
    double intpLoss = 0.0;
    std::size_t progCount = 0;
    std::size_t intpCount = 0;
    for (auto k : order) {
      const auto l = trainer.cloneStep(trainSet[k], rng);
      progLoss += l.programmer;
      intpLoss += l.interpreter;
      progCount += l.programmerPositions;
      intpCount += l.interpreterPositions;
    }
    trainer.flush();
    if (!trainer.pair().allFinite()) {
      throw TrainingDiverged("non-finite parameters after epoch " + std::to_string(epoch));
    }

    const auto dev = teacherForcedScores(trainer.pair(), devSet, cfg.trainEos);
    if (!std::isfinite(dev.programmerPerplexity) || !std::isfinite(dev.interpreterPerplexity)) {
      throw TrainingDiverged("non-finite dev perplexity after epoch " + std::to_string(epoch));
    }
    if (dev.programmerPerplexity > prevProgrammer) {
      ++programmerDecays;
      trainer.setProgrammerRate(trainer.programmerRate() / 2);
    }
    if (dev.interpreterPerplexity > prevInterpreter) {
      ++interpreterDecays;
      trainer.setInterpreterRate(trainer.interpreterRate() / 2);
    }
    prevProgrammer = dev.programmerPerplexity;
    prevInterpreter = dev.interpreterPerplexity;

    if (dev.programmerPerplexity < bestProgrammer || result.bestProgrammerEpoch == 0) {
      bestProgrammer = dev.programmerPerplexity;
      result.bestProgrammerEpoch = epoch;
      result.pair.programmer() = trainer.pair().programmer();
    }
    if (dev.interpreterPerplexity < bestInterpreter || result.bestInterpreterEpoch == 0) {
      bestInterpreter = dev.interpreterPerplexity;
      result.bestInterpreterEpoch = epoch;
      result.pair.interpreter() = trainer.pair().interpreter();
    }

    result.history.push_back({epoch, progCount ? progLoss / static_cast<double>(progCount) : 0.0,
                              intpCount ? intpLoss / static_cast<double>(intpCount) : 0.0, dev.programmerPerplexity,
                              dev.interpreterPerplexity, trainer.programmerRate(), trainer.interpreterRate(),
                              programmerDecays, interpreterDecays});

    if (programmerDecays >= cfg.maxDecays || interpreterDecays >= cfg.maxDecays) {
      result.stopReason = "learning-rate decay limit";
      break;
    }
  }
  return result;
}

TrainResult train(const TrainingSet& trainSet, std::span<const TrainingExample> devSet, const TrainConfig& cfg) {
  PolicyPair initial(trainSet.sourceVocab, trainSet.targetVocab, meanLengthRatio(trainSet.examples));
  return train(std::move(initial), trainSet.examples, devSet, cfg);
}

WarmStartResult warmStartWaitK(const TrainingSet& trainSet, std::span<const TrainingExample> devSet, std::size_t k,
                               const TrainConfig& cfg) {
  if (k == 0) throw InvalidArgument("warm start needs k >= 1");
  const auto waitTrain = withWaitKPrograms(trainSet.examples, k);
  const auto waitDev = withWaitKPrograms({devSet.begin(), devSet.end()}, k);
  TrainConfig cloneCfg = cfg;
  cloneCfg.betas = ScheduledSampling::none();
  PolicyPair initial(trainSet.sourceVocab, trainSet.targetVocab, meanLengthRatio(trainSet.examples));
  auto phase1 = train(std::move(initial), waitTrain, waitDev, cloneCfg);
  TrainConfig finetuneCfg = cfg;
  finetuneCfg.seed = deriveSeed(cfg.seed, "finetune");
  auto phase2 = train(phase1.pair, trainSet.examples, devSet, finetuneCfg);
  return {std::move(phase1), std::move(phase2)};
}

// ---------------------------------------------------------------------------

EvalReport evaluatePolicies(const ProgrammerFactory& makeProgrammer, const InterpreterFactory& makeInterpreter,
                            std::span<const TrainingExample> devSet, const EvalOptions& options) {
  if (devSet.empty()) throw InvalidArgument("evaluate needs a non-empty dev set");
  struct Item {
    Transcript transcript;
    DelayReport delay;
    ScoreAccumulator scores;
  };
  std::vector<Item> items(devSet.size());
  parallelFor(devSet.size(), options.jobs, [&](std::size_t k) {
    const auto& ex = devSet[k];
    requireValidExample(ex);
    auto interpreter = makeInterpreter(ex);
    auto& item = items[k];
    if (options.mode == EvalMode::OracleAtTest) {
      item.transcript = playback(ex.program, *interpreter, ex.source);
    } else {
      auto programmer = makeProgrammer(ex);
      Rng rng(deriveSeed(deriveSeed(options.seed, "sample"), static_cast<std::uint64_t>(k)));
      item.transcript = runEpisode(*programmer, *interpreter, ex.source, options.sim, &rng);
    }
    item.delay = delayReport(item.transcript.program, ex.source.size(), item.transcript.hypothesis.size());
    auto scoringProgrammer = makeProgrammer(ex);
    scoreExample(*scoringProgrammer, *interpreter, ex, options.includeEos, item.scores);
  });

  EvalReport report;
  report.sentences = devSet.size();
  std::vector<std::vector<TokenId>> hyps;
  std::vector<std::vector<TokenId>> refs;
  ScoreAccumulator scores;
  for (std::size_t k = 0; k < items.size(); ++k) {
    const auto& item = items[k];
    hyps.push_back(item.transcript.hypothesis);
    refs.push_back(devSet[k].target);
    report.ap += item.delay.ap;
    report.al += item.delay.al;
    report.dal += item.delay.dal;
    report.eosTerminated += item.transcript.terminated == Termination::Eos;
    scores.merge(item.scores);
  }
  const double n = static_cast<double>(devSet.size());
  report.ap /= n;
  report.al /= n;
  report.dal /= n;
  report.bleu = corpusBleu(hyps, refs).score;
  const auto s = scores.scores();
  report.programmerAccuracy = s.programmerAccuracy;
  report.interpreterAccuracy = s.interpreterAccuracy;
  report.programmerPerplexity = s.programmerPerplexity;
  report.interpreterPerplexity = s.interpreterPerplexity;
  return report;
}

EvalReport evaluate(const PolicyPair& pair, std::span<const TrainingExample> devSet, const EvalOptions& options) {
  return evaluatePolicies([&pair](const TrainingExample&) { return std::make_unique<LinearProgrammer>(pair); },
                          [&pair](const TrainingExample&) { return std::make_unique<LinearInterpreter>(pair); },
                          devSet, options);
}

}  // namespace simt
