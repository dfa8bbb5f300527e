#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "simt/corpus.hpp"
#include "simt/features.hpp"
#include "simt/linear_softmax.hpp"
#include "simt/oracle.hpp"
#include "simt/program.hpp"
#include "simt/simulate.hpp"

namespace simt {

// (x, y, a): a sentence pair with the program the policies should imitate.
struct TrainingExample {
  std::vector<TokenId> source;
  std::vector<TokenId> target;
  Program program;
};

struct TrainingSet {
  std::vector<TrainingExample> examples;
  Vocabulary sourceVocab;
  Vocabulary targetVocab;
};

// Pairs each sentence with its anchored oracle program.  Every pair must
// carry an alignment.
std::vector<TrainingExample> oracleExamples(const std::vector<SentencePair>& pairs, const OracleConfig& cfg = {});
TrainingSet oracleTrainingSet(const ParallelCorpus& corpus, const OracleConfig& cfg = {});
// Same sentences, programs replaced by waitK(k, |x|, |y|).
std::vector<TrainingExample> withWaitKPrograms(std::vector<TrainingExample> examples, std::size_t k);
// Mean |y| / |x| over the examples (1.0 when empty).
double meanLengthRatio(std::span<const TrainingExample> examples);

// Programmer and interpreter as linear-softmax models over their feature
// maps, plus the vocabularies they were trained with.
class PolicyPair {
 public:
  PolicyPair(Vocabulary sourceVocab, Vocabulary targetVocab, double meanLengthRatio);

  const Vocabulary& sourceVocab() const { return sourceVocab_; }
  const Vocabulary& targetVocab() const { return targetVocab_; }
  double meanLengthRatio() const { return programmerFeatures_.meanLengthRatio(); }
  const ProgrammerFeatureMap& programmerFeatures() const { return programmerFeatures_; }
  const InterpreterFeatureMap& interpreterFeatures() const { return interpreterFeatures_; }

  LinearSoftmax& programmer() { return programmer_; }
  const LinearSoftmax& programmer() const { return programmer_; }
  LinearSoftmax& interpreter() { return interpreter_; }
  const LinearSoftmax& interpreter() const { return interpreter_; }

  ActionDistribution actionDistribution(const EpisodeView& view) const;
  std::vector<double> tokenDistribution(const EpisodeView& view) const;
  bool allFinite() const { return programmer_.allFinite() && interpreter_.allFinite(); }

 private:
  Vocabulary sourceVocab_;
  Vocabulary targetVocab_;
  ProgrammerFeatureMap programmerFeatures_;
  InterpreterFeatureMap interpreterFeatures_;
  LinearSoftmax programmer_;
  LinearSoftmax interpreter_;
};

class LinearProgrammer : public ProgrammerPolicy {
 public:
  explicit LinearProgrammer(const PolicyPair& pair) : pair_(pair) {}
  ActionDistribution actionDistribution(const EpisodeView& view) override { return pair_.actionDistribution(view); }

 private:
  const PolicyPair& pair_;
};

class LinearInterpreter : public InterpreterPolicy {
 public:
  explicit LinearInterpreter(const PolicyPair& pair) : pair_(pair) {}
  std::vector<double> tokenDistribution(const EpisodeView& view) override { return pair_.tokenDistribution(view); }

 private:
  const PolicyPair& pair_;
};

// Scheduled-sampling probabilities for y' (interpreter tokens), a'
// (programmer actions) and a'' (executed program).
struct ScheduledSampling {
  double beta1 = 0.05;
  double beta2 = 0.15;
  double beta3 = 0.15;

  static ScheduledSampling none() { return {0.0, 0.0, 0.0}; }
};

struct TrainConfig {
  ScheduledSampling betas;
  double alphaInterpreter = 0.001;
  double alphaProgrammer = 0.001;
  // Training stops when either model's rate has been halved this many times.
  std::size_t maxDecays = 4;
  std::size_t maxEpochs = 20;
  // Examples per parameter update; gradients are averaged over the batch.
  std::size_t batchSize = 1;
  // Also train the interpreter to emit EOS after the last target token.
  bool trainEos = true;
  std::uint64_t seed = 1;
};

struct LabeledPosition {
  FeatureVector features;
  std::size_t label = 0;
  std::size_t step = 0;
};

// Everything one coupled update consumes.  Inputs are perturbed, labels are
// never: interpreter labels are y_j and programmer labels are a_t.
struct CoupledBatch {
  std::vector<TokenId> perturbedTarget;  // y'
  Program perturbedProgram;              // a'
  Program executedProgram;               // a''
  // One position per WRITE of a'', in order.
  std::vector<LabeledPosition> interpreterPositions;
  // Predict EOS after the full target under a''.
  std::optional<LabeledPosition> eosPosition;
  // One position per step of a', conditioned on a'_{<t}, x and the
  // interpreter's cached y'.
  std::vector<LabeledPosition> programmerPositions;
};

CoupledBatch buildCoupledBatch(const PolicyPair& pair, const TrainingExample& example, const ScheduledSampling& betas,
                               bool includeEos, Rng& rng);

// Sum of -log p(label) over the positions; accumulates the gradient when
// `grad` is non-null.
double positionsLoss(const LinearSoftmax& model, std::span<const LabeledPosition> positions,
                     SparseGradient* grad = nullptr);

struct StepLosses {
  double programmer = 0.0;
  double interpreter = 0.0;
  std::size_t programmerPositions = 0;
  std::size_t interpreterPositions = 0;
};

// Owns the policies being trained and their optimizer state.
class CoupledTrainer {
 public:
  CoupledTrainer(PolicyPair pair, TrainConfig cfg);

  // One coupled scheduled-sampling update on (x, y, a).  Throws before any
  // update when a is not boundary-valid for (|x|, |y|).
  StepLosses cloneStep(const TrainingExample& example, Rng& rng);
  // Applies a partially filled batch.
  void flush();

  const PolicyPair& pair() const { return pair_; }
  PolicyPair& pair() { return pair_; }
  const TrainConfig& config() const { return cfg_; }
  double programmerRate() const { return programmerRate_; }
  double interpreterRate() const { return interpreterRate_; }
  void setProgrammerRate(double r) { programmerRate_ = r; }
  void setInterpreterRate(double r) { interpreterRate_ = r; }

 private:
  PolicyPair pair_;
  TrainConfig cfg_;
  AdamOptimizer programmerOpt_;
  AdamOptimizer interpreterOpt_;
  SparseGradient programmerGrad_;
  SparseGradient interpreterGrad_;
  std::size_t pending_ = 0;
  double programmerRate_;
  double interpreterRate_;
};

struct TeacherForcedScores {
  double programmerPerplexity = 0.0;
  double interpreterPerplexity = 0.0;
  double programmerAccuracy = 0.0;
  double interpreterAccuracy = 0.0;
};

// Teacher-forced (no perturbation) perplexity and argmax accuracy of both
// policies on the examples' programs.
TeacherForcedScores teacherForcedScores(const PolicyPair& pair, std::span<const TrainingExample> examples,
                                        bool includeEos = true);

struct EpochRecord {
  std::size_t epoch = 0;
  double trainProgrammerLoss = 0.0;   // mean per position
  double trainInterpreterLoss = 0.0;  // mean per position
  double devProgrammerPerplexity = 0.0;
  double devInterpreterPerplexity = 0.0;
  double programmerRate = 0.0;
  double interpreterRate = 0.0;
  std::size_t programmerDecays = 0;
  std::size_t interpreterDecays = 0;
};

struct TrainResult {
  // Each policy taken from its best dev-perplexity epoch.
  PolicyPair pair;
  std::vector<EpochRecord> history;
  std::size_t bestProgrammerEpoch = 0;
  std::size_t bestInterpreterEpoch = 0;
  std::string stopReason;
};

// Epochs over seeded shuffles of `train`.  After each epoch each model's rate
// is halved when its dev perplexity increased; training stops at the
// maxDecays-th halving of either model or after maxEpochs.  Throws
// TrainingDiverged on a non-finite loss or weight.
TrainResult train(PolicyPair initial, std::span<const TrainingExample> trainSet,
                  std::span<const TrainingExample> devSet, const TrainConfig& cfg);
TrainResult train(const TrainingSet& trainSet, std::span<const TrainingExample> devSet, const TrainConfig& cfg);

struct WarmStartResult {
  TrainResult waitK;     // phase 1: cloned on wait-k programs, no perturbation
  TrainResult finetune;  // phase 2: oracle programs with coupled scheduled sampling
};

// `trainSet` and `devSet` carry oracle programs; phase 1 swaps in wait-k.
WarmStartResult warmStartWaitK(const TrainingSet& trainSet, std::span<const TrainingExample> devSet, std::size_t k,
                               const TrainConfig& cfg);

struct EvalReport {
  double bleu = 0.0;
  double ap = 0.0;
  double al = 0.0;
  double dal = 0.0;
  double programmerAccuracy = 0.0;
  double interpreterAccuracy = 0.0;
  double programmerPerplexity = 0.0;
  double interpreterPerplexity = 0.0;
  std::size_t sentences = 0;
  std::size_t eosTerminated = 0;
};

enum class EvalMode {
  Learned,       // programmer and interpreter run together
  OracleAtTest,  // the example's program is executed verbatim
};

struct EvalOptions {
  SimConfig sim;
  EvalMode mode = EvalMode::Learned;
  std::size_t jobs = 1;
  std::uint64_t seed = 1;
  bool includeEos = true;
};

using ProgrammerFactory = std::function<std::unique_ptr<ProgrammerPolicy>(const TrainingExample&)>;
using InterpreterFactory = std::function<std::unique_ptr<InterpreterPolicy>(const TrainingExample&)>;

// Runs one episode per example and aggregates corpus BLEU, mean AP/AL/DAL
// of the executed programs and the teacher-forced scores.
EvalReport evaluatePolicies(const ProgrammerFactory& programmer, const InterpreterFactory& interpreter,
                            std::span<const TrainingExample> devSet, const EvalOptions& options);
EvalReport evaluate(const PolicyPair& pair, std::span<const TrainingExample> devSet, const EvalOptions& options = {});

}  // namespace simt
