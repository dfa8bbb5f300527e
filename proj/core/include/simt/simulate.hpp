#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "simt/program.hpp"
#include "simt/rng.hpp"
#include "simt/vocabulary.hpp"

namespace simt {

// What a policy may see at step t: the revealed source prefix x_{<=i}, the
// emitted target prefix y_{<=j} and the actions taken so far.  The full
// source is never exposed; only whether it has been read to the end.
struct EpisodeView {
  std::span<const TokenId> source;
  std::span<const TokenId> target;
  std::span<const Action> actions;
  bool sourceExhausted = false;

  std::size_t reads() const { return source.size(); }
  std::size_t writes() const { return target.size(); }
  std::size_t step() const { return actions.size(); }
};

using ActionDistribution = std::array<double, kNumActions>;

// Chooses READ or WRITE.  Implementations may keep incremental memory
// between calls within an episode; reset() starts a new one.
class ProgrammerPolicy {
 public:
  virtual ~ProgrammerPolicy() = default;
  virtual void reset() {}
  virtual ActionDistribution actionDistribution(const EpisodeView& view) = 0;
};

// Produces the next target token on WRITE.  The distribution covers the whole
// target vocabulary, including Vocabulary::kEos.
class InterpreterPolicy {
 public:
  virtual ~InterpreterPolicy() = default;
  virtual void reset() {}
  virtual std::vector<double> tokenDistribution(const EpisodeView& view) = 0;
};

enum class Decoding { Greedy, Sample };
enum class Termination { Eos, StepCap, ProgramEnd };

std::string_view toString(Termination t);
std::string_view toString(Decoding d);
Decoding parseDecoding(std::string_view text);

struct SimConfig {
  double maxTargetFactor = 2.0;
  std::size_t maxTargetSlack = 10;
  Decoding decoding = Decoding::Greedy;

  // Maximum number of WRITEs for a source of the given length (at least 1).
  std::size_t writeCap(std::size_t srcLen) const;
};

struct TranscriptStep {
  std::size_t t = 0;
  Action action = Action::Read;
  // Source token revealed on READ, target token emitted on WRITE.
  TokenId token = Vocabulary::kUnk;
};

struct Transcript {
  Program program;
  std::vector<TokenId> hypothesis;
  std::vector<TranscriptStep> steps;
  Termination terminated = Termination::Eos;
};

// Step-wise generation loop.  Masking keeps every transcript boundary-valid:
// READ is forced at t = 0 and whenever only one WRITE remains under the cap
// while source is unread; WRITE is forced once the source is exhausted; EOS
// is accepted only after the source is exhausted and the previous action
// was a WRITE; <unk> is never emitted.  `rng` is required for sampling.
Transcript runEpisode(ProgrammerPolicy& programmer, InterpreterPolicy& interpreter,
                      std::span<const TokenId> source, const SimConfig& cfg = {}, Rng* rng = nullptr);

// Executes `program` verbatim; the interpreter only chooses tokens (greedy,
// EOS and <unk> masked).  The program's READ count must equal |source|.
Transcript playback(const Program& program, InterpreterPolicy& interpreter, std::span<const TokenId> source);

// Throws InvalidArgument unless `dist` has `size` finite non-negative entries
// summing to one within 1e-6.
void checkDistribution(std::span<const double> dist, std::size_t size, const char* who);

// Chunked READ/WRITE table: each column holds a run of READ tokens over the
// run of WRITE tokens that follows it.
std::string renderTrace(const Program& program, std::span<const std::string> source,
                        std::span<const std::string> written,
                        std::optional<std::span<const std::string>> reference = std::nullopt);

// --- scripted policies --------------------------------------------------

// Replays a fixed program; WRITE once the script runs out.
class ScriptedProgrammer : public ProgrammerPolicy {
 public:
  explicit ScriptedProgrammer(Program program) : program_(std::move(program)) {}
  ActionDistribution actionDistribution(const EpisodeView& view) override;

 private:
  Program program_;
};

// Online wait-k: READ while reads < writes + k, otherwise WRITE.
class WaitKProgrammer : public ProgrammerPolicy {
 public:
  explicit WaitKProgrammer(std::size_t k);
  ActionDistribution actionDistribution(const EpisodeView& view) override;

 private:
  std::size_t k_;
};

// Fixed READ probability at every step (1.0 = always READ).
class ConstantProgrammer : public ProgrammerPolicy {
 public:
  explicit ConstantProgrammer(double readProbability) : read_(readProbability) {}
  ActionDistribution actionDistribution(const EpisodeView&) override { return {read_, 1.0 - read_}; }

 private:
  double read_;
};

// Fresh random READ probability at every step.
class RandomProgrammer : public ProgrammerPolicy {
 public:
  explicit RandomProgrammer(std::uint64_t seed) : rng_(seed) {}
  ActionDistribution actionDistribution(const EpisodeView&) override;

 private:
  Rng rng_;
};

// Emits the reference token y_j, then EOS.
class TeacherInterpreter : public InterpreterPolicy {
 public:
  TeacherInterpreter(std::vector<TokenId> reference, std::size_t vocabSize)
      : reference_(std::move(reference)), vocabSize_(vocabSize) {}
  std::vector<double> tokenDistribution(const EpisodeView& view) override;

 private:
  std::vector<TokenId> reference_;
  std::size_t vocabSize_;
};

// Copies source token x_j when it has been read, EOS otherwise.  Source and
// target ids are used interchangeably.
class EchoInterpreter : public InterpreterPolicy {
 public:
  explicit EchoInterpreter(std::size_t vocabSize) : vocabSize_(vocabSize) {}
  std::vector<double> tokenDistribution(const EpisodeView& view) override;

 private:
  std::size_t vocabSize_;
};

// Random distribution over the vocabulary with a fixed EOS mass (0 = never).
class RandomInterpreter : public InterpreterPolicy {
 public:
  RandomInterpreter(std::size_t vocabSize, double eosMass, std::uint64_t seed)
      : vocabSize_(vocabSize), eos_(eosMass), rng_(seed) {}
  std::vector<double> tokenDistribution(const EpisodeView& view) override;

 private:
  std::size_t vocabSize_;
  double eos_;
  Rng rng_;
};

}  // namespace simt
