#include "simt/simulate.hpp"

#include <cmath>
#include <numeric>

#include "simt/error.hpp"

namespace simt {

std::string_view toString(Termination t) {
  switch (t) {
    case Termination::Eos:
      return "eos";
    case Termination::StepCap:
      return "stepCap";
    case Termination::ProgramEnd:
      return "programEnd";
  }
  return "?";
}

std::string_view toString(Decoding d) { return d == Decoding::Greedy ? "greedy" : "sample"; }

Decoding parseDecoding(std::string_view text) {
  if (text == "greedy") return Decoding::Greedy;
  if (text == "sample") return Decoding::Sample;
  throw InvalidArgument("unknown decoding mode '" + std::string(text) + "'");
}

std::size_t SimConfig::writeCap(std::size_t srcLen) const {
  const double cap = std::floor(maxTargetFactor * static_cast<double>(srcLen)) + static_cast<double>(maxTargetSlack);
  return cap < 1.0 ? 1 : static_cast<std::size_t>(cap);
}

void checkDistribution(std::span<const double> dist, std::size_t size, const char* who) {
  if (dist.size() != size) {
    throw InvalidArgument(std::string(who) + " returned " + std::to_string(dist.size()) +
                          " probabilities, expected " + std::to_string(size));
  }
  double total = 0.0;
  for (double p : dist) {
    if (!std::isfinite(p) || p < 0.0) throw InvalidArgument(std::string(who) + " returned an invalid probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-6) {
    throw InvalidArgument(std::string(who) + " returned a distribution summing to " + std::to_string(total));
  }
}

namespace {

// Picks among allowed entries.  With no allowed mass, falls back to the
// lowest allowed index.
std::size_t choose(std::span<const double> dist, const std::vector<bool>& allowed, Decoding decoding, Rng* rng) {
  std::size_t best = dist.size();
  double bestMass = -1.0;
  double total = 0.0;
  for (std::size_t k = 0; k < dist.size(); ++k) {
    if (!allowed[k]) continue;
    total += dist[k];
    if (dist[k] > bestMass) {
      bestMass = dist[k];
      best = k;
    }
  }
  if (best == dist.size()) throw InvalidArgument("every choice is masked");
  if (decoding == Decoding::Greedy || total <= 0.0) return best;
  if (rng == nullptr) throw InvalidArgument("sampling requires a random generator");
  std::vector<double> masked(dist.begin(), dist.end());
  for (std::size_t k = 0; k < masked.size(); ++k) {
    if (!allowed[k]) masked[k] = 0.0;
  }
  return rng->categorical(masked);
}

}  // namespace

Transcript runEpisode(ProgrammerPolicy& programmer, InterpreterPolicy& interpreter, std::span<const TokenId> source,
                      const SimConfig& cfg, Rng* rng) {
  if (source.empty()) throw InvalidArgument("runEpisode needs a non-empty source");
  if (cfg.decoding == Decoding::Sample && rng == nullptr) {
    throw InvalidArgument("runEpisode: sampling requires a random generator");
  }
  programmer.reset();
  interpreter.reset();
  const std::size_t n = source.size();
  const std::size_t cap = cfg.writeCap(n);

  Transcript tr;
  std::vector<Action> actions;
  std::vector<TokenId>& hyp = tr.hypothesis;
  std::size_t i = 0;
  std::vector<bool> actionMask(kNumActions);
  std::vector<bool> tokenMask;

  while (true) {
    const std::size_t t = actions.size();
    const EpisodeView view{source.first(i), hyp, actions, i == n};
    const auto actionDist = programmer.actionDistribution(view);
    checkDistribution(actionDist, kNumActions, "programmer");

    const bool forceRead = t == 0 || (i < n && hyp.size() + 1 >= cap);
    const bool forceWrite = i == n;
    actionMask[0] = !forceWrite;
    actionMask[1] = !forceRead;
    const auto action = static_cast<Action>(choose(actionDist, actionMask, cfg.decoding, rng));

    if (action == Action::Read) {
      tr.steps.push_back({t, Action::Read, source[i]});
      actions.push_back(Action::Read);
      ++i;
      continue;
    }

    auto tokenDist = interpreter.tokenDistribution(view);
    if (tokenMask.size() != tokenDist.size()) tokenMask.assign(tokenDist.size(), true);
    if (tokenDist.size() <= static_cast<std::size_t>(Vocabulary::kEos) + 1) {
      throw InvalidArgument("interpreter vocabulary has no ordinary tokens");
    }
    checkDistribution(tokenDist, tokenMask.size(), "interpreter");
    tokenMask[Vocabulary::kUnk] = false;
    tokenMask[Vocabulary::kEos] = i == n && !actions.empty() && actions.back() == Action::Write;
    const auto token = static_cast<TokenId>(choose(tokenDist, tokenMask, cfg.decoding, rng));
    if (token == Vocabulary::kEos) {
      tr.terminated = Termination::Eos;
      break;
    }
    tr.steps.push_back({t, Action::Write, token});
    actions.push_back(Action::Write);
    hyp.push_back(token);
    if (hyp.size() >= cap) {
      tr.terminated = Termination::StepCap;
      break;
    }
  }
  tr.program = Program(std::move(actions));
  return tr;
}

Transcript playback(const Program& program, InterpreterPolicy& interpreter, std::span<const TokenId> source) {
  if (program.readCount() != source.size()) {
    throw InvalidArgument("playback: program reads " + std::to_string(program.readCount()) +
                          " tokens but the source has " + std::to_string(source.size()));
  }
  if (!isWellFormed(program)) {
    throw InvalidArgument("playback: program '" + program.str() + "' is not boundary-valid");
  }
  interpreter.reset();
  Transcript tr;
  tr.terminated = Termination::ProgramEnd;
  std::vector<Action> actions;
  std::size_t i = 0;
  std::vector<bool> tokenMask;
  for (std::size_t t = 0; t < program.size(); ++t) {
    if (program[t] == Action::Read) {
      tr.steps.push_back({t, Action::Read, source[i]});
      ++i;
    } else {
      const EpisodeView view{source.first(i), tr.hypothesis, actions, i == source.size()};
      const auto dist = interpreter.tokenDistribution(view);
      if (tokenMask.size() != dist.size()) tokenMask.assign(dist.size(), true);
      checkDistribution(dist, tokenMask.size(), "interpreter");
      tokenMask[Vocabulary::kUnk] = false;
      tokenMask[Vocabulary::kEos] = false;
      const auto token = static_cast<TokenId>(choose(dist, tokenMask, Decoding::Greedy, nullptr));
      tr.steps.push_back({t, Action::Write, token});
      tr.hypothesis.push_back(token);
    }
    actions.push_back(program[t]);
  }
  tr.program = program;
  return tr;
}

ActionDistribution ScriptedProgrammer::actionDistribution(const EpisodeView& view) {
  const auto t = view.step();
  if (t < program_.size() && program_[t] == Action::Read) return {1.0, 0.0};
  return {0.0, 1.0};
}

WaitKProgrammer::WaitKProgrammer(std::size_t k) : k_(k) {
  if (k == 0) throw InvalidArgument("wait-k needs k >= 1");
}

ActionDistribution WaitKProgrammer::actionDistribution(const EpisodeView& view) {
  if (!view.sourceExhausted && view.reads() < view.writes() + k_) return {1.0, 0.0};
  return {0.0, 1.0};
}

ActionDistribution RandomProgrammer::actionDistribution(const EpisodeView&) {
  const double p = rng_.uniform();
  return {p, 1.0 - p};
}

namespace {

std::vector<double> pointMass(std::size_t vocabSize, TokenId token) {
  std::vector<double> d(vocabSize, 0.0);
  d.at(static_cast<std::size_t>(token)) = 1.0;
  return d;
}

}  // namespace

std::vector<double> TeacherInterpreter::tokenDistribution(const EpisodeView& view) {
  const auto j = view.writes();
  return pointMass(vocabSize_, j < reference_.size() ? reference_[j] : Vocabulary::kEos);
}

std::vector<double> EchoInterpreter::tokenDistribution(const EpisodeView& view) {
  const auto j = view.writes();
  return pointMass(vocabSize_, j < view.reads() ? view.source[j] : Vocabulary::kEos);
}

std::vector<double> RandomInterpreter::tokenDistribution(const EpisodeView&) {
  std::vector<double> d(vocabSize_);
  double rest = 0.0;
  for (std::size_t k = 0; k < d.size(); ++k) {
    d[k] = k == Vocabulary::kEos ? 0.0 : rng_.uniform();
    rest += d[k];
  }
  for (auto& p : d) p = (1.0 - eos_) * p / rest;
  d[Vocabulary::kEos] = eos_;
  return d;
}

}  // namespace simt
