#include "simt/program.hpp"

#include <algorithm>

#include "simt/error.hpp"

namespace simt {

Program Program::parse(std::string_view text) {
  std::vector<Action> actions;
  actions.reserve(text.size());
  for (char c : text) {
    if (c == 'R') {
      actions.push_back(Action::Read);
    } else if (c == 'W') {
      actions.push_back(Action::Write);
    } else if (c == '\r' || c == ' ' || c == '\t') {
      continue;
    } else {
      throw ParseError("invalid action character '" + std::string(1, c) + "' in program '" +
                       std::string(text) + "'");
    }
  }
  return Program(std::move(actions));
}

std::string Program::str() const {
  std::string s;
  s.reserve(actions_.size());
  for (auto a : actions_) s.push_back(toChar(a));
  return s;
}

std::size_t Program::readCount() const {
  return static_cast<std::size_t>(std::count(actions_.begin(), actions_.end(), Action::Read));
}

std::size_t Program::writeCount() const { return actions_.size() - readCount(); }

ValidityReport isValid(const Program& p, std::size_t srcLen, std::size_t tgtLen) {
  ValidityReport r;
  if (p.empty()) return r;
  r.readCount = p.readCount();
  r.writeCount = p.size() - r.readCount;
  r.firstAction = p.actions().front();
  r.lastAction = p.actions().back();
  r.countValid = r.readCount == srcLen && r.writeCount == tgtLen;
  r.boundaryValid = r.countValid && r.firstAction == Action::Read && r.lastAction == Action::Write;
  return r;
}

bool isWellFormed(const Program& p) {
  return !p.empty() && isBoundaryValid(p, p.readCount(), p.writeCount());
}

std::vector<std::size_t> gVector(const Program& p) {
  std::vector<std::size_t> g;
  std::size_t reads = 0;
  for (auto a : p.actions()) {
    if (a == Action::Read) {
      ++reads;
    } else {
      g.push_back(reads);
    }
  }
  return g;
}

Program waitK(std::size_t k, std::size_t srcLen, std::size_t tgtLen) {
  if (k == 0) throw InvalidArgument("wait-k needs k >= 1 (k = 0 would start with WRITE)");
  if (srcLen == 0 || tgtLen == 0) throw InvalidArgument("wait-k needs non-empty source and target");
  std::vector<Action> actions;
  actions.reserve(srcLen + tgtLen);
  std::size_t reads = std::min(k, srcLen);
  std::size_t writes = 0;
  actions.insert(actions.end(), reads, Action::Read);
  // One WRITE is held back until the source is exhausted so the program
  // ends with WRITE even when the target is shorter than the source.
  while (reads < srcLen) {
    if (writes + 1 < tgtLen) {
      actions.push_back(Action::Write);
      ++writes;
    }
    actions.push_back(Action::Read);
    ++reads;
  }
  actions.insert(actions.end(), tgtLen - writes, Action::Write);
  return Program(std::move(actions));
}

Program addDelay(const Program& p, std::size_t d) {
  if (!isWellFormed(p)) {
    throw InvalidArgument("addDelay needs a boundary-valid program, got '" + p.str() + "'");
  }
  std::vector<Action> actions = p.actions();
  for (std::size_t step = 0; step < d; ++step) {
    const auto firstWrite = std::find(actions.begin(), actions.end(), Action::Write);
    const auto lastRead = std::find(actions.rbegin(), actions.rend(), Action::Read);
    // Fixpoint: every READ already precedes every WRITE.
    if (lastRead.base() <= firstWrite) break;
    actions.erase(std::prev(lastRead.base()));
    actions.insert(actions.begin(), Action::Read);
  }
  return Program(std::move(actions));
}

Program perturbProgValid(const Program& p, double beta3, Rng& rng) {
  if (p.size() < 3 || beta3 <= 0.0) return p;
  std::vector<std::size_t> selected;
  for (std::size_t t = 1; t + 1 < p.size(); ++t) {
    if (rng.bernoulli(beta3)) selected.push_back(t);
  }
  std::vector<Action> picked;
  picked.reserve(selected.size());
  for (auto t : selected) picked.push_back(p[t]);
  rng.shuffle(picked.begin(), picked.end());
  std::vector<Action> out = p.actions();
  for (std::size_t k = 0; k < selected.size(); ++k) out[selected[k]] = picked[k];
  return Program(std::move(out));
}

std::vector<int> perturbSeq(std::span<const int> groundTruth, double beta, const PositionSampler& sampler,
                            Rng& rng) {
  std::vector<int> out(groundTruth.begin(), groundTruth.end());
  if (beta <= 0.0) return out;
  for (std::size_t t = 0; t < out.size(); ++t) {
    if (!rng.bernoulli(beta)) continue;
    const auto dist = sampler(t);
    out[t] = static_cast<int>(rng.categorical(dist));
  }
  return out;
}

Program perturbSeq(const Program& groundTruth, double beta, const PositionSampler& sampler, Rng& rng) {
  std::vector<int> symbols;
  symbols.reserve(groundTruth.size());
  for (auto a : groundTruth.actions()) symbols.push_back(static_cast<int>(a));
  const auto perturbed = perturbSeq(std::span<const int>(symbols), beta, sampler, rng);
  std::vector<Action> actions;
  actions.reserve(perturbed.size());
  for (int s : perturbed) {
    if (s != 0 && s != 1) throw InvalidArgument("action sampler returned symbol " + std::to_string(s));
    actions.push_back(static_cast<Action>(s));
  }
  return Program(std::move(actions));
}

}  // namespace simt
