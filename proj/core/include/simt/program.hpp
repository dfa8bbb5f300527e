#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "simt/rng.hpp"

namespace simt {

enum class Action : unsigned char { Read = 0, Write = 1 };

inline constexpr std::size_t kNumActions = 2;

inline constexpr char toChar(Action a) { return a == Action::Read ? 'R' : 'W'; }

// A READ/WRITE action sequence.  Serialized as one character per action,
// e.g. "RWRRWW".
class Program {
 public:
  Program() = default;
  explicit Program(std::vector<Action> actions) : actions_(std::move(actions)) {}

  static Program parse(std::string_view text);
  std::string str() const;

  const std::vector<Action>& actions() const { return actions_; }
  std::span<const Action> view() const { return actions_; }
  std::size_t size() const { return actions_.size(); }
  bool empty() const { return actions_.empty(); }
  Action operator[](std::size_t t) const { return actions_[t]; }

  void push(Action a) { actions_.push_back(a); }

  std::size_t readCount() const;
  std::size_t writeCount() const;

  friend bool operator==(const Program&, const Program&) = default;

 private:
  std::vector<Action> actions_;
};

struct ValidityReport {
  // READ count equals the source length and WRITE count the target length.
  bool countValid = false;
  // countValid, and the program starts with READ and ends with WRITE.
  bool boundaryValid = false;
  std::size_t readCount = 0;
  std::size_t writeCount = 0;
  Action firstAction = Action::Read;
  Action lastAction = Action::Read;
};

ValidityReport isValid(const Program& p, std::size_t srcLen, std::size_t tgtLen);
inline bool isBoundaryValid(const Program& p, std::size_t srcLen, std::size_t tgtLen) {
  return isValid(p, srcLen, tgtLen).boundaryValid;
}
// Boundary validity with lengths taken from the program's own counts.
bool isWellFormed(const Program& p);

// g[j-1] = number of READs before the j-th WRITE.  Non-decreasing.
std::vector<std::size_t> gVector(const Program& p);

// Wait-k: min(k, srcLen) READs, then alternate WRITE/READ until the source is
// exhausted, then WRITE until tgtLen WRITEs.  k >= srcLen is the read-all
// (k = infinity) policy.  k = 0 throws.
Program waitK(std::size_t k, std::size_t srcLen, std::size_t tgtLen);

// Repeats `d` times: drop the last READ, insert a READ at the front.  Stops
// silently once the program is R^m W^n.  Throws on non-boundary-valid input.
Program addDelay(const Program& p, std::size_t d);

// Selects every interior position with probability beta3 and uniformly
// permutes the actions at the selected positions.  The endpoints are never
// selected, so the action multiset and both boundary actions are preserved.
Program perturbProgValid(const Program& p, double beta3, Rng& rng);

// Position -> distribution over symbol ids [0, n).
using PositionSampler = std::function<std::vector<double>(std::size_t position)>;

// Replaces each position independently with probability beta by a draw from
// sampler(position).  The sampler is queried only for replaced positions; it
// must describe the teacher-forced distribution over the unperturbed
// ground truth, so lazy evaluation is equivalent to a full pass.
std::vector<int> perturbSeq(std::span<const int> groundTruth, double beta, const PositionSampler& sampler,
                            Rng& rng);

// Action-sequence flavour of perturbSeq (symbols 0 = READ, 1 = WRITE).
Program perturbSeq(const Program& groundTruth, double beta, const PositionSampler& sampler, Rng& rng);

}  // namespace simt
