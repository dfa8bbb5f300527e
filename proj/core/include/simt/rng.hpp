#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace simt {

// Seed derivation for named sub-streams and per-index streams.  Built on
// splitmix64 so derived seeds are identical on every platform.
std::uint64_t deriveSeed(std::uint64_t base, std::string_view stream);
std::uint64_t deriveSeed(std::uint64_t base, std::uint64_t index);

// Deterministic random source.  The engine is std::mt19937_64, whose output
// sequence is fixed by the standard; the standard distributions are not, so
// the samplers below are written against raw engine output.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  Rng derive(std::string_view stream) { return Rng(deriveSeed(engine_(), stream)); }

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, 1) with 53 bits of resolution.
  double uniform();

  // Uniform integer in [0, n).  n must be positive.
  std::size_t below(std::size_t n);

  bool bernoulli(double p) { return uniform() < p; }

  // Index drawn from an unnormalized non-negative weight vector.  Falls back
  // to the last positive entry when rounding leaves residual mass.
  std::size_t categorical(std::span<const double> weights);

  template <class RandomIt>
  void shuffle(RandomIt first, RandomIt last) {
    const auto n = static_cast<std::size_t>(last - first);
    for (std::size_t i = n; i > 1; --i) {
      const std::size_t k = below(i);
      std::iter_swap(first + (i - 1), first + k);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace simt
