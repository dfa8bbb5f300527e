#include "simt/rng.hpp"

#include <cassert>
#include <limits>

namespace simt {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::uint64_t deriveSeed(std::uint64_t base, std::string_view stream) {
  return splitmix64(splitmix64(base) ^ fnv1a(stream));
}

std::uint64_t deriveSeed(std::uint64_t base, std::uint64_t index) {
  return splitmix64(splitmix64(base) + splitmix64(index ^ 0x5851f42d4c957f2dULL));
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::size_t Rng::below(std::size_t n) {
  assert(n > 0);
  const std::uint64_t bound = n;
  // Rejection sampling on the top of the range keeps the draw unbiased.
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t r;
  do {
    r = engine_();
  } while (r >= limit);
  return static_cast<std::size_t>(r % bound);
}

std::size_t Rng::categorical(std::span<const double> weights) {
  assert(!weights.empty());
  double total = 0.0;
  for (double w : weights) total += w;
  const double u = uniform() * total;
  double acc = 0.0;
  std::size_t lastPositive = 0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (weights[k] <= 0.0) continue;
    acc += weights[k];
    lastPositive = k;
    if (u < acc) return k;
  }
  return lastPositive;
}

}  // namespace simt
