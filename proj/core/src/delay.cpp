#include <cmath>

#include "simt/error.hpp"
#include "simt/metrics.hpp"

namespace simt {
namespace {

void checkLagVector(std::span<const std::size_t> g, std::size_t srcLen, std::size_t tgtLen, const char* what) {
  if (srcLen == 0 || tgtLen == 0) {
    throw InvalidArgument(std::string(what) + ": source and target lengths must be positive");
  }
  if (g.size() != tgtLen) {
    throw InvalidArgument(std::string(what) + ": lag vector has " + std::to_string(g.size()) +
                          " entries for target length " + std::to_string(tgtLen));
  }
}

}  // namespace

double averageProportion(std::span<const std::size_t> g, std::size_t srcLen, std::size_t tgtLen) {
  checkLagVector(g, srcLen, tgtLen, "averageProportion");
  double sum = 0.0;
  for (auto v : g) sum += static_cast<double>(v);
  return sum / (static_cast<double>(srcLen) * static_cast<double>(tgtLen));
}

double averageLagging(std::span<const std::size_t> g, std::size_t srcLen, std::size_t tgtLen) {
  checkLagVector(g, srcLen, tgtLen, "averageLagging");
  const double rate = static_cast<double>(tgtLen) / static_cast<double>(srcLen);
  double sum = 0.0;
  for (std::size_t j = 1; j <= tgtLen; ++j) {
    sum += static_cast<double>(g[j - 1]) - static_cast<double>(j - 1) / rate;
    if (g[j - 1] == srcLen) return sum / static_cast<double>(j);
  }
  throw InvalidArgument("averageLagging: program does not read full source");
}

std::vector<double> dalAdjustedLags(std::span<const std::size_t> g, std::size_t srcLen, std::size_t tgtLen) {
  checkLagVector(g, srcLen, tgtLen, "differentiableAL");
  const double step = static_cast<double>(srcLen) / static_cast<double>(tgtLen);
  std::vector<double> adjusted(tgtLen);
  double prev = 0.0;
  for (std::size_t j = 0; j < tgtLen; ++j) {
    prev = std::max(static_cast<double>(g[j]), prev + step);
    adjusted[j] = prev;
  }
  return adjusted;
}

double differentiableAL(std::span<const std::size_t> g, std::size_t srcLen, std::size_t tgtLen) {
  const auto adjusted = dalAdjustedLags(g, srcLen, tgtLen);
  const double step = static_cast<double>(srcLen) / static_cast<double>(tgtLen);
  double sum = 0.0;
  for (std::size_t j = 0; j < tgtLen; ++j) sum += adjusted[j] - static_cast<double>(j) * step;
  return sum / static_cast<double>(tgtLen);
}

DelayReport delayReport(const Program& p, std::size_t srcLen, std::size_t tgtLen) {
  if (!isBoundaryValid(p, srcLen, tgtLen)) {
    throw InvalidArgument("delayReport: program '" + p.str() + "' is not boundary-valid for lengths (" +
                          std::to_string(srcLen) + ", " + std::to_string(tgtLen) + ")");
  }
  DelayReport r;
  r.g = gVector(p);
  r.srcLen = srcLen;
  r.tgtLen = tgtLen;
  r.ap = averageProportion(r.g, srcLen, tgtLen);
  r.al = averageLagging(r.g, srcLen, tgtLen);
  r.gPrime = dalAdjustedLags(r.g, srcLen, tgtLen);
  r.dal = differentiableAL(r.g, srcLen, tgtLen);
  return r;
}

}  // namespace simt
