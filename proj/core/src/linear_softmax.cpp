#include "simt/linear_softmax.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "simt/error.hpp"

namespace simt {

SparseGradient::SparseGradient(std::size_t features, std::size_t classes)
    : classes_(classes), data_(features * classes, 0.0), isTouched_(features, 0) {}

void SparseGradient::add(std::uint32_t feature, std::size_t cls, double value) {
  row(feature)[cls] += value;
}

double* SparseGradient::row(std::uint32_t feature) {
  if (!isTouched_[feature]) {
    isTouched_[feature] = 1;
    touched_.push_back(feature);
  }
  return data_.data() + static_cast<std::size_t>(feature) * classes_;
}

void SparseGradient::scale(double factor) {
  for (auto f : touched_) {
    double* r = data_.data() + static_cast<std::size_t>(f) * classes_;
    for (std::size_t c = 0; c < classes_; ++c) r[c] *= factor;
  }
}

void SparseGradient::clear() {
  for (auto f : touched_) {
    std::fill_n(data_.data() + static_cast<std::size_t>(f) * classes_, classes_, 0.0);
    isTouched_[f] = 0;
  }
  touched_.clear();
}

LinearSoftmax::LinearSoftmax(std::size_t features, std::size_t classes)
    : features_(features), classes_(classes), weights_(features * classes, 0.0) {
  if (classes < 2) throw InvalidArgument("LinearSoftmax needs at least two classes");
}

void LinearSoftmax::probabilities(const FeatureVector& phi, std::vector<double>& out) const {
  out.assign(classes_, 0.0);
  for (const auto& f : phi) {
    const double* w = weights_.data() + static_cast<std::size_t>(f.index) * classes_;
    for (std::size_t c = 0; c < classes_; ++c) out[c] += f.value * w[c];
  }
  const double top = *std::max_element(out.begin(), out.end());
  double total = 0.0;
  for (auto& z : out) {
    z = std::exp(z - top);
    total += z;
  }
  for (auto& z : out) z /= total;
}

std::vector<double> LinearSoftmax::probabilities(const FeatureVector& phi) const {
  std::vector<double> out;
  probabilities(phi, out);
  return out;
}

double LinearSoftmax::loss(const FeatureVector& phi, std::size_t label, SparseGradient* grad, double scale) const {
  thread_local std::vector<double> p;
  probabilities(phi, p);
  const double nll = -std::log(std::max(p[label], std::numeric_limits<double>::min()));
  if (grad != nullptr) {
    p[label] -= 1.0;
    for (const auto& f : phi) {
      double* g = grad->row(f.index);
      const double s = scale * f.value;
      for (std::size_t c = 0; c < classes_; ++c) g[c] += s * p[c];
    }
  }
  return nll;
}

bool LinearSoftmax::allFinite() const {
  return std::all_of(weights_.begin(), weights_.end(), [](double w) { return std::isfinite(w); });
}

AdamOptimizer::AdamOptimizer(const LinearSoftmax& model)
    : m_(model.weights().size(), 0.0), v_(model.weights().size(), 0.0) {}

void AdamOptimizer::step(LinearSoftmax& model, const SparseGradient& grad, double learningRate) {
  constexpr double kBeta1 = 0.9;
  constexpr double kBeta2 = 0.999;
  constexpr double kEps = 1e-8;
  ++steps_;
  const double c1 = 1.0 - std::pow(kBeta1, static_cast<double>(steps_));
  const double c2 = 1.0 - std::pow(kBeta2, static_cast<double>(steps_));
  const std::size_t classes = model.classes();
  auto w = model.weights();
  for (auto f : grad.touchedRows()) {
    const std::size_t base = static_cast<std::size_t>(f) * classes;
    for (std::size_t c = 0; c < classes; ++c) {
      const double g = grad.at(f, c);
      double& m = m_[base + c];
      double& v = v_[base + c];
      m = kBeta1 * m + (1.0 - kBeta1) * g;
      v = kBeta2 * v + (1.0 - kBeta2) * g * g;
      w[base + c] -= learningRate * (m / c1) / (std::sqrt(v / c2) + kEps);
    }
  }
}

}  // namespace simt
