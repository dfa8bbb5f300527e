#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "simt/features.hpp"

namespace simt {

// Gradient buffer for a weight matrix that only tracks the rows (features)
// touched since the last clear().
class SparseGradient {
 public:
  SparseGradient() = default;
  SparseGradient(std::size_t features, std::size_t classes);

  void add(std::uint32_t feature, std::size_t cls, double value);
  double* row(std::uint32_t feature);
  const std::vector<std::uint32_t>& touchedRows() const { return touched_; }
  double at(std::uint32_t feature, std::size_t cls) const { return data_[feature * classes_ + cls]; }
  std::size_t classes() const { return classes_; }
  void scale(double factor);
  void clear();

 private:
  std::size_t classes_ = 0;
  std::vector<double> data_;
  std::vector<std::uint8_t> isTouched_;
  std::vector<std::uint32_t> touched_;
};

// Multinomial logistic regression over sparse features: p(c | phi) =
// softmax(W^T phi)_c with W stored row-major [feature][class].
class LinearSoftmax {
 public:
  LinearSoftmax() = default;
  LinearSoftmax(std::size_t features, std::size_t classes);

  std::size_t features() const { return features_; }
  std::size_t classes() const { return classes_; }
  std::span<double> weights() { return weights_; }
  std::span<const double> weights() const { return weights_; }
  double& weight(std::uint32_t feature, std::size_t cls) { return weights_[feature * classes_ + cls]; }

  void probabilities(const FeatureVector& phi, std::vector<double>& out) const;
  std::vector<double> probabilities(const FeatureVector& phi) const;

  // -log p(label | phi); adds scale * d/dW to `grad` when non-null.
  double loss(const FeatureVector& phi, std::size_t label, SparseGradient* grad = nullptr, double scale = 1.0) const;

  bool allFinite() const;

  friend bool operator==(const LinearSoftmax&, const LinearSoftmax&) = default;

 private:
  std::size_t features_ = 0;
  std::size_t classes_ = 0;
  std::vector<double> weights_;
};

// Adam with lazily updated rows: moments advance only for rows present in
// the gradient, bias correction uses the global step count.
class AdamOptimizer {
 public:
  AdamOptimizer() = default;
  explicit AdamOptimizer(const LinearSoftmax& model);

  void step(LinearSoftmax& model, const SparseGradient& grad, double learningRate);
  std::size_t steps() const { return steps_; }

 private:
  std::vector<double> m_;
  std::vector<double> v_;
  std::size_t steps_ = 0;
};

}  // namespace simt
