// Copyright 2026 The SRAIS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <srais/error.hpp>
#include <srais/estimators.hpp>

#include <algorithm>
#include <cmath>

namespace srais {

namespace {

Vector checked_normalized(const Points& points, const Vector& raw_log_weights) {
  if (points.cols() == 0) throw InputError("no points to estimate from");
  if (raw_log_weights.size() != points.cols()) throw InputError("one weight per point required");
  if (raw_log_weights.array().isNaN().any()) throw InputError("log-weights contain NaN");
  const double lse = log_sum_exp(raw_log_weights);
  if (lse == kNegInf) throw DegenerateWeightsError("all importance weights are zero");
  return (raw_log_weights.array() - lse).exp().matrix();
}

double bounded_ess(const Vector& w) {
  return std::clamp(effective_sample_size(w), 1.0, static_cast<double>(w.size()));
}

}  // namespace

Estimate snis_estimate(const Integrand& g, const Points& points, const Vector& raw_log_weights) {
  const Vector w = checked_normalized(points, raw_log_weights);
  Vector acc;
  for (Eigen::Index j = 0; j < points.cols(); ++j) {
    if (w(j) == 0.0) continue;
    const Vector gj = g(points.col(j));
    if (acc.size() == 0) acc = Vector::Zero(gj.size());
    acc += w(j) * gj;
  }
  return {std::move(acc), static_cast<std::size_t>(points.cols()), bounded_ess(w), EstimatorKind::snis};
}

Estimate snis_mean(const Points& points, const Vector& raw_log_weights) {
  const Vector w = checked_normalized(points, raw_log_weights);
  return {points * w, static_cast<std::size_t>(points.cols()), bounded_ess(w), EstimatorKind::snis};
}

Estimate is_estimate(const Integrand& g, const Points& points, const Vector& raw_log_weights,
                     const Density& target) {
  if (!target.normalized()) {
    throw CapabilityError("plain importance sampling needs a normalized target");
  }
  const Vector w = checked_normalized(points, raw_log_weights);
  const auto n = static_cast<double>(points.cols());
  Vector acc;
  for (Eigen::Index j = 0; j < points.cols(); ++j) {
    const double wj = std::exp(raw_log_weights(j));
    const Vector gj = g(points.col(j));
    if (acc.size() == 0) acc = Vector::Zero(gj.size());
    if (wj != 0.0) acc += wj * gj;
  }
  return {acc / n, static_cast<std::size_t>(points.cols()), bounded_ess(w), EstimatorKind::is};
}

double squared_error(const Eigen::Ref<const Vector>& estimate, const Eigen::Ref<const Vector>& truth) {
  if (estimate.size() != truth.size()) throw InputError("estimate and truth differ in length");
  return (estimate - truth).squaredNorm();
}

double posterior_predictive(const Eigen::Ref<const Vector>& z, const Points& particles,
                            const Vector& weights) {
  if (weights.size() != particles.cols()) throw InputError("one weight per particle required");
  if (z.size() > particles.rows()) throw InputError("features longer than parameter vector");
  const Vector logits = particles.topRows(z.size()).transpose() * z;
  double p = 0.0;
  for (Eigen::Index j = 0; j < logits.size(); ++j) p += weights(j) * sigmoid(logits(j));
  return std::clamp(p, 0.0, 1.0);
}

double accuracy_from_probabilities(const Vector& labels, const Vector& probabilities) {
  if (labels.size() == 0) throw InputError("empty test set");
  if (labels.size() != probabilities.size()) throw InputError("one probability per label required");
  Eigen::Index correct = 0;
  for (Eigen::Index i = 0; i < labels.size(); ++i) {
    if (labels(i) != 1.0 && labels(i) != -1.0) throw InputError("labels must be -1 or +1");
    const double predicted = probabilities(i) >= 0.5 ? 1.0 : -1.0;
    if (predicted == labels(i)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(labels.size());
}

double classify_accuracy(const LabeledData& test, const Points& particles, const Vector& weights) {
  if (test.size() == 0) throw InputError("empty test set");
  Vector probs(test.labels.size());
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    probs(i) = posterior_predictive(test.features.row(i).transpose(), particles, weights);
  }
  return accuracy_from_probabilities(test.labels, probs);
}

}  // namespace srais
