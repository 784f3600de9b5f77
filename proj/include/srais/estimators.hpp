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

#ifndef SRAIS_ESTIMATORS_HPP
#define SRAIS_ESTIMATORS_HPP

#include <srais/density.hpp>
#include <srais/numeric.hpp>

#include <functional>

namespace srais {

enum class EstimatorKind { is, snis };

struct Estimate {
  Vector value;
  std::size_t n_used = 0;
  double ess = 0.0;  ///< 1 / sum(wbar^2) of the normalized weights, in [1, n_used]
  EstimatorKind kind = EstimatorKind::snis;
};

using Integrand = std::function<Vector(const Eigen::Ref<const Vector>&)>;

/// sum_k wbar_k g(X_k) with wbar proportional to exp(raw_log_weights).
/**
 * Throws DegenerateWeightsError when every log-weight is -inf.
 */
Estimate snis_estimate(const Integrand& g, const Points& points, const Vector& raw_log_weights);

/// Weighted mean of the points themselves; the common case of snis_estimate.
Estimate snis_mean(const Points& points, const Vector& raw_log_weights);

/// (1/n) sum_k W_k g(X_k). Only meaningful for a normalized target.
/**
 * Throws CapabilityError when `target` is not normalized.
 */
Estimate is_estimate(const Integrand& g, const Points& points, const Vector& raw_log_weights,
                     const Density& target);

/// ||estimate - truth||_2^2. Throws InputError on length mismatch.
double squared_error(const Eigen::Ref<const Vector>& estimate, const Eigen::Ref<const Vector>& truth);

/// Labelled data for binary classification; one row of `features` per example.
struct LabeledData {
  Vector labels;  ///< entries in {-1, +1}
  Eigen::MatrixXd features;

  std::size_t size() const noexcept { return static_cast<std::size_t>(labels.size()); }
};

/// sum_j w_j sigmoid(omega_j^T z) where omega_j is the leading block of particle j.
/**
 * `particles` holds one parameter vector [omega, beta] per column; only the
 * first z.size() coordinates are read. `weights` must sum to one.
 */
double posterior_predictive(const Eigen::Ref<const Vector>& z, const Points& particles,
                            const Vector& weights);

/// Fraction of `test` classified correctly when predicting +1 iff the predictive is >= 0.5.
double classify_accuracy(const LabeledData& test, const Points& particles, const Vector& weights);

/// Accuracy from precomputed predictive probabilities, one per test row.
double accuracy_from_probabilities(const Vector& labels, const Vector& probabilities);

}  // namespace srais

#endif  // SRAIS_ESTIMATORS_HPP
