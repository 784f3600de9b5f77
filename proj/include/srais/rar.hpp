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

#ifndef SRAIS_RAR_HPP
#define SRAIS_RAR_HPP

#include <srais/numeric.hpp>

/**
 * \file
 * \brief Renyi divergence of a weighted batch from the uniform distribution on the
 * same points, and the adaptive regularization exponent derived from it.
 *
 * For a batch of m points carrying normalized importance weights w, let P put
 * mass w_l on point l and Q put mass 1/m on every point. Then
 *
 *   D_alpha(P || Q) = log(sum_l w_l^alpha m^(alpha - 1)) / (alpha - 1),
 *
 * extended by continuity to alpha = 1 (forward KL) and alpha = 0 (reverse KL),
 * and the exponent is eta = 1 - D_alpha / log(m). For alpha in [0, 1] this
 * lies in [0, 1], equals 1 exactly when the weights are uniform, and is
 * nonincreasing in alpha.
 */

namespace srais {

/// Normalized weights of one batch. The weights are the plain ones, not regularized.
class BatchWeights {
 public:
  /// Weights summing to one within 1e-10. Requires at least two entries.
  static BatchWeights from_normalized(const Vector& w);
  /// Log-weights known up to an additive constant; -inf entries are zero weights.
  static BatchWeights from_log_weights(const Vector& log_w);

  std::size_t size() const noexcept { return static_cast<std::size_t>(log_w_.size()); }
  const Vector& log_weights() const noexcept { return log_w_; }
  Vector weights() const { return log_w_.array().exp(); }

 private:
  explicit BatchWeights(Vector log_w) : log_w_(std::move(log_w)) {}
  Vector log_w_;  // normalized: log_sum_exp(log_w_) == 0
};

/// Weights at or below this count as zero in the alpha = 0 support count.
inline constexpr double kSupportFloor = 1e-300;

/// D_alpha(P || Q) for alpha in [0, 1]. Throws InputError outside that range.
double renyi_divergence(const BatchWeights& w, double alpha);

/// eta = 1 - D_alpha / log(m), clamped to [0, 1] against rounding only.
/**
 * Throws InvariantViolation if the raw value leaves [0, 1] by more than 1e-12.
 */
double rar_eta(const BatchWeights& w, double alpha);

}  // namespace srais

#endif  // SRAIS_RAR_HPP
