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
#include <srais/rar.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace srais {

namespace {

constexpr double kClampTolerance = 1e-12;

void require_batch(Eigen::Index m) {
  if (m < 2) throw InputError("batch must hold at least two weights");
}

}  // namespace

BatchWeights BatchWeights::from_normalized(const Vector& w) {
  require_batch(w.size());
  if ((w.array() < 0.0).any() || !w.allFinite()) {
    throw InputError("batch weights must be finite and nonnegative");
  }
  if (std::abs(w.sum() - 1.0) > 1e-10) throw InputError("batch weights must sum to one");
  // Scalar std::log: Eigen's packet log can differ by an ulp on tail elements,
  // which would make equal weights unequal.
  Vector lw(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) lw(i) = std::log(w(i));
  return from_log_weights(lw);
}

BatchWeights BatchWeights::from_log_weights(const Vector& log_w) {
  require_batch(log_w.size());
  if (log_w.array().isNaN().any() ||
      (log_w.array() == std::numeric_limits<double>::infinity()).any()) {
    throw InputError("batch log-weights must be finite or -inf");
  }
  const double lse = log_sum_exp(log_w);
  if (lse == kNegInf) throw DegenerateWeightsError("all batch weights are zero");
  return BatchWeights(log_w.array() - lse);
}

double renyi_divergence(const BatchWeights& w, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw InputError("alpha must lie in [0, 1], got " + std::to_string(alpha));
  }
  const auto& lw = w.log_weights();
  const double log_m = std::log(static_cast<double>(w.size()));
  // P = Q exactly; the general formulas only reach 0 up to rounding.
  if (lw.maxCoeff() == lw.minCoeff()) return 0.0;

  if (alpha == 0.0) {
    const double floor = std::log(kSupportFloor);
    Eigen::Index support = 0;
    for (Eigen::Index i = 0; i < lw.size(); ++i) {
      if (lw(i) > floor) ++support;
    }
    return log_m - std::log(static_cast<double>(support));
  }
  if (alpha == 1.0) {
    double kl = 0.0;
    for (Eigen::Index i = 0; i < lw.size(); ++i) {
      if (lw(i) == kNegInf) continue;  // 0 log 0 = 0
      kl += std::exp(lw(i)) * (lw(i) + log_m);
    }
    return kl;
  }
  const Vector scaled = alpha * lw;
  return (log_sum_exp(scaled) + (alpha - 1.0) * log_m) / (alpha - 1.0);
}

double rar_eta(const BatchWeights& w, double alpha) {
  const double eta = 1.0 - renyi_divergence(w, alpha) / std::log(static_cast<double>(w.size()));
  if (eta < -kClampTolerance || eta > 1.0 + kClampTolerance || std::isnan(eta)) {
    throw InvariantViolation("adaptive exponent left [0, 1]: " + std::to_string(eta));
  }
  return std::clamp(eta, 0.0, 1.0);
}

}  // namespace srais
