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

#ifndef SRAIS_NUMERIC_HPP
#define SRAIS_NUMERIC_HPP

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace srais {

using Vector = Eigen::VectorXd;
/// Point clouds are stored column-wise: one column per point, `rows() == dim`.
using Points = Eigen::MatrixXd;

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kLog2Pi = 1.8378770664093454835606594728112;  // log(2*pi)

/// log(sum(exp(v))) without overflow. Returns -inf for an empty or all -inf input.
inline double log_sum_exp(const Eigen::Ref<const Vector>& v) {
  if (v.size() == 0) return kNegInf;
  const double m = v.maxCoeff();
  if (m == kNegInf) return kNegInf;
  if (m == std::numeric_limits<double>::infinity()) return m;
  return m + std::log((v.array() - m).exp().sum());
}

/// log(exp(a) + exp(b)).
inline double log_add_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

/// Softmax of log-weights. Entries at -inf map to exactly zero.
inline Vector normalize_log_weights(const Eigen::Ref<const Vector>& log_w) {
  const double lse = log_sum_exp(log_w);
  return (log_w.array() - lse).exp().matrix();
}

inline double sigmoid(double t) {
  if (t >= 0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

/// log(1 / (1 + exp(-t))), stable for large |t|.
inline double log_sigmoid(double t) {
  if (t >= 0) return -std::log1p(std::exp(-t));
  return t - std::log1p(std::exp(t));
}

/// 1 / sum(w^2) for weights already summing to one.
inline double effective_sample_size(const Eigen::Ref<const Vector>& normalized_weights) {
  return 1.0 / normalized_weights.squaredNorm();
}

}  // namespace srais

#endif  // SRAIS_NUMERIC_HPP
