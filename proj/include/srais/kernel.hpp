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

#ifndef SRAIS_KERNEL_HPP
#define SRAIS_KERNEL_HPP

#include <srais/numeric.hpp>
#include <srais/random.hpp>

#include <cstddef>
#include <optional>
#include <string_view>

namespace srais {

enum class KernelKind { gaussian };

/// Smoothing kernel K on R^d. Only the standard Gaussian is provided.
struct Kernel {
  KernelKind kind = KernelKind::gaussian;
  std::size_t dim = 1;
};

/// log K_h(u) = log K(u / h) - d log h. Throws InputError when h <= 0.
double kernel_log_value(const Kernel& k, const Eigen::Ref<const Vector>& u, double h);

/// K_h(u) = K(u / h) / h^d.
double kernel_value(const Kernel& k, const Eigen::Ref<const Vector>& u, double h);

/// Weighted point set backing a kernel density estimate.
/**
 * Weights are normalized on construction. The bandwidth is either shared by
 * all points or given per point.
 */
class WeightedParticles {
 public:
  /// From log-weights known up to an additive constant; -inf entries get weight zero.
  static WeightedParticles from_log_weights(Points points, const Vector& log_weights,
                                            double bandwidth);

  /// From nonnegative weights; they are rescaled to sum to one.
  WeightedParticles(Points points, const Vector& weights, double bandwidth);

  /// Attach one bandwidth per point. Replaces the shared bandwidth.
  WeightedParticles& with_point_bandwidths(Vector bandwidths);

  std::size_t size() const noexcept { return static_cast<std::size_t>(points_.cols()); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(points_.rows()); }
  const Points& points() const noexcept { return points_; }
  const Vector& weights() const noexcept { return weights_; }
  const Vector& log_weights() const noexcept { return log_weights_; }
  double bandwidth() const noexcept { return bandwidth_; }
  const std::optional<Vector>& point_bandwidths() const noexcept { return point_bandwidths_; }
  /// Bandwidth attached to point `j`.
  double bandwidth_of(std::size_t j) const noexcept {
    return point_bandwidths_ ? (*point_bandwidths_)(static_cast<Eigen::Index>(j)) : bandwidth_;
  }

 private:
  WeightedParticles() = default;
  void validate() const;

  Points points_;
  Vector weights_;
  Vector log_weights_;
  double bandwidth_ = 1.0;
  std::optional<Vector> point_bandwidths_;
};

/// log f_n(x) with f_n(x) = sum_j w_j K_{h_j}(x - X_j), accumulated by log-sum-exp.
double kde_log_density(const WeightedParticles& p, const Kernel& k,
                       const Eigen::Ref<const Vector>& x);

/// Same as above for every column of `xs`.
Vector kde_log_densities(const WeightedParticles& p, const Kernel& k, const Points& xs);

/// Draw one point from the estimate: pick a particle by weight, then jitter with K_h.
void kde_sample_into(const WeightedParticles& p, Eigen::Ref<Vector> out, Rng& rng);

enum class SubsampleMode {
  uniform,   ///< without replacement, retained weights renormalized
  weighted,  ///< multinomial resampling by weight, retained weights uniform
};

enum class SubsampleRule {
  sqrt,  ///< keep floor(sqrt(N)) particles
  full,  ///< keep everything
};

SubsampleMode parse_subsample_mode(std::string_view s);
SubsampleRule parse_subsample_rule(std::string_view s);
std::string_view to_string(SubsampleMode m) noexcept;
std::string_view to_string(SubsampleRule r) noexcept;

/// Number of particles retained out of `total` under `rule`.
std::size_t subsample_size(std::size_t total, SubsampleRule rule) noexcept;

/// Reduce `p` to `target_size` particles. Deterministic given the generator state.
/**
 * In uniform mode only particles with positive weight are eligible, since the
 * others contribute nothing to the estimate; if fewer than `target_size` are
 * eligible all of them are kept. Throws InputError when target_size is zero or
 * exceeds p.size().
 */
WeightedParticles subsample(const WeightedParticles& p, std::size_t target_size, Rng& rng,
                            SubsampleMode mode = SubsampleMode::uniform);

}  // namespace srais

#endif  // SRAIS_KERNEL_HPP
