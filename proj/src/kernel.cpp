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
#include <srais/kernel.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

namespace srais {

double kernel_log_value(const Kernel& k, const Eigen::Ref<const Vector>& u, double h) {
  if (!(h > 0.0)) throw InputError("bandwidth must be positive");
  if (static_cast<std::size_t>(u.size()) != k.dim) throw InputError("kernel dimension mismatch");
  const auto d = static_cast<double>(k.dim);
  return -0.5 * d * kLog2Pi - d * std::log(h) - 0.5 * u.squaredNorm() / (h * h);
}

double kernel_value(const Kernel& k, const Eigen::Ref<const Vector>& u, double h) {
  return std::exp(kernel_log_value(k, u, h));
}

// ---------------------------------------------------------------------------

WeightedParticles WeightedParticles::from_log_weights(Points points, const Vector& log_weights,
                                                      double bandwidth) {
  if (log_weights.size() != points.cols()) throw InputError("one weight per particle required");
  if ((log_weights.array() == std::numeric_limits<double>::infinity()).any() ||
      log_weights.array().isNaN().any()) {
    throw InputError("log-weights must be finite or -inf");
  }
  const double lse = log_sum_exp(log_weights);
  if (lse == kNegInf) throw DegenerateWeightsError("all particle weights are zero");
  WeightedParticles p;
  p.points_ = std::move(points);
  p.log_weights_ = log_weights.array() - lse;
  p.weights_ = p.log_weights_.array().exp();
  p.bandwidth_ = bandwidth;
  p.validate();
  return p;
}

WeightedParticles::WeightedParticles(Points points, const Vector& weights, double bandwidth)
    : points_(std::move(points)), bandwidth_(bandwidth) {
  if (weights.size() != points_.cols()) throw InputError("one weight per particle required");
  if ((weights.array() < 0.0).any() || !weights.allFinite()) {
    throw InputError("weights must be finite and nonnegative");
  }
  const double total = weights.sum();
  if (!(total > 0.0)) throw DegenerateWeightsError("all particle weights are zero");
  weights_ = weights / total;
  log_weights_ = weights_.array().log();
  validate();
}

WeightedParticles& WeightedParticles::with_point_bandwidths(Vector bandwidths) {
  if (bandwidths.size() != points_.cols()) throw InputError("one bandwidth per particle required");
  if ((bandwidths.array() <= 0.0).any()) throw InputError("bandwidths must be positive");
  point_bandwidths_ = std::move(bandwidths);
  return *this;
}

void WeightedParticles::validate() const {
  if (points_.cols() == 0) throw InputError("need at least one particle");
  if (points_.rows() == 0) throw InputError("particles must have positive dimension");
  if (!(bandwidth_ > 0.0)) throw InputError("bandwidth must be positive");
  if (std::abs(weights_.sum() - 1.0) > 1e-12) {
    throw InvariantViolation("particle weights do not sum to one");
  }
}

// ---------------------------------------------------------------------------

double kde_log_density(const WeightedParticles& p, const Kernel& k,
                       const Eigen::Ref<const Vector>& x) {
  if (static_cast<std::size_t>(x.size()) != p.dim() || k.dim != p.dim()) {
    throw InputError("KDE dimension mismatch");
  }
  const auto d = static_cast<double>(p.dim());
  const Vector sq = (p.points().colwise() - x).colwise().squaredNorm().transpose();
  Vector terms(sq.size());
  if (const auto& hs = p.point_bandwidths()) {
    terms = p.log_weights().array() - d * hs->array().log() - 0.5 * sq.array() / hs->array().square();
  } else {
    const double h = p.bandwidth();
    terms = p.log_weights().array() - d * std::log(h) - 0.5 * sq.array() / (h * h);
  }
  return log_sum_exp(terms) - 0.5 * d * kLog2Pi;
}

Vector kde_log_densities(const WeightedParticles& p, const Kernel& k, const Points& xs) {
  Vector out(xs.cols());
  for (Eigen::Index j = 0; j < xs.cols(); ++j) out(j) = kde_log_density(p, k, xs.col(j));
  return out;
}

void kde_sample_into(const WeightedParticles& p, Eigen::Ref<Vector> out, Rng& rng) {
  std::discrete_distribution<std::size_t> pick(p.weights().begin(), p.weights().end());
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t j = pick(rng);
  const double h = p.bandwidth_of(j);
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    out(i) = p.points()(i, static_cast<Eigen::Index>(j)) + h * normal(rng);
  }
}

// ---------------------------------------------------------------------------

SubsampleMode parse_subsample_mode(std::string_view s) {
  if (s == "uniform") return SubsampleMode::uniform;
  if (s == "weighted") return SubsampleMode::weighted;
  throw InputError("unknown subsample mode '" + std::string(s) + "'");
}

SubsampleRule parse_subsample_rule(std::string_view s) {
  if (s == "sqrt") return SubsampleRule::sqrt;
  if (s == "full" || s == "none") return SubsampleRule::full;
  throw InputError("unknown subsample rule '" + std::string(s) + "'");
}

std::string_view to_string(SubsampleMode m) noexcept {
  return m == SubsampleMode::uniform ? "uniform" : "weighted";
}

std::string_view to_string(SubsampleRule r) noexcept {
  return r == SubsampleRule::sqrt ? "sqrt" : "full";
}

std::size_t subsample_size(std::size_t total, SubsampleRule rule) noexcept {
  if (rule == SubsampleRule::full) return total;
  auto ell = static_cast<std::size_t>(std::sqrt(static_cast<double>(total)));
  while ((ell + 1) * (ell + 1) <= total) ++ell;
  while (ell > 0 && ell * ell > total) --ell;
  return std::max<std::size_t>(ell, 1);
}

WeightedParticles subsample(const WeightedParticles& p, std::size_t target_size, Rng& rng,
                            SubsampleMode mode) {
  const std::size_t n = p.size();
  if (target_size == 0) throw InputError("subsample size must be at least 1");
  if (target_size > n) throw InputError("subsample size exceeds particle count");

  std::vector<std::size_t> chosen;
  Vector new_weights;
  if (mode == SubsampleMode::uniform) {
    std::vector<std::size_t> eligible;
    eligible.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
      if (p.weights()(static_cast<Eigen::Index>(j)) > 0.0) eligible.push_back(j);
    }
    if (target_size >= eligible.size()) {
      chosen = eligible;
    } else {
      // Partial Fisher-Yates over the eligible indices.
      for (std::size_t i = 0; i < target_size; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, eligible.size() - 1);
        std::swap(eligible[i], eligible[pick(rng)]);
      }
      chosen.assign(eligible.begin(), eligible.begin() + static_cast<std::ptrdiff_t>(target_size));
      std::sort(chosen.begin(), chosen.end());
    }
    new_weights.resize(static_cast<Eigen::Index>(chosen.size()));
    for (std::size_t i = 0; i < chosen.size(); ++i) {
      new_weights(static_cast<Eigen::Index>(i)) = p.log_weights()(static_cast<Eigen::Index>(chosen[i]));
    }
  } else {
    std::discrete_distribution<std::size_t> pick(p.weights().begin(), p.weights().end());
    chosen.resize(target_size);
    for (auto& c : chosen) c = pick(rng);
    std::sort(chosen.begin(), chosen.end());
    new_weights = Vector::Zero(static_cast<Eigen::Index>(target_size));
  }

  Points pts(static_cast<Eigen::Index>(p.dim()), static_cast<Eigen::Index>(chosen.size()));
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    pts.col(static_cast<Eigen::Index>(i)) = p.points().col(static_cast<Eigen::Index>(chosen[i]));
  }
  auto out = WeightedParticles::from_log_weights(std::move(pts), new_weights, p.bandwidth());
  if (const auto& hs = p.point_bandwidths()) {
    Vector kept(static_cast<Eigen::Index>(chosen.size()));
    for (std::size_t i = 0; i < chosen.size(); ++i) {
      kept(static_cast<Eigen::Index>(i)) = (*hs)(static_cast<Eigen::Index>(chosen[i]));
    }
    out.with_point_bandwidths(std::move(kept));
  }
  return out;
}

}  // namespace srais
