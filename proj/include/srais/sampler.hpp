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

#ifndef SRAIS_SAMPLER_HPP
#define SRAIS_SAMPLER_HPP

#include <srais/density.hpp>
#include <srais/kernel.hpp>
#include <srais/random.hpp>
#include <srais/schedule.hpp>

#include <functional>
#include <memory>
#include <optional>
#include <vector>

/**
 * \file
 * \brief Safe and regularized adaptive importance sampling.
 *
 * Each iteration draws a batch from the current proposal q_k, weights it by
 * W = f / q_k, attaches an exponent eta to the batch, and rebuilds
 *
 *   q_{k+1} = (1 - lambda_{k+1}) f_{k+1} + lambda_{k+1} q_0,
 *
 * where f_{k+1} is a Gaussian-kernel density estimate over every particle
 * generated so far (optionally subsampled), particle j carrying weight
 * proportional to W_j^{eta_j}. The heavy-tailed safe density q_0 keeps
 * q_k >= lambda_k q_0, which bounds the weights.
 */

namespace srais {

/// Every particle ever generated, with its raw log-weight and frozen exponent.
class ParticleStore {
 public:
  explicit ParticleStore(std::size_t dim);

  /// Append a batch generated at `iteration`. Log-weights may be -inf, never +inf or NaN.
  void append(const Points& batch, const Vector& log_weights, double eta, std::size_t iteration);

  std::size_t size() const noexcept { return size_; }
  std::size_t dim() const noexcept { return dim_; }

  auto points() const { return points_.leftCols(static_cast<Eigen::Index>(size_)); }
  auto log_weights() const { return log_w_.head(static_cast<Eigen::Index>(size_)); }
  auto etas() const { return eta_.head(static_cast<Eigen::Index>(size_)); }
  auto bandwidths() const { return bandwidth_.head(static_cast<Eigen::Index>(size_)); }
  std::size_t iteration_of(std::size_t j) const { return iteration_.at(j); }

  /// Record the kernel bandwidth for entries [first, size()).
  void set_bandwidth_from(std::size_t first, double h);

 private:
  void reserve(std::size_t n);

  std::size_t dim_;
  std::size_t size_ = 0;
  Points points_;
  Vector log_w_;
  Vector eta_;
  Vector bandwidth_;
  std::vector<std::size_t> iteration_;
};

/// Normalized w_j proportional to exp(eta_j (log W_j - log_scale)).
/**
 * `log_scale` rescales the raw weights before the exponent is applied; see
 * SraisState::log_scale. Throws DegenerateWeightsError when all weights are 0.
 */
Vector regularized_normalized_weights(const ParticleStore& store, double log_scale = 0.0);

/// log D_n with D_n = (1/n) sum_j exp(eta_j (log W_j - log_scale)).
double log_mean_regularized_weight(const ParticleStore& store, double log_scale = 0.0);

/// q = (1 - lambda) f_kde + lambda q0. With lambda = 1 the estimate is ignored.
class SafeKdeProposal final : public Density {
 public:
  SafeKdeProposal(std::optional<WeightedParticles> particles, double lambda, DensityPtr safe);

  DensityKind kind() const noexcept override { return DensityKind::kernel_mixture; }
  bool can_sample() const noexcept override { return safe_->can_sample(); }
  bool normalized() const noexcept override { return true; }

  double lambda() const noexcept { return lambda_; }
  const std::optional<WeightedParticles>& particles() const noexcept { return particles_; }
  const Density& safe() const noexcept { return *safe_; }

  struct Evaluation {
    Vector log_q;     ///< log of the full mixture
    Vector log_safe;  ///< log q0 at the same points
  };
  /// Evaluate the mixture and its safe component in one pass.
  Evaluation evaluate(const Points& xs) const;

 protected:
  double log_density_unchecked(const Eigen::Ref<const Vector>& x) const override;
  void sample_unchecked(Eigen::Ref<Points> out, Rng& rng) const override;

 private:
  std::optional<WeightedParticles> particles_;
  Kernel kernel_;
  double lambda_;
  double log_lambda_;
  double log_one_minus_lambda_;
  DensityPtr safe_;
};

/// Which weights feed the running estimate of the target mean.
enum class EstimateWeights { regularized, plain };

EstimateWeights parse_estimate_weights(std::string_view s);
std::string_view to_string(EstimateWeights w) noexcept;

struct SraisConfig {
  std::size_t n0 = 1000;       ///< initial draws from q0
  std::size_t batch = 100;     ///< m, draws per iteration
  std::size_t iterations = 10; ///< K
  Schedule schedule;
  SubsampleMode subsample_mode = SubsampleMode::uniform;
  SubsampleRule subsample_rule = SubsampleRule::sqrt;
  bool per_particle_bandwidth = false;
  EstimateWeights estimate_weights = EstimateWeights::regularized;
};

/// Batches whose effective sample size stays below this count as collapsed.
inline constexpr double kCollapsedBatchEss = 1.0 + 1e-9;
/// Consecutive collapsed batches tolerated before the run aborts.
inline constexpr int kMaxCollapsedBatches = 3;

struct SraisState {
  ParticleStore store;
  std::shared_ptr<const Density> proposal;  ///< q_k; q0 before initialization
  DensityPtr safe;
  std::size_t iteration = 0;  ///< completed steps; the proposal in hand has index iteration + 1
  double lambda = 1.0;        ///< mixture weight of the current proposal
  double h = 1.0;             ///< bandwidth of the current proposal
  /// Subtracted from raw log-weights before the exponent is applied. Zero for
  /// normalized targets; for unnormalized ones, the log of the running mean raw
  /// weight, which estimates the log normalizing constant.
  double log_scale = 0.0;
  int collapsed_batches = 0;
  Rng rng;
};

/// Per-iteration diagnostics emitted by initialization (iteration 0) and each step.
struct IterationDiagnostics {
  std::size_t iteration = 0;
  double eta = 1.0;          ///< exponent attached to the batch drawn this iteration
  double batch_ess = 0.0;    ///< ESS of the batch's plain normalized weights (0 if all vanish)
  double lambda = 1.0;       ///< of the proposal built at the end of the iteration
  double h = 1.0;            ///< of the proposal built at the end of the iteration
  std::size_t n_particles = 0;
  double ess = 0.0;          ///< 1 / sum w^2 over the regularized normalized store weights
  double d_n = 0.0;
  /// min over the batch of log q_k(x) - log lambda_k - log q0(x); nonnegative up to rounding
  double safe_margin = 0.0;
  double max_regularized_weight = 0.0;  ///< max over the batch of (W e^{-log_scale})^eta
  double proposal_lambda = 1.0;         ///< lambda of the proposal the batch was drawn from
};

/// Draw n0 particles from q0, weight them and build q_1.
SraisState srais_initialize(const SraisConfig& config, const Density& target, DensityPtr safe,
                            Rng rng, IterationDiagnostics* diagnostics = nullptr);

/// One outer iteration: sample, weight, fix eta, rebuild the proposal.
IterationDiagnostics srais_step(SraisState& state, const SraisConfig& config, const Density& target);

/// One row of a run trace.
struct TraceRow {
  IterationDiagnostics diag;
  Vector estimate;                ///< SNIS mean of the target under the configured weights
  double squared_error = std::numeric_limits<double>::quiet_NaN();
  double accuracy = std::numeric_limits<double>::quiet_NaN();
  double wall_ms = 0.0;
};

using TraceObserver = std::function<void(const SraisState&, TraceRow&)>;

/// Mean estimate weights over the store under `mode` (normalized).
Vector estimate_weights(const SraisState& state, EstimateWeights mode);

/// Initialize and run `config.iterations` steps; one row per iteration, starting at 0.
/**
 * `observer`, when given, sees the state after each row is filled and may add
 * to the row (the logistic-regression driver records test accuracy there).
 */
std::vector<TraceRow> srais_run(const SraisConfig& config, const Density& target, DensityPtr safe,
                                Rng rng, const std::optional<Vector>& true_mean = std::nullopt,
                                const TraceObserver& observer = {});

}  // namespace srais

#endif  // SRAIS_SAMPLER_HPP
