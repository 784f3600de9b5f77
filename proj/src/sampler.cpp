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
#include <srais/rar.hpp>
#include <srais/sampler.hpp>

#include <chrono>
#include <cmath>
#include <string>

namespace srais {

// ---------------------------------------------------------------------------
// ParticleStore

ParticleStore::ParticleStore(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw InputError("particle dimension must be positive");
  points_.resize(static_cast<Eigen::Index>(dim), 0);
}

void ParticleStore::reserve(std::size_t n) {
  const auto cap = static_cast<std::size_t>(points_.cols());
  if (n <= cap) return;
  const auto new_cap = static_cast<Eigen::Index>(std::max(n, 2 * cap));
  points_.conservativeResize(Eigen::NoChange, new_cap);
  log_w_.conservativeResize(new_cap);
  eta_.conservativeResize(new_cap);
  bandwidth_.conservativeResize(new_cap);
}

void ParticleStore::append(const Points& batch, const Vector& log_weights, double eta,
                           std::size_t iteration) {
  if (static_cast<std::size_t>(batch.rows()) != dim_) throw InputError("batch dimension mismatch");
  if (log_weights.size() != batch.cols()) throw InputError("one weight per particle required");
  if (!(eta >= 0.0 && eta <= 1.0)) throw InputError("exponent must lie in [0, 1]");
  for (Eigen::Index i = 0; i < log_weights.size(); ++i) {
    if (std::isnan(log_weights(i)) || log_weights(i) == std::numeric_limits<double>::infinity()) {
      throw InputError("raw weights must be finite and nonnegative");
    }
  }
  const auto first = static_cast<Eigen::Index>(size_);
  const auto n = batch.cols();
  reserve(size_ + static_cast<std::size_t>(n));
  points_.middleCols(first, n) = batch;
  log_w_.segment(first, n) = log_weights;
  eta_.segment(first, n).setConstant(eta);
  bandwidth_.segment(first, n).setConstant(std::numeric_limits<double>::quiet_NaN());
  iteration_.insert(iteration_.end(), static_cast<std::size_t>(n), iteration);
  size_ += static_cast<std::size_t>(n);
}

void ParticleStore::set_bandwidth_from(std::size_t first, double h) {
  if (first > size_) throw InputError("bandwidth range starts past the end of the store");
  bandwidth_.segment(static_cast<Eigen::Index>(first), static_cast<Eigen::Index>(size_ - first))
      .setConstant(h);
}

namespace {

Vector regularized_log_weights(const ParticleStore& store, double log_scale) {
  const auto lw = store.log_weights();
  const auto eta = store.etas();
  Vector out(lw.size());
  for (Eigen::Index j = 0; j < lw.size(); ++j) {
    // W = 0 stays 0 for any exponent, including 0.
    out(j) = lw(j) == kNegInf ? kNegInf : eta(j) * (lw(j) - log_scale);
  }
  return out;
}

}  // namespace

Vector regularized_normalized_weights(const ParticleStore& store, double log_scale) {
  if (store.size() == 0) throw InputError("empty particle store");
  const Vector lr = regularized_log_weights(store, log_scale);
  const double lse = log_sum_exp(lr);
  if (lse == kNegInf) {
    throw DegenerateWeightsError("every importance weight is zero: proposal and target do not overlap");
  }
  return (lr.array() - lse).exp().matrix();
}

double log_mean_regularized_weight(const ParticleStore& store, double log_scale) {
  if (store.size() == 0) throw InputError("empty particle store");
  return log_sum_exp(regularized_log_weights(store, log_scale)) -
         std::log(static_cast<double>(store.size()));
}

// ---------------------------------------------------------------------------
// SafeKdeProposal

namespace {

std::size_t proposal_dim(const DensityPtr& safe) {
  if (!safe) throw InputError("safe density is required");
  return safe->dim();
}

}  // namespace

SafeKdeProposal::SafeKdeProposal(std::optional<WeightedParticles> particles, double lambda,
                                 DensityPtr safe)
    : Density(proposal_dim(safe)),
      particles_(std::move(particles)),
      kernel_{KernelKind::gaussian, proposal_dim(safe)},
      lambda_(lambda),
      safe_(std::move(safe)) {
  if (!(lambda > 0.0 && lambda <= 1.0)) throw InputError("lambda must lie in (0, 1]");
  if (lambda < 1.0 && !particles_) throw InputError("a kernel estimate is required when lambda < 1");
  if (particles_ && particles_->dim() != dim()) throw InputError("particle dimension mismatch");
  log_lambda_ = std::log(lambda_);
  log_one_minus_lambda_ = lambda_ < 1.0 ? std::log1p(-lambda_) : kNegInf;
}

double SafeKdeProposal::log_density_unchecked(const Eigen::Ref<const Vector>& x) const {
  const double log_safe = safe_->log_density(x);
  if (lambda_ >= 1.0) return log_safe;
  return log_add_exp(log_one_minus_lambda_ + kde_log_density(*particles_, kernel_, x),
                     log_lambda_ + log_safe);
}

SafeKdeProposal::Evaluation SafeKdeProposal::evaluate(const Points& xs) const {
  Evaluation e{Vector(xs.cols()), safe_->log_densities(xs)};
  if (lambda_ >= 1.0) {
    e.log_q = e.log_safe;
    return e;
  }
  for (Eigen::Index j = 0; j < xs.cols(); ++j) {
    e.log_q(j) = log_add_exp(log_one_minus_lambda_ + kde_log_density(*particles_, kernel_, xs.col(j)),
                             log_lambda_ + e.log_safe(j));
  }
  return e;
}

void SafeKdeProposal::sample_unchecked(Eigen::Ref<Points> out, Rng& rng) const {
  std::bernoulli_distribution from_safe(lambda_);
  if (lambda_ >= 1.0) {
    out = safe_->sample(static_cast<std::size_t>(out.cols()), rng);
    return;
  }
  const Vector& w = particles_->weights();
  std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
  std::normal_distribution<double> normal(0.0, 1.0);
  const Points& centers = particles_->points();
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    if (from_safe(rng)) {
      out.col(j) = safe_->sample(1, rng).col(0);
      continue;
    }
    const std::size_t c = pick(rng);
    const double h = particles_->bandwidth_of(c);
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
      out(i, j) = centers(i, static_cast<Eigen::Index>(c)) + h * normal(rng);
    }
  }
}

// ---------------------------------------------------------------------------

EstimateWeights parse_estimate_weights(std::string_view s) {
  if (s == "regularized") return EstimateWeights::regularized;
  if (s == "plain") return EstimateWeights::plain;
  throw InputError("unknown estimate weighting '" + std::string(s) + "'");
}

std::string_view to_string(EstimateWeights w) noexcept {
  return w == EstimateWeights::regularized ? "regularized" : "plain";
}

namespace {

struct BatchResult {
  double eta;
  double batch_ess;
  double safe_margin;
  double max_regularized_weight;
  double proposal_lambda;
};

/// Weight a fresh batch drawn from the current proposal and append it.
BatchResult absorb_batch(SraisState& state, const SraisConfig& config, const Density& target,
                         std::size_t batch_size, std::size_t batch_index) {
  const Points batch = state.proposal->sample(batch_size, state.rng);

  Vector log_q, log_safe;
  if (const auto* kde = dynamic_cast<const SafeKdeProposal*>(state.proposal.get())) {
    auto e = kde->evaluate(batch);
    log_q = std::move(e.log_q);
    log_safe = std::move(e.log_safe);
  } else {
    log_q = state.proposal->log_densities(batch);
    log_safe = state.safe.get() == state.proposal.get() ? log_q : state.safe->log_densities(batch);
  }
  const Vector log_f = target.log_densities(batch);

  Vector log_w(batch.cols());
  for (Eigen::Index j = 0; j < batch.cols(); ++j) {
    if (!std::isfinite(log_q(j))) {
      throw InvariantViolation("proposal density is not finite at its own sample");
    }
    if (std::isnan(log_f(j)) || log_f(j) == std::numeric_limits<double>::infinity()) {
      throw InputError("target log-density must be finite or -inf");
    }
    log_w(j) = log_f(j) == kNegInf ? kNegInf : log_f(j) - log_q(j);
  }

  BatchResult r{};
  r.proposal_lambda = state.lambda;
  const double lse = log_sum_exp(log_w);
  r.batch_ess = lse == kNegInf ? 0.0 : effective_sample_size((log_w.array() - lse).exp().matrix());

  const auto& policy = config.schedule.eta;
  if (policy.kind == EtaPolicyKind::rar) {
    if (lse == kNegInf) {
      throw DegenerateWeightsError("every weight in batch " + std::to_string(batch_index) +
                                   " is zero; the adaptive exponent is undefined");
    }
    r.eta = rar_eta(BatchWeights::from_log_weights(log_w), policy.alpha);
  } else {
    r.eta = config.schedule.eta_at(batch_index);
  }

  if (r.batch_ess < kCollapsedBatchEss) {
    if (++state.collapsed_batches >= kMaxCollapsedBatches) {
      throw DegenerateWeightsError("batch weights collapsed onto a single particle for " +
                                   std::to_string(state.collapsed_batches) +
                                   " consecutive iterations");
    }
  } else {
    state.collapsed_batches = 0;
  }

  const double log_lambda = std::log(state.lambda);
  r.safe_margin = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < batch.cols(); ++j) {
    r.safe_margin = std::min(r.safe_margin, log_q(j) - log_lambda - log_safe(j));
  }

  state.store.append(batch, log_w, r.eta, batch_index);
  if (!target.normalized()) {
    state.log_scale = log_sum_exp(state.store.log_weights()) -
                      std::log(static_cast<double>(state.store.size()));
    if (!std::isfinite(state.log_scale)) state.log_scale = 0.0;
  }
  double max_w = 0.0;
  for (Eigen::Index j = 0; j < log_w.size(); ++j) {
    if (log_w(j) != kNegInf) max_w = std::max(max_w, std::exp(r.eta * (log_w(j) - state.log_scale)));
  }
  r.max_regularized_weight = max_w;
  return r;
}

/// Build q_{k+1} from the whole store. Returns the regularized normalized weights.
Vector rebuild_proposal(SraisState& state, const SraisConfig& config, std::size_t first_new) {
  const std::size_t k = state.iteration + 1;
  const std::size_t n = state.store.size();
  const std::size_t d = state.store.dim();
  const std::size_t ell = subsample_size(n, config.subsample_rule);
  state.lambda = config.schedule.lambda_at(k, ell, d);
  state.h = config.schedule.bandwidth_at(k, ell, d);
  state.store.set_bandwidth_from(first_new, state.h);

  Vector w = regularized_normalized_weights(state.store, state.log_scale);
  if (state.lambda >= 1.0) {
    state.proposal = std::make_shared<SafeKdeProposal>(std::nullopt, 1.0, state.safe);
    return w;
  }
  WeightedParticles particles(state.store.points(), w, state.h);
  if (config.per_particle_bandwidth) particles.with_point_bandwidths(state.store.bandwidths());
  if (ell < n) particles = subsample(particles, ell, state.rng, config.subsample_mode);
  state.proposal = std::make_shared<SafeKdeProposal>(std::move(particles), state.lambda, state.safe);
  return w;
}

void fill_diagnostics(IterationDiagnostics& diag, const SraisState& state, const BatchResult& b,
                      const Vector& w) {
  diag.iteration = state.iteration;
  diag.eta = b.eta;
  diag.batch_ess = b.batch_ess;
  diag.lambda = state.lambda;
  diag.h = state.h;
  diag.n_particles = state.store.size();
  diag.ess = effective_sample_size(w);
  diag.d_n = std::exp(log_mean_regularized_weight(state.store, state.log_scale));
  diag.safe_margin = b.safe_margin;
  diag.max_regularized_weight = b.max_regularized_weight;
  diag.proposal_lambda = b.proposal_lambda;
}

void validate_sampler_config(const SraisConfig& config) {
  if (config.n0 == 0) throw InputError("initial sample size must be at least 1");
  if (config.batch == 0) throw InputError("batch size must be at least 1");
  if (config.schedule.eta.kind == EtaPolicyKind::rar) {
    if (config.batch < 2 || config.n0 < 2) {
      throw InputError("the adaptive exponent needs batches of at least two particles");
    }
    if (!(config.schedule.eta.alpha >= 0.0 && config.schedule.eta.alpha <= 1.0)) {
      throw InputError("alpha must lie in [0, 1]");
    }
  }
}

}  // namespace

SraisState srais_initialize(const SraisConfig& config, const Density& target, DensityPtr safe,
                            Rng rng, IterationDiagnostics* diagnostics) {
  validate_sampler_config(config);
  if (!safe) throw InputError("safe density is required");
  if (safe->dim() != target.dim()) throw InputError("safe density and target differ in dimension");
  SraisState state{ParticleStore(target.dim()), safe, safe, 0, 1.0, 1.0, 0.0, 0, std::move(rng)};
  const BatchResult b = absorb_batch(state, config, target, config.n0, 0);
  const Vector w = rebuild_proposal(state, config, 0);
  if (diagnostics) fill_diagnostics(*diagnostics, state, b, w);
  return state;
}

IterationDiagnostics srais_step(SraisState& state, const SraisConfig& config, const Density& target) {
  if (!state.proposal) throw InputError("state has no proposal; initialize it first");
  const std::size_t first_new = state.store.size();
  const BatchResult b = absorb_batch(state, config, target, config.batch, state.iteration + 1);
  ++state.iteration;
  const Vector w = rebuild_proposal(state, config, first_new);
  IterationDiagnostics diag;
  fill_diagnostics(diag, state, b, w);
  return diag;
}

Vector estimate_weights(const SraisState& state, EstimateWeights mode) {
  if (mode == EstimateWeights::regularized) {
    return regularized_normalized_weights(state.store, state.log_scale);
  }
  const Vector lw = state.store.log_weights();
  const double lse = log_sum_exp(lw);
  if (lse == kNegInf) throw DegenerateWeightsError("every importance weight is zero");
  return (lw.array() - lse).exp().matrix();
}

std::vector<TraceRow> srais_run(const SraisConfig& config, const Density& target, DensityPtr safe,
                                Rng rng, const std::optional<Vector>& true_mean,
                                const TraceObserver& observer) {
  using Clock = std::chrono::steady_clock;
  std::vector<TraceRow> rows;
  rows.reserve(config.iterations + 1);

  auto finish_row = [&](const SraisState& state, TraceRow& row, Clock::time_point t0) {
    const Vector w = estimate_weights(state, config.estimate_weights);
    row.estimate = state.store.points() * w;
    if (true_mean) row.squared_error = squared_error(row.estimate, *true_mean);
    if (observer) observer(state, row);
    row.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  };

  auto t0 = Clock::now();
  TraceRow first;
  SraisState state = srais_initialize(config, target, std::move(safe), std::move(rng), &first.diag);
  finish_row(state, first, t0);
  rows.push_back(std::move(first));

  for (std::size_t k = 1; k <= config.iterations; ++k) {
    t0 = Clock::now();
    TraceRow row;
    row.diag = srais_step(state, config, target);
    finish_row(state, row, t0);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace srais
