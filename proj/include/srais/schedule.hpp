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

#ifndef SRAIS_SCHEDULE_HPP
#define SRAIS_SCHEDULE_HPP

#include <srais/density.hpp>
#include <srais/kernel.hpp>
#include <srais/random.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace srais {

/// How the safe-mixture weight lambda_k evolves.
enum class LambdaPolicy {
  power,      ///< lambda0 * k^(-a)
  kde_power,  ///< lambda0 * ell_k^(-2 / (4 + d)), ell_k the KDE particle count
  constant,   ///< lambda0
};

/// How the kernel bandwidth h_k evolves.
enum class BandwidthPolicy {
  power,      ///< h0 * k^(-1 / (4 + d))
  kde_power,  ///< h0 * ell_k^(-1 / (4 + d))
  constant,   ///< h0
};

enum class EtaPolicyKind { constant, sequence, rar };

/// Source of the regularization exponent attached to each batch.
struct EtaPolicy {
  EtaPolicyKind kind = EtaPolicyKind::rar;
  double value = 1.0;            ///< constant policy
  std::vector<double> sequence;  ///< sequence policy; entry b is used for batch b (0 = initial)
  double alpha = 0.5;            ///< rar policy

  static EtaPolicy constant(double v) { return {EtaPolicyKind::constant, v, {}, 0.5}; }
  static EtaPolicy fixed(std::vector<double> seq) { return {EtaPolicyKind::sequence, 1.0, std::move(seq), 0.5}; }
  static EtaPolicy rar(double a) { return {EtaPolicyKind::rar, 1.0, {}, a}; }
};

LambdaPolicy parse_lambda_policy(std::string_view s);
BandwidthPolicy parse_bandwidth_policy(std::string_view s);
EtaPolicyKind parse_eta_policy(std::string_view s);
std::string_view to_string(LambdaPolicy p) noexcept;
std::string_view to_string(BandwidthPolicy p) noexcept;
std::string_view to_string(EtaPolicyKind p) noexcept;

struct Schedule {
  LambdaPolicy lambda_policy = LambdaPolicy::kde_power;
  double lambda0 = 0.5;
  double lambda_exponent = 0.5;  ///< `a` in the power policy
  BandwidthPolicy h_policy = BandwidthPolicy::kde_power;
  double h0 = 1.0;
  EtaPolicy eta;

  /// lambda_k for proposal index k >= 1 built on `ell` particles in dimension `dim`.
  double lambda_at(std::size_t k, std::size_t ell, std::size_t dim) const;
  double bandwidth_at(std::size_t k, std::size_t ell, std::size_t dim) const;
  /// Exponent for batch `batch` (0 for the initial draw) under a non-adaptive policy.
  double eta_at(std::size_t batch) const;
};

/// Hyperparameter values over a planned horizon, index i holding k = i + 1.
struct PlannedSchedule {
  std::vector<double> lambda;
  std::vector<double> h;
  std::vector<double> eta;  ///< empty under the adaptive policy
  std::size_t dim = 1;
};

/// Tabulate lambda_k, h_k (k = 1..iterations+1) and the fixed etas of a run.
PlannedSchedule plan_schedule(const Schedule& s, std::size_t n0, std::size_t batch,
                              std::size_t iterations, std::size_t dim, SubsampleRule rule);

struct AssumptionReport {
  std::vector<std::string> errors;    ///< hard failures: lambda outside (0, 1], h <= 0, eta outside (0, 1]
  std::vector<std::string> warnings;  ///< asymptotic conditions not met over the horizon
  bool lambda_ok = true;              ///< lambda_k -> 0 and log(k)/(k lambda_k) -> 0
  bool bandwidth_ok = true;           ///< h_k -> 0 and log(k)/(k h_k^d lambda_k) -> 0
  bool eta_ok = true;                 ///< eta_k -> 1 with the gap conditions; true when eta is adaptive
  std::optional<double> safe_constant;  ///< empirical c with q0 >= c f on the probe set

  bool valid() const noexcept { return errors.empty(); }
};

/// Numerical check of the sequence conditions over the final half of the horizon.
/**
 * Limits are judged from the tail: a quantity "tends to zero" when it is
 * nonincreasing in absolute value over the final half and strictly smaller
 * at the end than at the midpoint (or identically zero).
 */
AssumptionReport validate_assumptions(const PlannedSchedule& plan);

/// Probe q0 >= c f by sampling from q0 (and f when possible); fills `safe_constant`.
/**
 * Adds a warning when the empirical log-ratio is -inf somewhere, i.e. when q0
 * fails to dominate f on the probe set.
 */
void check_safe_domination(AssumptionReport& report, const Density& safe, const Density& target,
                           Rng& rng, std::size_t probes = 2000);

}  // namespace srais

#endif  // SRAIS_SCHEDULE_HPP
