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
#include <srais/schedule.hpp>

#include <cmath>
#include <sstream>
#include <string>

namespace srais {

LambdaPolicy parse_lambda_policy(std::string_view s) {
  if (s == "power") return LambdaPolicy::power;
  if (s == "kde_power") return LambdaPolicy::kde_power;
  if (s == "constant") return LambdaPolicy::constant;
  throw InputError("unknown lambda policy '" + std::string(s) + "'");
}

BandwidthPolicy parse_bandwidth_policy(std::string_view s) {
  if (s == "power") return BandwidthPolicy::power;
  if (s == "kde_power") return BandwidthPolicy::kde_power;
  if (s == "constant") return BandwidthPolicy::constant;
  throw InputError("unknown bandwidth policy '" + std::string(s) + "'");
}

EtaPolicyKind parse_eta_policy(std::string_view s) {
  if (s == "constant") return EtaPolicyKind::constant;
  if (s == "sequence" || s == "fixed_sequence") return EtaPolicyKind::sequence;
  if (s == "rar") return EtaPolicyKind::rar;
  throw InputError("unknown eta policy '" + std::string(s) + "'");
}

std::string_view to_string(LambdaPolicy p) noexcept {
  switch (p) {
    case LambdaPolicy::power: return "power";
    case LambdaPolicy::kde_power: return "kde_power";
    case LambdaPolicy::constant: return "constant";
  }
  return "unknown";
}

std::string_view to_string(BandwidthPolicy p) noexcept {
  switch (p) {
    case BandwidthPolicy::power: return "power";
    case BandwidthPolicy::kde_power: return "kde_power";
    case BandwidthPolicy::constant: return "constant";
  }
  return "unknown";
}

std::string_view to_string(EtaPolicyKind p) noexcept {
  switch (p) {
    case EtaPolicyKind::constant: return "constant";
    case EtaPolicyKind::sequence: return "sequence";
    case EtaPolicyKind::rar: return "rar";
  }
  return "unknown";
}

double Schedule::lambda_at(std::size_t k, std::size_t ell, std::size_t dim) const {
  const double d = static_cast<double>(dim);
  switch (lambda_policy) {
    case LambdaPolicy::power:
      return lambda0 * std::pow(static_cast<double>(k), -lambda_exponent);
    case LambdaPolicy::kde_power:
      return lambda0 * std::pow(static_cast<double>(ell), -2.0 / (4.0 + d));
    case LambdaPolicy::constant:
      return lambda0;
  }
  return lambda0;
}

double Schedule::bandwidth_at(std::size_t k, std::size_t ell, std::size_t dim) const {
  const double d = static_cast<double>(dim);
  switch (h_policy) {
    case BandwidthPolicy::power:
      return h0 * std::pow(static_cast<double>(k), -1.0 / (4.0 + d));
    case BandwidthPolicy::kde_power:
      return h0 * std::pow(static_cast<double>(ell), -1.0 / (4.0 + d));
    case BandwidthPolicy::constant:
      return h0;
  }
  return h0;
}

double Schedule::eta_at(std::size_t batch) const {
  switch (eta.kind) {
    case EtaPolicyKind::constant: return eta.value;
    case EtaPolicyKind::sequence:
      if (batch >= eta.sequence.size()) {
        throw InputError("eta sequence shorter than the run (needs entry " + std::to_string(batch) + ")");
      }
      return eta.sequence[batch];
    case EtaPolicyKind::rar:
      throw InputError("the adaptive eta policy has no precomputed values");
  }
  return eta.value;
}

PlannedSchedule plan_schedule(const Schedule& s, std::size_t n0, std::size_t batch,
                              std::size_t iterations, std::size_t dim, SubsampleRule rule) {
  PlannedSchedule plan;
  plan.dim = dim;
  for (std::size_t k = 1; k <= iterations + 1; ++k) {
    const std::size_t n = n0 + (k - 1) * batch;
    const std::size_t ell = subsample_size(n, rule);
    plan.lambda.push_back(s.lambda_at(k, ell, dim));
    plan.h.push_back(s.bandwidth_at(k, ell, dim));
  }
  if (s.eta.kind == EtaPolicyKind::constant) {
    plan.eta.assign(iterations + 1, s.eta.value);
  } else if (s.eta.kind == EtaPolicyKind::sequence) {
    plan.eta = s.eta.sequence;
  }
  return plan;
}

// ---------------------------------------------------------------------------

namespace {

constexpr double kMonotoneSlack = 1e-12;

bool tends_to_zero(const std::vector<double>& x) {
  if (x.size() < 2) return false;
  const std::size_t start = (x.size() - 1) / 2;
  bool all_zero = true;
  for (std::size_t i = start; i < x.size(); ++i) {
    if (x[i] != 0.0) all_zero = false;
    if (i > start && std::abs(x[i]) > std::abs(x[i - 1]) + kMonotoneSlack) return false;
  }
  return all_zero || std::abs(x.back()) < std::abs(x[start]);
}

bool nonincreasing(const std::vector<double>& x) {
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (x[i] > x[i - 1] + kMonotoneSlack) return false;
  }
  return true;
}

std::string describe(const char* what, std::size_t k, double v) {
  std::ostringstream s;
  s << what << " at k=" << k << " (value " << v << ")";
  return s.str();
}

}  // namespace

AssumptionReport validate_assumptions(const PlannedSchedule& plan) {
  AssumptionReport r;
  const std::size_t n = plan.lambda.size();
  if (plan.h.size() != n) throw InputError("lambda and h horizons differ");
  if (n == 0) throw InputError("empty horizon");

  for (std::size_t i = 0; i < n; ++i) {
    if (!(plan.lambda[i] > 0.0 && plan.lambda[i] <= 1.0)) {
      r.errors.push_back(describe("lambda not in (0,1]", i + 1, plan.lambda[i]));
      break;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(plan.h[i] > 0.0) || !std::isfinite(plan.h[i])) {
      r.errors.push_back(describe("bandwidth not positive", i + 1, plan.h[i]));
      break;
    }
  }
  for (std::size_t i = 0; i < plan.eta.size(); ++i) {
    if (!(plan.eta[i] > 0.0 && plan.eta[i] <= 1.0)) {
      r.errors.push_back(describe("eta not in (0,1]", i + 1, plan.eta[i]));
      break;
    }
  }
  if (!nonincreasing(plan.lambda)) r.errors.push_back("lambda sequence is not nonincreasing");
  if (!nonincreasing(plan.h)) r.errors.push_back("bandwidth sequence is not nonincreasing");
  if (!r.errors.empty()) {
    r.lambda_ok = r.bandwidth_ok = r.eta_ok = false;
    return r;
  }

  const double d = static_cast<double>(plan.dim);
  std::vector<double> lam_ratio, h_ratio;
  for (std::size_t i = 0; i < n; ++i) {
    const double k = static_cast<double>(i + 1);
    lam_ratio.push_back(std::log(k) / (k * plan.lambda[i]));
    h_ratio.push_back(std::log(k) / (k * std::pow(plan.h[i], d) * plan.lambda[i]));
  }

  if (!tends_to_zero(plan.lambda)) {
    r.lambda_ok = false;
    r.warnings.push_back("lambda schedule: lambda_k does not tend to 0 over the horizon");
  }
  if (!tends_to_zero(lam_ratio)) {
    r.lambda_ok = false;
    r.warnings.push_back("lambda schedule: log(k)/(k lambda_k) is not decreasing over the final half");
  }
  if (!tends_to_zero(plan.h)) {
    r.bandwidth_ok = false;
    r.warnings.push_back("bandwidth schedule: h_k does not tend to 0 over the horizon");
  }
  if (!tends_to_zero(h_ratio)) {
    r.bandwidth_ok = false;
    r.warnings.push_back("bandwidth schedule: log(k)/(k h_k^d lambda_k) is not decreasing over the final half");
  }

  if (!plan.eta.empty()) {
    const std::size_t m = std::min(plan.eta.size(), n);
    std::vector<double> gap, gap_h, gap_lambda;
    for (std::size_t i = 0; i < m; ++i) {
      const double g = 1.0 - plan.eta[i];
      gap.push_back(g);
      gap_h.push_back(g * std::log(plan.h[i]));
      // lambda_{k-1}; for k = 1 use lambda_1
      gap_lambda.push_back(g * std::log(plan.lambda[i == 0 ? 0 : i - 1]));
    }
    if (!tends_to_zero(gap)) {
      r.eta_ok = false;
      r.warnings.push_back("eta schedule: eta_k does not tend to 1 over the horizon");
    }
    if (!tends_to_zero(gap_h)) {
      r.eta_ok = false;
      r.warnings.push_back("eta schedule: (1 - eta_k) log h_k does not tend to 0");
    }
    if (!tends_to_zero(gap_lambda)) {
      r.eta_ok = false;
      r.warnings.push_back("eta schedule: (1 - eta_k) log lambda_{k-1} does not tend to 0");
    }
  }
  return r;
}

void check_safe_domination(AssumptionReport& report, const Density& safe, const Density& target,
                           Rng& rng, std::size_t probes) {
  if (safe.dim() != target.dim()) throw InputError("safe density and target differ in dimension");
  Points probe = safe.sample(probes, rng);
  if (target.can_sample()) {
    Points extra = target.sample(probes, rng);
    Points both(probe.rows(), probe.cols() + extra.cols());
    both << probe, extra;
    probe = std::move(both);
  }
  double min_log_ratio = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < probe.cols(); ++j) {
    const double lf = target.log_density(probe.col(j));
    if (lf == kNegInf) continue;
    min_log_ratio = std::min(min_log_ratio, safe.log_density(probe.col(j)) - lf);
  }
  if (min_log_ratio == kNegInf) {
    report.warnings.push_back("safe density: q0 vanishes where the target does not");
    report.safe_constant = 0.0;
  } else if (std::isfinite(min_log_ratio)) {
    report.safe_constant = std::exp(min_log_ratio);
  }
}

}  // namespace srais
