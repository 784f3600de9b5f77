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

#include <srais/emd.hpp>
#include <srais/error.hpp>

#include <cmath>
#include <sstream>
#include <string>

namespace srais::emd {

namespace {

constexpr std::size_t kMinPointsPerAxis = 64;
constexpr std::size_t kMax2dPointsPerAxis = 512;

void validate(const Grid& g) {
  if (g.dims != 1 && g.dims != 2) throw InputError("grid must be 1D or 2D");
  if (!(g.hi > g.lo)) throw InputError("grid upper bound must exceed lower bound");
  if (g.points < kMinPointsPerAxis) throw InputError("grid needs at least 64 points per axis");
  if (g.dims == 2 && g.points > kMax2dPointsPerAxis) {
    throw InputError("2D grids are capped at 512 points per axis");
  }
}

Vector axis_weights(const Grid& g) {
  Vector w = Vector::Constant(static_cast<Eigen::Index>(g.points), g.step());
  w(0) *= 0.5;
  w(w.size() - 1) *= 0.5;
  return w;
}

Vector trapezoid_weights(const Grid& g) {
  const Vector a = axis_weights(g);
  if (g.dims == 1) return a;
  Vector w(static_cast<Eigen::Index>(g.size()));
  const auto n = static_cast<Eigen::Index>(g.points);
  for (Eigen::Index i = 0; i < n; ++i) w.segment(i * n, n) = a(i) * a;
  return w;
}

void require_same_grid(const GridDensity& a, const GridDensity& b) {
  if (!(a.grid() == b.grid())) throw InputError("densities live on different grids");
}

GridDensity from_logs(const Grid& grid, Vector logs) {
  const double m = logs.maxCoeff();
  if (!std::isfinite(m)) throw InputError("log-density must be finite somewhere on the grid");
  Vector v = (logs.array() - m).exp();
  auto out = GridDensity::from_values(grid, std::move(v));
  out.normalize();
  return out;
}

}  // namespace

GridDensity::GridDensity(const Grid& grid, Vector values)
    : grid_(grid), values_(std::move(values)), quad_weights_(trapezoid_weights(grid)) {}

GridDensity GridDensity::from_values(const Grid& grid, Vector values) {
  validate(grid);
  if (static_cast<std::size_t>(values.size()) != grid.size()) {
    throw InputError("value count does not match the grid");
  }
  if ((values.array() < 0.0).any() || !values.allFinite()) {
    throw InputError("grid density values must be finite and nonnegative");
  }
  return GridDensity(grid, std::move(values));
}

GridDensity GridDensity::from_log(const Grid& grid, const LogFn1& log_fn) {
  validate(grid);
  if (grid.dims != 1) throw InputError("1D log-density given for a 2D grid");
  Vector logs(static_cast<Eigen::Index>(grid.points));
  for (std::size_t i = 0; i < grid.points; ++i) {
    logs(static_cast<Eigen::Index>(i)) = log_fn(grid.coordinate(i));
  }
  return from_logs(grid, std::move(logs));
}

GridDensity GridDensity::from_log(const Grid& grid, const LogFn2& log_fn) {
  validate(grid);
  if (grid.dims != 2) throw InputError("2D log-density given for a 1D grid");
  Vector logs(static_cast<Eigen::Index>(grid.size()));
  for (std::size_t i = 0; i < grid.points; ++i) {
    for (std::size_t j = 0; j < grid.points; ++j) {
      logs(static_cast<Eigen::Index>(i * grid.points + j)) =
          log_fn(grid.coordinate(i), grid.coordinate(j));
    }
  }
  return from_logs(grid, std::move(logs));
}

double GridDensity::integrate(const Vector& v) const {
  if (v.size() != quad_weights_.size()) throw InputError("integrand does not match the grid");
  return quad_weights_.dot(v);
}

GridDensity& GridDensity::normalize() {
  const double z = mass();
  if (!(z > 0.0) || !std::isfinite(z)) throw InputError("cannot normalize a density with zero mass");
  values_ /= z;
  return *this;
}

// ---------------------------------------------------------------------------

GridDensity emd_step(const GridDensity& q, const GridDensity& f, double eta) {
  require_same_grid(q, f);
  if (!(eta >= 0.0 && eta <= 1.0)) throw InputError("learning rate must lie in [0, 1]");
  const Vector log_f = f.values().array().max(kDensityFloor).log();
  const Vector log_q = q.values().array().max(kDensityFloor).log();
  return from_logs(q.grid(), eta * log_f + (1.0 - eta) * log_q);
}

double tv_distance(const GridDensity& p, const GridDensity& q) {
  require_same_grid(p, q);
  return p.integrate((p.values() - q.values()).cwiseAbs());
}

KlResult kl_divergence(const GridDensity& p, const GridDensity& q) {
  require_same_grid(p, q);
  const Vector& pv = p.values();
  const Vector& qv = q.values();
  Vector integrand = Vector::Zero(pv.size());
  for (Eigen::Index i = 0; i < pv.size(); ++i) {
    if (pv(i) <= kDensityFloor) continue;
    if (qv(i) <= kDensityFloor) {
      return {std::numeric_limits<double>::infinity(), true};
    }
    integrand(i) = pv(i) * (std::log(pv(i)) - std::log(qv(i)));
  }
  return {p.integrate(integrand), false};
}

// ---------------------------------------------------------------------------

double EtaSchedule::at(std::size_t k) const {
  if (k == 0) throw InputError("learning-rate schedules start at k = 1");
  const auto kk = static_cast<double>(k);
  switch (kind) {
    case RateSchedule::constant: return c;
    case RateSchedule::harmonic: return c / kk;
    case RateSchedule::power: return c / std::pow(kk, beta);
  }
  return c;
}

std::vector<double> EtaSchedule::take(std::size_t n) const {
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t k = 1; k <= n; ++k) out.push_back(at(k));
  return out;
}

RateSchedule parse_rate_schedule(std::string_view s) {
  if (s == "constant") return RateSchedule::constant;
  if (s == "harmonic") return RateSchedule::harmonic;
  if (s == "power" || s == "sqrt") return RateSchedule::power;
  throw InputError("unknown learning-rate schedule '" + std::string(s) + "'");
}

std::string_view to_string(RateSchedule s) noexcept {
  switch (s) {
    case RateSchedule::constant: return "constant";
    case RateSchedule::harmonic: return "harmonic";
    case RateSchedule::power: return "power";
  }
  return "unknown";
}

std::vector<ContractionRow> contraction_report(const GridDensity& f, const GridDensity& q1,
                                     const std::vector<double>& etas) {
  require_same_grid(f, q1);
  const KlResult kl0 = kl_divergence(f, q1);
  if (kl0.support_violation) throw InputError("KL(f || q1) is infinite on this grid");

  std::vector<ContractionRow> rows;
  rows.reserve(etas.size());
  GridDensity q = q1;
  double product = 1.0;
  for (std::size_t k = 1; k <= etas.size(); ++k) {
    const double eta = etas[k - 1];
    if (!(eta > 0.0 && eta <= 1.0)) throw InputError("learning rates must lie in (0, 1]");
    q = emd_step(q, f, eta);
    product *= (1.0 - eta);
    const double bound = std::sqrt(2.0 * kl0.value * product);
    const double tv = tv_distance(f, q);
    rows.push_back({k, eta, tv, kl_divergence(f, q).value, bound, bound - tv});
  }
  return rows;
}

std::vector<ContractionRow> verify_contraction(const GridDensity& f, const GridDensity& q1,
                                     const std::vector<double>& etas) {
  auto rows = contraction_report(f, q1, etas);
  double previous_kl = kl_divergence(f, q1).value;
  for (const auto& r : rows) {
    if (r.tv > r.bound + kBoundTolerance) {
      std::ostringstream msg;
      msg << "TV bound violated at step " << r.step << ": tv=" << r.tv << " bound=" << r.bound;
      throw VerificationFailure(msg.str());
    }
    if (r.kl > previous_kl + kKlMonotoneTolerance) {
      std::ostringstream msg;
      msg << "KL increased at step " << r.step << ": " << previous_kl << " -> " << r.kl;
      throw VerificationFailure(msg.str());
    }
    previous_kl = r.kl;
  }
  return rows;
}

std::vector<double> averaged_iterate_kl(const GridDensity& f, const GridDensity& q1,
                                        const std::vector<double>& etas) {
  require_same_grid(f, q1);
  std::vector<double> out;
  out.reserve(etas.size());
  GridDensity q = q1;
  Vector weighted_sum = Vector::Zero(q1.values().size());
  double eta_sum = 0.0;
  for (double eta : etas) {
    weighted_sum += eta * q.values();
    eta_sum += eta;
    auto average = GridDensity::from_values(q1.grid(), weighted_sum / eta_sum);
    out.push_back(kl_divergence(average, f).value);
    q = emd_step(q, f, eta);
  }
  return out;
}

}  // namespace srais::emd
