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

#ifndef SRAIS_EMD_HPP
#define SRAIS_EMD_HPP

#include <srais/numeric.hpp>

#include <functional>
#include <string_view>
#include <vector>

/**
 * \file
 * \brief Exact entropic mirror descent q <- f^eta q^(1 - eta) / Z on a 1D or 2D grid.
 *
 * This is a test oracle: it runs the idealized density recursion that the
 * sampler approximates stochastically, so that the KL contraction
 * KL(f || q_{k+1}) <= (1 - eta_k) KL(f || q_k) and the total-variation bound
 * that follows from Pinsker's inequality can be checked numerically.
 */

namespace srais::emd {

/// Uniform lattice on [lo, hi] per axis; 2D grids are tensor products of the same axis.
struct Grid {
  double lo = -20.0;
  double hi = 20.0;
  std::size_t points = 8192;
  std::size_t dims = 1;

  double step() const noexcept { return (hi - lo) / static_cast<double>(points - 1); }
  double coordinate(std::size_t i) const noexcept { return lo + step() * static_cast<double>(i); }
  std::size_t size() const noexcept { return dims == 1 ? points : points * points; }
  bool operator==(const Grid&) const = default;
};

/// Values below this are raised to it before taking logs.
inline constexpr double kDensityFloor = 1e-300;

class GridDensity {
 public:
  using LogFn1 = std::function<double(double)>;
  using LogFn2 = std::function<double(double, double)>;

  /// Tabulate exp(log_fn) on a 1D grid and normalize by trapezoid quadrature.
  static GridDensity from_log(const Grid& grid, const LogFn1& log_fn);
  /// 2D variant; values stored row-major with x as the slow axis.
  static GridDensity from_log(const Grid& grid, const LogFn2& log_fn);
  /// Take raw nonnegative values as-is; call normalize() if needed.
  static GridDensity from_values(const Grid& grid, Vector values);

  const Grid& grid() const noexcept { return grid_; }
  const Vector& values() const noexcept { return values_; }

  /// Trapezoid integral of `v` on this grid.
  double integrate(const Vector& v) const;
  double mass() const { return integrate(values_); }
  GridDensity& normalize();

 private:
  GridDensity(const Grid& grid, Vector values);
  Grid grid_;
  Vector values_;
  Vector quad_weights_;
};

/// One exact mirror-descent step, renormalized by quadrature. `eta` in [0, 1].
GridDensity emd_step(const GridDensity& q, const GridDensity& f, double eta);

/// integral |p - q|, in [0, 2].
double tv_distance(const GridDensity& p, const GridDensity& q);

struct KlResult {
  double value = 0.0;  ///< +inf when the support condition fails
  bool support_violation = false;
};

/// integral p log(p / q). Cells where both sit at the floor are skipped.
KlResult kl_divergence(const GridDensity& p, const GridDensity& q);

enum class RateSchedule { constant, harmonic, power };

/// eta_k = c, c / k or c / k^beta for k >= 1.
struct EtaSchedule {
  RateSchedule kind = RateSchedule::constant;
  double c = 0.5;
  double beta = 0.5;

  double at(std::size_t k) const;
  std::vector<double> take(std::size_t n) const;
};

RateSchedule parse_rate_schedule(std::string_view s);
std::string_view to_string(RateSchedule s) noexcept;

struct ContractionRow {
  std::size_t step;  ///< k; the row describes q_{k+1}
  double eta;
  double tv;
  double kl;     ///< KL(f || q_{k+1})
  double bound;  ///< sqrt(2 KL(f || q_1)) prod_{j<=k} (1 - eta_j)^(1/2)
  double slack;  ///< bound - tv
};

inline constexpr double kBoundTolerance = 1e-6;
inline constexpr double kKlMonotoneTolerance = 1e-8;

/// Run the recursion from q1 with the given etas and tabulate the TV bound per step.
/**
 * Pure reporting: no check is made. Throws InputError when KL(f || q1) is
 * infinite or the grids differ.
 */
std::vector<ContractionRow> contraction_report(const GridDensity& f, const GridDensity& q1,
                                     const std::vector<double>& etas);

/// contraction_report followed by the checks below.
/**
 * Throws VerificationFailure if tv exceeds bound + 1e-6 at any step, or if
 * KL(f || q_k) increases by more than 1e-8. Throws InputError when
 * KL(f || q1) is infinite or the grids differ.
 */
std::vector<ContractionRow> verify_contraction(const GridDensity& f, const GridDensity& q1,
                                     const std::vector<double>& etas);

/// KL(qbar_n || f) for n = 1..etas.size(), with qbar_n the eta-weighted average of q_1..q_n.
std::vector<double> averaged_iterate_kl(const GridDensity& f, const GridDensity& q1,
                                        const std::vector<double>& etas);

}  // namespace srais::emd

#endif  // SRAIS_EMD_HPP
