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

#ifndef SRAIS_SUITE_HPP
#define SRAIS_SUITE_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

/**
 * \file
 * \brief Seeded statistical batteries for every module, runnable from the CLI.
 */

namespace srais::suite {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// Mirror-descent TV bound at every step for the constant, 1/k and 1/sqrt(k) schedules.
CheckResult contraction_bound(std::size_t steps = 50);

/// log tv_n against n^(1 - beta) for eta_k = 0.5 / k^0.5, n in [5, 50]: slope < 0, R^2 >= 0.9.
CheckResult emd_rate();

/// Grid-oracle invariants: normalization, fixed point, TV symmetry and triangle inequality.
CheckResult emd_invariants(std::uint64_t seed);

/// Regularized weights of a Student-t proposal for a Gaussian target.
/**
 * For each eta in {0.25, 0.5, 0.75}: mean(W^eta) <= 1 + 3 stderr and
 * var(W^eta) <= var(W); also |mean(W) - 1| <= 5 stderr.
 */
CheckResult weight_moments(std::uint64_t seed, std::size_t draws = 100000);

/// Range, monotonicity in alpha and the exact uniform / one-hot cases of the adaptive exponent.
CheckResult rar_properties(std::uint64_t seed, std::size_t cases = 100);

/// Limits alpha -> 0 and alpha -> 1, permutation invariance, and eta -> 1 when q = f.
CheckResult rar_limits(std::uint64_t seed);

struct DnStudy {
  std::vector<double> n;         ///< particle counts
  std::vector<double> rms_error; ///< root mean square of D_n - 1 over replicates
  double slope = 0.0;            ///< of log rms_error against log n
  double r_squared = 0.0;
  double final_error = 0.0;      ///< rms_error at the largest n
};

/// D_n - 1 with eta = 1 when the safe density equals the target (N(0, 1) in 1D).
/**
 * lambda follows the default decreasing schedule so that the proposals differ
 * from the target; with lambda = 1 every weight is exactly 1.
 */
DnStudy dn_convergence_study(std::uint64_t seed, std::size_t replicates = 64);
CheckResult dn_convergence(std::uint64_t seed);

/// Sampler run on a Gaussian target with a Student-t safe density.
/**
 * Checks log q_k >= log lambda_k + log q0 - 1e-9 at every sampled point, and
 * W^eta <= 1 / (c lambda_k) with c = min q0 / f from a grid search.
 */
CheckResult safe_bounds(std::uint64_t seed);

/// Kernel estimate: permutation and weight-scale invariance, h^-d growth at a particle.
CheckResult kde_invariants(std::uint64_t seed);

/// SNIS rescaling invariance, constant integrand, and IS = SNIS when q = f.
CheckResult estimator_invariants(std::uint64_t seed);

/// Quadrature normalization (d <= 2), Student-t to Gaussian limit, and the logistic gradient.
CheckResult density_invariants(std::uint64_t seed);

/// Every battery above.
std::vector<CheckResult> run_all(std::uint64_t seed,
                                 const std::function<void(const CheckResult&)>& on_result = {});

}  // namespace srais::suite

#endif  // SRAIS_SUITE_HPP
