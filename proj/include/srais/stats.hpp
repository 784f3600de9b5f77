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

#ifndef SRAIS_STATS_HPP
#define SRAIS_STATS_HPP

#include <span>
#include <vector>

namespace srais::stats {

double mean(std::span<const double> x);
/// Unbiased sample variance; zero for fewer than two values.
double variance(std::span<const double> x);
double stddev(std::span<const double> x);

/// Linear-interpolation quantile (type 7) for p in [0, 1]. Input need not be sorted.
double quantile(std::vector<double> x, double p);

/// Least-squares fit y = intercept + slope * x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace srais::stats

#endif  // SRAIS_STATS_HPP
