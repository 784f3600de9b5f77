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


#ifndef SRAIS_TESTS_GENERATORS_HPP
#define SRAIS_TESTS_GENERATORS_HPP

#include <srais/numeric.hpp>
#include <srais/random.hpp>

#include <cstdint>
#include <random>

// Seeded generators for property tests. Each case gets its own stream so a
// failing case can be replayed from its index alone.
namespace gen {

inline srais::Rng stream(std::uint64_t suite, std::uint64_t index) {
  return srais::Rng(srais::derive_seed(suite, index));
}

inline std::size_t size_in(srais::Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline double uniform(srais::Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline srais::Vector normal_vector(srais::Rng& rng, std::size_t n, double sd = 1.0) {
  std::normal_distribution<double> z(0.0, sd);
  srais::Vector v(static_cast<Eigen::Index>(n));
  for (auto& x : v) x = z(rng);
  return v;
}

inline srais::Points normal_points(srais::Rng& rng, std::size_t dim, std::size_t n, double sd = 1.0) {
  std::normal_distribution<double> z(0.0, sd);
  srais::Points p(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(n));
  for (Eigen::Index j = 0; j < p.cols(); ++j) {
    for (Eigen::Index i = 0; i < p.rows(); ++i) p(i, j) = z(rng);
  }
  return p;
}

/// Log-weights with a random spread; some entries may be -inf, never all.
inline srais::Vector log_weights(srais::Rng& rng, std::size_t n, bool allow_zero = true) {
  const double spread = uniform(rng, 0.0, 10.0);
  const bool sparse = allow_zero && uniform(rng, 0.0, 1.0) < 0.3;
  srais::Vector lw = normal_vector(rng, n, spread);
  if (sparse) {
    for (auto& x : lw) {
      if (uniform(rng, 0.0, 1.0) < 0.4) x = srais::kNegInf;
    }
    if (lw.maxCoeff() == srais::kNegInf) lw(0) = 0.0;
  }
  return lw;
}

/// Normalized, strictly positive weights (exponential draws to a random power).
inline srais::Vector positive_weights(srais::Rng& rng, std::size_t n) {
  std::exponential_distribution<double> e(1.0);
  const double p = uniform(rng, 0.25, 1.0);
  srais::Vector w(static_cast<Eigen::Index>(n));
  for (auto& x : w) x = std::pow(e(rng), p);
  return w / w.sum();
}

}  // namespace gen

#endif  // SRAIS_TESTS_GENERATORS_HPP
