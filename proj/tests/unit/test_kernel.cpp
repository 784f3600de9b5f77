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


#include "generators.hpp"
#include "oracle_values.hpp"

#include <srais/emd.hpp>
#include <srais/error.hpp>
#include <srais/kernel.hpp>

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

using namespace srais;

TEST_CASE("gaussian kernel values") {
  const Kernel k1{KernelKind::gaussian, 1};
  const Kernel k2{KernelKind::gaussian, 2};
  CHECK(kernel_value(k1, Vector::Zero(1), 1.0) == doctest::Approx(oracle::kKernel1DH1).epsilon(1e-15));
  CHECK(kernel_value(k1, Vector::Zero(1), 2.0) == doctest::Approx(oracle::kKernel1DH2).epsilon(1e-15));
  CHECK(kernel_value(k2, Vector::Zero(2), 1.0) == doctest::Approx(oracle::kKernel2DH1).epsilon(1e-15));
  CHECK(kernel_value(k1, Vector::Zero(1), 1.0) == doctest::Approx(0.398942).epsilon(1e-6));
  CHECK(kernel_value(k1, Vector::Zero(1), 2.0) == doctest::Approx(0.199471).epsilon(1e-6));
  CHECK(kernel_value(k2, Vector::Zero(2), 1.0) == doctest::Approx(0.159155).epsilon(1e-6));
}

TEST_CASE("kernel rejects a nonpositive bandwidth") {
  const Kernel k{KernelKind::gaussian, 1};
  CHECK_THROWS_AS(kernel_value(k, Vector::Zero(1), 0.0), InputError);
  CHECK_THROWS_AS(kernel_value(k, Vector::Zero(1), -1.0), InputError);
  CHECK_THROWS_AS(WeightedParticles(Points::Zero(1, 2), Vector::Ones(2), 0.0), InputError);
}

TEST_CASE("single particle estimate is the kernel itself") {
  const Kernel k{KernelKind::gaussian, 3};
  auto rng = gen::stream(21, 0);
  const Points X = gen::normal_points(rng, 3, 1);
  const WeightedParticles p(X, Vector::Ones(1), 0.7);
  for (int c = 0; c < 10; ++c) {
    const Vector x = gen::normal_vector(rng, 3);
    CHECK(kde_log_density(p, k, x) ==
          doctest::Approx(kernel_log_value(k, x - X.col(0), 0.7)).epsilon(1e-14));
  }
}

TEST_CASE("two equal particles evaluated at their midpoint") {
  const Kernel k{KernelKind::gaussian, 2};
  Points X(2, 2);
  X << -1.0, 2.0, 0.5, 1.5;
  const Vector mid = X.rowwise().mean();
  const WeightedParticles p(X, Vector::Constant(2, 0.5), 1.3);
  const double avg = 0.5 * (kernel_value(k, mid - X.col(0), 1.3) + kernel_value(k, mid - X.col(1), 1.3));
  CHECK(std::exp(kde_log_density(p, k, mid)) == doctest::Approx(avg).epsilon(1e-14));
  CHECK(kernel_value(k, mid - X.col(0), 1.3) == doctest::Approx(kernel_value(k, mid - X.col(1), 1.3)));
}

TEST_CASE("two-point estimate integrates to one") {
  const Kernel k{KernelKind::gaussian, 1};
  Points X(1, 2);
  X << -1.0, 1.0;
  const WeightedParticles p(X, Vector::Constant(2, 0.5), 1.0);
  const emd::Grid g{-12.0, 12.0, 4001, 1};
  Points grid(1, static_cast<Eigen::Index>(g.points));
  for (std::size_t i = 0; i < g.points; ++i) grid(0, static_cast<Eigen::Index>(i)) = g.coordinate(i);
  const Vector vals = kde_log_densities(p, k, grid).array().exp();
  const double mass = emd::GridDensity::from_values(g, vals).mass();
  CHECK(std::abs(mass - oracle::kKdeTwoPointMass) <= 1e-6);
  CHECK(std::abs(mass - 1.0) <= 1e-6);
}

TEST_CASE("subsample size rule") {
  CHECK(subsample_size(400, SubsampleRule::sqrt) == 20);
  CHECK(subsample_size(399, SubsampleRule::sqrt) == 19);
  CHECK(subsample_size(1, SubsampleRule::sqrt) == 1);
  CHECK(subsample_size(40000, SubsampleRule::sqrt) == 200);
  CHECK(subsample_size(400, SubsampleRule::full) == 400);
}

TEST_CASE("subsample edge cases") {
  auto rng = gen::stream(22, 0);
  const Points X = gen::normal_points(rng, 2, 12);
  const Vector w = gen::positive_weights(rng, 12);
  const WeightedParticles p(X, w, 0.5);
  SUBCASE("keeping everything returns the same particles") {
    const auto s = subsample(p, 12, rng);
    CHECK(s.points() == X);
    CHECK((s.weights() - p.weights()).cwiseAbs().maxCoeff() < 1e-15);
  }
  SUBCASE("keeping one particle gives it weight one") {
    const auto s = subsample(p, 1, rng);
    CHECK(s.size() == 1);
    CHECK(s.weights()(0) == 1.0);
  }
  SUBCASE("asking for more than there is") {
    CHECK_THROWS_AS(subsample(p, 13, rng), InputError);
    CHECK_THROWS_AS(subsample(p, 0, rng), InputError);
  }
}

TEST_CASE("property: permutation and weight-scale invariance") {
  const Kernel k{KernelKind::gaussian, 3};
  for (std::uint64_t c = 0; c < 50; ++c) {
    auto rng = gen::stream(23, c);
    const std::size_t n = gen::size_in(rng, 1, 40);
    const Points X = gen::normal_points(rng, 3, n);
    const Vector w = gen::positive_weights(rng, n);
    const double h = gen::uniform(rng, 0.05, 3.0);
    const Vector x = gen::normal_vector(rng, 3, 2.0);
    const double base = kde_log_density(WeightedParticles(X, w, h), k, x);

    std::vector<Eigen::Index> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Points Xp(3, static_cast<Eigen::Index>(n));
    Vector wp(static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j) {
      Xp.col(static_cast<Eigen::Index>(j)) = X.col(perm[j]);
      wp(static_cast<Eigen::Index>(j)) = w(perm[j]);
    }
    CAPTURE(c);
    CHECK(std::abs(kde_log_density(WeightedParticles(Xp, wp, h), k, x) - base) <= 1e-12);
    const double scale = gen::uniform(rng, 1e-3, 1e3);
    CHECK(std::abs(kde_log_density(WeightedParticles(X, scale * w, h), k, x) - base) <= 1e-12);
  }
}

TEST_CASE("property: estimate at a particle grows like h^-d") {
  for (std::size_t d : {1u, 2u, 5u}) {
    const Kernel k{KernelKind::gaussian, d};
    auto rng = gen::stream(24, d);
    const Points X = gen::normal_points(rng, d, 10);
    const Vector w = gen::positive_weights(rng, 10);
    std::vector<double> lh, ld;
    for (double h : {1e-3, 5e-4, 2.5e-4, 1.25e-4}) {
      lh.push_back(std::log(h));
      ld.push_back(kde_log_density(WeightedParticles(X, w, h), k, X.col(0)));
    }
    const double slope = (ld.back() - ld.front()) / (lh.back() - lh.front());
    CHECK(std::abs(slope + static_cast<double>(d)) <= 0.01 * static_cast<double>(d));
  }
}

TEST_CASE("property: uniform subsampling keeps distinct positive-weight particles") {
  for (std::uint64_t c = 0; c < 50; ++c) {
    auto rng = gen::stream(25, c);
    const std::size_t n = gen::size_in(rng, 2, 200);
    Points X(1, static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j) X(0, static_cast<Eigen::Index>(j)) = static_cast<double>(j);
    const Vector lw = gen::log_weights(rng, n);
    const auto p = WeightedParticles::from_log_weights(X, lw, 1.0);
    const std::size_t ell = gen::size_in(rng, 1, n);
    const auto s = subsample(p, ell, rng);
    const auto positive = static_cast<std::size_t>((p.weights().array() > 0.0).count());
    CAPTURE(c);
    CHECK(s.size() == std::min(ell, positive));
    std::set<double> seen;
    for (Eigen::Index j = 0; j < s.points().cols(); ++j) {
      const auto idx = static_cast<Eigen::Index>(s.points()(0, j));
      CHECK(p.weights()(idx) > 0.0);
      seen.insert(s.points()(0, j));
    }
    CHECK(seen.size() == s.size());
    CHECK(s.weights().sum() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("weighted subsampling gives equal retained weights") {
  auto rng = gen::stream(26, 0);
  const Points X = gen::normal_points(rng, 2, 100);
  const auto p = WeightedParticles(X, gen::positive_weights(rng, 100), 1.0);
  const auto s = subsample(p, 10, rng, SubsampleMode::weighted);
  CHECK(s.size() == 10);
  CHECK((s.weights().array() - 0.1).abs().maxCoeff() < 1e-15);
}

TEST_CASE("per-point bandwidths equal to the shared one change nothing") {
  const Kernel k{KernelKind::gaussian, 2};
  auto rng = gen::stream(27, 0);
  const Points X = gen::normal_points(rng, 2, 15);
  const Vector w = gen::positive_weights(rng, 15);
  const WeightedParticles shared(X, w, 0.4);
  WeightedParticles per(X, w, 0.4);
  per.with_point_bandwidths(Vector::Constant(15, 0.4));
  for (int c = 0; c < 10; ++c) {
    const Vector x = gen::normal_vector(rng, 2);
    CHECK(kde_log_density(per, k, x) == doctest::Approx(kde_log_density(shared, k, x)).epsilon(1e-14));
  }
}

TEST_CASE("kernel sampling is seeded and centred on the particles") {
  Points X(1, 2);
  X << -5.0, 5.0;
  const WeightedParticles p(X, Vector::Constant(2, 0.5), 0.1);
  Rng a(7), b(7);
  Vector xa(1), xb(1);
  double right = 0.0;
  for (int i = 0; i < 4000; ++i) {
    kde_sample_into(p, xa, a);
    kde_sample_into(p, xb, b);
    CHECK(xa(0) == xb(0));
    CHECK(std::min(std::abs(xa(0) - 5.0), std::abs(xa(0) + 5.0)) < 1.0);
    right += xa(0) > 0.0 ? 1.0 : 0.0;
  }
  CHECK(right / 4000.0 == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("mode and rule names") {
  CHECK(parse_subsample_mode("uniform") == SubsampleMode::uniform);
  CHECK(parse_subsample_mode("weighted") == SubsampleMode::weighted);
  CHECK(parse_subsample_rule("sqrt") == SubsampleRule::sqrt);
  CHECK(parse_subsample_rule("full") == SubsampleRule::full);
  CHECK_THROWS_AS(parse_subsample_mode("stratified"), InputError);
  CHECK_THROWS_AS(parse_subsample_rule("log"), InputError);
}
