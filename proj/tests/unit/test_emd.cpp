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

#include <doctest.h>

#include <cmath>

using namespace srais;
using namespace srais::emd;

namespace {

GridDensity gaussian(const Grid& g, double mean, double variance) {
  return GridDensity::from_log(g, [=](double x) {
    return -0.5 * (kLog2Pi + std::log(variance)) - 0.5 * (x - mean) * (x - mean) / variance;
  });
}

double sup_diff(const GridDensity& a, const GridDensity& b) {
  return (a.values() - b.values()).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("grid densities are normalized") {
  const Grid g;
  CHECK(g.points == 8192);
  CHECK(gaussian(g, 0.0, 1.0).mass() == doctest::Approx(1.0).epsilon(1e-8));
  Vector raw = Vector::Ones(static_cast<Eigen::Index>(g.points));
  auto u = GridDensity::from_values(g, raw);
  CHECK(u.normalize().mass() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(GridDensity::from_values(Grid{-1, 1, 63, 1}, Vector::Ones(63)), InputError);
  CHECK_THROWS_AS(GridDensity::from_values(Grid{1, -1, 100, 1}, Vector::Ones(100)), InputError);
  CHECK_THROWS_AS(GridDensity::from_values(Grid{-1, 1, 513, 2}, Vector::Ones(513 * 513)), InputError);
  CHECK_THROWS_AS(GridDensity::from_values(Grid{-1, 1, 100, 1}, Vector::Ones(99)), InputError);
  const Grid g{-5, 5, 128, 1};
  CHECK_THROWS_AS(emd_step(gaussian(g, 0, 1), gaussian(g, 0, 1), 1.5), InputError);
  CHECK_THROWS_AS(tv_distance(gaussian(g, 0, 1), gaussian(Grid{-6, 6, 128, 1}, 0, 1)), InputError);
}

TEST_CASE("mirror-descent step examples") {
  const Grid g;
  const auto f = gaussian(g, 0.0, 1.0);
  const auto q = gaussian(g, 0.0, 4.0);
  CHECK(sup_diff(emd_step(q, f, 1.0), f) <= 1e-12);
  CHECK(sup_diff(emd_step(q, f, 0.0), q) <= 1e-12);
  const auto half = emd_step(q, f, 0.5);
  CHECK(sup_diff(half, gaussian(g, 0.0, oracle::kEmdHalfVariance)) <= 1e-6);
}

TEST_CASE("total variation examples") {
  const Grid g;
  const auto f = gaussian(g, 0.0, 1.0);
  CHECK(tv_distance(f, f) == 0.0);
  CHECK(std::abs(tv_distance(f, gaussian(g, 0.0, 4.0)) - oracle::kTvN01N04) <= 1e-6);
  Vector left = Vector::Zero(static_cast<Eigen::Index>(g.points));
  Vector right = left;
  left.head(4000).setOnes();
  right.tail(4000).setOnes();
  auto a = GridDensity::from_values(g, left);
  auto b = GridDensity::from_values(g, right);
  CHECK(tv_distance(a.normalize(), b.normalize()) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("KL examples") {
  const Grid g;
  const auto f = gaussian(g, 0.0, 1.0);
  CHECK(kl_divergence(f, f).value == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(std::abs(kl_divergence(f, gaussian(g, 0.0, 4.0)).value - oracle::kKlN01N04) <= 1e-5);
  CHECK(std::abs(kl_divergence(f, gaussian(g, 0.0, 4.0)).value - 0.318147) <= 1e-5);
  Vector half = Vector::Zero(static_cast<Eigen::Index>(g.points));
  half.head(4096).setOnes();
  auto q = GridDensity::from_values(g, half);
  const auto r = kl_divergence(f, q.normalize());
  CHECK(r.support_violation);
  CHECK(std::isinf(r.value));
}

TEST_CASE("contraction bound examples") {
  const Grid g;
  const auto f = gaussian(g, 0.0, 1.0);
  const auto q1 = gaussian(g, 0.0, 4.0);
  SUBCASE("eta = 1 reaches the target in one step") {
    const auto rows = verify_contraction(f, q1, {1.0});
    CHECK(rows.at(0).tv <= 1e-12);
    CHECK(rows.at(0).bound >= 0.0);
  }
  SUBCASE("one step at eta = 0.5") {
    const auto rows = verify_contraction(f, q1, {0.5});
    CHECK(std::abs(rows.at(0).bound - oracle::kContractionBound1) <= 1e-5);
    CHECK(rows.at(0).bound == doctest::Approx(0.5642).epsilon(1e-4));
    CHECK(std::abs(rows.at(0).tv - oracle::kTvN01N016) <= 1e-6);
    CHECK(rows.at(0).tv <= rows.at(0).bound);
  }
  SUBCASE("every schedule keeps tv under the bound for 50 steps") {
    for (auto kind : {RateSchedule::constant, RateSchedule::harmonic, RateSchedule::power}) {
      const auto rows = verify_contraction(f, q1, EtaSchedule{kind, 0.5, 0.5}.take(50));
      REQUIRE(rows.size() == 50);
      for (const auto& r : rows) CHECK(r.slack >= -kBoundTolerance);
    }
  }
}

TEST_CASE("rate under eta_k = c / k^beta") {
  const Grid g;
  const auto f = gaussian(g, 0.0, 1.0);
  const auto q1 = gaussian(g, 0.0, 4.0);
  const auto rows = contraction_report(f, q1, EtaSchedule{RateSchedule::power, 0.5, 0.5}.take(50));
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0, n = 0;
  for (const auto& r : rows) {
    const double k = static_cast<double>(r.step + 1);
    if (k < 5) continue;
    const double x = std::sqrt(k), y = std::log(r.tv);
    sx += x; sy += y; sxx += x * x; sxy += x * y; syy += y * y; n += 1;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double r = (n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
  CHECK(slope < 0.0);
  CHECK(r * r >= 0.9);
}

TEST_CASE("averaged iterate KL decreases under eta_k = c / sqrt(k)") {
  const Grid g;
  const auto kl = averaged_iterate_kl(gaussian(g, 0.0, 1.0), gaussian(g, 0.0, 4.0),
                                      EtaSchedule{RateSchedule::power, 0.5, 0.5}.take(50));
  REQUIRE(kl.size() == 50);
  for (std::size_t i = 1; i < kl.size(); ++i) CHECK(kl[i] <= kl[i - 1] + kKlMonotoneTolerance);
}

TEST_CASE("learning-rate schedules") {
  CHECK(EtaSchedule{RateSchedule::constant, 0.5, 0.5}.at(7) == 0.5);
  CHECK(EtaSchedule{RateSchedule::harmonic, 0.5, 0.5}.at(4) == 0.125);
  CHECK(EtaSchedule{RateSchedule::power, 0.5, 0.5}.at(4) == 0.25);
  CHECK_THROWS_AS(EtaSchedule{}.at(0), InputError);
  CHECK(parse_rate_schedule("harmonic") == RateSchedule::harmonic);
  CHECK_THROWS_AS(parse_rate_schedule("cosine"), InputError);
}

TEST_CASE("property: step normalization, fixed point, tv symmetry and triangle") {
  const Grid g{-20, 20, 2048, 1};
  for (std::uint64_t c = 0; c < 40; ++c) {
    auto rng = gen::stream(51, c);
    auto draw = [&] { return gaussian(g, gen::uniform(rng, -3, 3), gen::uniform(rng, 0.3, 6)); };
    const auto p = draw(), q = draw(), r = draw();
    const double eta = gen::uniform(rng, 0, 1);
    CAPTURE(c);
    CHECK(emd_step(q, p, eta).mass() == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(sup_diff(emd_step(p, p, eta), p) <= 1e-10);
    CHECK(std::abs(tv_distance(p, q) - tv_distance(q, p)) <= 1e-12);
    CHECK(tv_distance(p, q) <= tv_distance(p, r) + tv_distance(r, q) + 1e-12);
    CHECK(tv_distance(p, q) <= 2.0 + 1e-12);
    CHECK(kl_divergence(p, q).value >= -1e-12);
  }
}

TEST_CASE("2D grid step matches the analytic geometric mixture") {
  const Grid g{-12, 12, 256, 2};
  auto iso = [&](double v) {
    return GridDensity::from_log(g, [=](double x, double y) {
      return -kLog2Pi - std::log(v) - 0.5 * (x * x + y * y) / v;
    });
  };
  const auto step = emd_step(iso(4.0), iso(1.0), 0.5);
  CHECK(step.mass() == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(sup_diff(step, iso(oracle::kEmdHalfVariance)) <= 1e-6);
}
