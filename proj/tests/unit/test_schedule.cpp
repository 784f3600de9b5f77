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

#include <srais/config.hpp>
#include <srais/density.hpp>
#include <srais/error.hpp>
#include <srais/schedule.hpp>

#include <doctest.h>

#include <cmath>

using namespace srais;

namespace {

bool has_prefix(const std::vector<std::string>& v, std::string_view prefix) {
  for (const auto& s : v) {
    if (std::string_view(s).starts_with(prefix)) return true;
  }
  return false;
}

PlannedSchedule sequences(std::size_t horizon, double (*lambda)(double), double (*h)(double),
                          std::size_t dim = 1) {
  PlannedSchedule p;
  p.dim = dim;
  for (std::size_t i = 0; i < horizon; ++i) {
    const double k = static_cast<double>(i + 1);
    p.lambda.push_back(lambda(k));
    p.h.push_back(h(k));
  }
  return p;
}

double inv_sqrt(double k) { return 1.0 / std::sqrt(k); }
double fifth_root_decay(double k) { return std::pow(k, -0.2); }
double one(double) { return 1.0; }

}  // namespace

TEST_CASE("lambda_k = 1/sqrt(k) over 300 steps satisfies the lambda condition") {
  const auto r = validate_assumptions(sequences(300, inv_sqrt, fifth_root_decay));
  CHECK(r.valid());
  CHECK(r.lambda_ok);
  CHECK_FALSE(has_prefix(r.warnings, "lambda schedule"));
}

TEST_CASE("constant bandwidth warns that h_k does not vanish") {
  const auto r = validate_assumptions(sequences(300, inv_sqrt, one));
  CHECK(r.valid());
  CHECK_FALSE(r.bandwidth_ok);
  CHECK(has_prefix(r.warnings, "bandwidth schedule: h_k does not tend to 0"));
}

TEST_CASE("eta_k = 1 - 1/k with h_k = k^(-1/5)") {
  auto p = sequences(300, inv_sqrt, fifth_root_decay);
  for (std::size_t i = 0; i < 300; ++i) p.eta.push_back(1.0 - 1.0 / static_cast<double>(i + 1));

  SUBCASE("eta_1 = 0 lies outside (0, 1]") {
    const auto r = validate_assumptions(p);
    CHECK_FALSE(r.valid());
    CHECK(has_prefix(r.errors, "eta not in (0,1] at k=1"));
  }
  SUBCASE("from k = 2 on, (1 - eta_k) log h_k = -log k / (5k) tends to 0") {
    p.eta[0] = 1.0;
    const auto r = validate_assumptions(p);
    CHECK(r.valid());
    CHECK(r.eta_ok);
    CHECK_FALSE(has_prefix(r.warnings, "eta schedule"));
    for (std::size_t i = 149; i < 300; ++i) {
      const double k = static_cast<double>(i + 1);
      CHECK((1.0 - p.eta[i]) * std::log(p.h[i]) == doctest::Approx(-std::log(k) / (5.0 * k)));
    }
  }
}

TEST_CASE("constant eta below one warns") {
  auto p = sequences(300, inv_sqrt, fifth_root_decay);
  p.eta.assign(300, 0.5);
  const auto r = validate_assumptions(p);
  CHECK(r.valid());
  CHECK_FALSE(r.eta_ok);
  CHECK(has_prefix(r.warnings, "eta schedule: eta_k does not tend to 1"));
}

TEST_CASE("hard errors") {
  SUBCASE("lambda above one") {
    auto p = sequences(50, inv_sqrt, fifth_root_decay);
    p.lambda[0] = 1.5;
    CHECK(has_prefix(validate_assumptions(p).errors, "lambda not in (0,1] at k=1"));
  }
  SUBCASE("nonpositive bandwidth") {
    auto p = sequences(50, inv_sqrt, fifth_root_decay);
    p.h[10] = 0.0;
    CHECK(has_prefix(validate_assumptions(p).errors, "bandwidth not positive at k=11"));
  }
  SUBCASE("increasing lambda") {
    auto p = sequences(50, inv_sqrt, fifth_root_decay);
    p.lambda[20] = 0.9;
    CHECK(has_prefix(validate_assumptions(p).errors, "lambda sequence is not nonincreasing"));
  }
  SUBCASE("lambda0 = 1.5 in a configuration") {
    try {
      parse_config("[experiment]\nkind = \"toy\"\ntarget = \"cold_start\"\n[schedule]\nlambda0 = 1.5\n");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("lambda not in (0,1]") != std::string::npos);
    }
  }
}

TEST_CASE("policy formulas") {
  Schedule s;
  s.lambda_policy = LambdaPolicy::power;
  s.lambda0 = 0.5;
  s.lambda_exponent = 0.5;
  s.h_policy = BandwidthPolicy::power;
  s.h0 = 2.0;
  CHECK(s.lambda_at(4, 0, 1) == doctest::Approx(0.25));
  CHECK(s.bandwidth_at(32, 0, 1) == doctest::Approx(1.0));  // 2 * 32^(-1/5)
  s.lambda_policy = LambdaPolicy::kde_power;
  s.h_policy = BandwidthPolicy::kde_power;
  CHECK(s.lambda_at(1, 64, 2) == doctest::Approx(0.5 / 4.0));  // 64^(-1/3)
  CHECK(s.bandwidth_at(1, 64, 2) == doctest::Approx(1.0));      // 2 * 64^(-1/6)
  s.eta = EtaPolicy::fixed({0.2, 0.4});
  CHECK(s.eta_at(1) == 0.4);
  CHECK_THROWS_AS(s.eta_at(2), InputError);
  s.eta = EtaPolicy::rar(0.5);
  CHECK_THROWS_AS(s.eta_at(0), InputError);
  CHECK(parse_lambda_policy("kde_power") == LambdaPolicy::kde_power);
  CHECK_THROWS_AS(parse_bandwidth_policy("silverman"), InputError);
}

TEST_CASE("property: every default plan is valid with nonincreasing sequences") {
  for (std::uint64_t c = 0; c < 50; ++c) {
    auto rng = gen::stream(61, c);
    Schedule s;
    s.lambda_policy = static_cast<LambdaPolicy>(gen::size_in(rng, 0, 1));
    s.h_policy = static_cast<BandwidthPolicy>(gen::size_in(rng, 0, 1));
    s.lambda0 = gen::uniform(rng, 0.05, 1.0);
    s.lambda_exponent = gen::uniform(rng, 0.1, 0.9);
    s.h0 = gen::uniform(rng, 0.05, 3.0);
    const auto dim = gen::size_in(rng, 1, 20);
    const auto plan = plan_schedule(s, gen::size_in(rng, 1, 5000), gen::size_in(rng, 1, 2000),
                                    gen::size_in(rng, 1, 300), dim, SubsampleRule::sqrt);
    const auto r = validate_assumptions(plan);
    CAPTURE(c);
    CHECK(r.valid());
    for (std::size_t i = 0; i < plan.lambda.size(); ++i) {
      CHECK(plan.lambda[i] > 0.0);
      CHECK(plan.lambda[i] <= 1.0);
      CHECK(plan.h[i] > 0.0);
      if (i > 0) {
        CHECK(plan.lambda[i] <= plan.lambda[i - 1]);
        CHECK(plan.h[i] <= plan.h[i - 1]);
      }
    }
  }
}

TEST_CASE("safe-density domination probe") {
  Rng rng(7);
  SUBCASE("heavy-tailed safe density dominates a Gaussian target") {
    AssumptionReport r;
    auto t = std::make_shared<StudentT>(Vector::Zero(2), Eigen::MatrixXd::Identity(2, 2), 3.0);
    check_safe_domination(r, *t, *Gaussian::isotropic(Vector::Zero(2), 1.0), rng);
    REQUIRE(r.safe_constant.has_value());
    CHECK(*r.safe_constant > 0.0);
    CHECK_FALSE(has_prefix(r.warnings, "safe density"));
  }
}
