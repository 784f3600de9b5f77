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

#include <srais/density.hpp>
#include <srais/error.hpp>
#include <srais/sampler.hpp>

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace srais;

namespace {

ParticleStore two_particles(double eta) {
  ParticleStore s(1);
  Points x(1, 2);
  x << 0.0, 1.0;
  Vector lw(2);
  lw << std::log(4.0), 0.0;
  s.append(x.col(0), lw.head(1), eta, 0);
  s.append(x.col(1), lw.tail(1), eta, 1);
  return s;
}

SraisConfig small_config(std::size_t n0, std::size_t m, std::size_t k, EtaPolicy eta) {
  SraisConfig c;
  c.n0 = n0;
  c.batch = m;
  c.iterations = k;
  c.schedule.eta = std::move(eta);
  return c;
}

std::string dump(const std::vector<TraceRow>& rows) {
  std::ostringstream s;
  s.precision(17);
  for (const auto& r : rows) {
    s << r.diag.iteration << ',' << r.diag.eta << ',' << r.diag.lambda << ',' << r.diag.h << ','
      << r.diag.d_n << ',' << r.diag.ess << ',' << r.squared_error;
    for (Eigen::Index i = 0; i < r.estimate.size(); ++i) s << ',' << r.estimate(i);
    s << '\n';
  }
  return s.str();
}

}  // namespace

TEST_CASE("regularized normalized weight examples") {
  SUBCASE("equal raw weights give uniform weights whatever the exponents") {
    ParticleStore s(1);
    s.append(Points::Zero(1, 3), Vector::Zero(3), 0.3, 0);
    s.append(Points::Zero(1, 2), Vector::Zero(2), 0.9, 1);
    const Vector w = regularized_normalized_weights(s);
    for (Eigen::Index i = 0; i < 5; ++i) CHECK(w(i) == doctest::Approx(0.2).epsilon(1e-15));
  }
  SUBCASE("W = (4, 1), eta = 0.5") {
    const Vector w = regularized_normalized_weights(two_particles(0.5));
    CHECK(w(0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(w(1) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  }
  SUBCASE("W = (4, 1), eta = 1") {
    const Vector w = regularized_normalized_weights(two_particles(1.0));
    CHECK(w(0) == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(w(1) == doctest::Approx(0.2).epsilon(1e-15));
  }
  SUBCASE("D_n for W = (4, 1), eta = 0.5 is (2 + 1) / 2") {
    CHECK(std::exp(log_mean_regularized_weight(two_particles(0.5))) == doctest::Approx(1.5));
  }
  SUBCASE("all weights zero") {
    ParticleStore s(1);
    s.append(Points::Zero(1, 2), Vector::Constant(2, kNegInf), 1.0, 0);
    CHECK_THROWS_AS(regularized_normalized_weights(s), DegenerateWeightsError);
  }
}

TEST_CASE("particle store validation") {
  ParticleStore s(2);
  CHECK_THROWS_AS(s.append(Points::Zero(1, 2), Vector::Zero(2), 1.0, 0), InputError);
  CHECK_THROWS_AS(s.append(Points::Zero(2, 2), Vector::Zero(3), 1.0, 0), InputError);
  CHECK_THROWS_AS(s.append(Points::Zero(2, 1), Vector::Constant(1, std::nan("")), 1.0, 0), InputError);
  CHECK_THROWS_AS(s.append(Points::Zero(2, 1), Vector::Constant(1, INFINITY), 1.0, 0), InputError);
  CHECK_THROWS_AS(s.append(Points::Zero(2, 1), Vector::Zero(1), 1.5, 0), InputError);
}

TEST_CASE("exponents stay frozen at generation") {
  ParticleStore s(1);
  s.append(Points::Zero(1, 2), Vector::Zero(2), 0.25, 0);
  s.append(Points::Zero(1, 3), Vector::Zero(3), 0.75, 1);
  s.append(Points::Zero(1, 1), Vector::Zero(1), 1.0, 2);
  CHECK(s.etas()(0) == 0.25);
  CHECK(s.etas()(1) == 0.25);
  CHECK(s.etas()(4) == 0.75);
  CHECK(s.etas()(5) == 1.0);
  CHECK(s.iteration_of(3) == 1);
}

TEST_CASE("safe density equal to the target") {
  auto f = Gaussian::isotropic(Vector::Zero(2), 1.0);
  const auto cfg = small_config(100, 50, 3, EtaPolicy::rar(0.5));
  IterationDiagnostics init;
  auto state = srais_initialize(cfg, *f, f, Rng(3), &init);
  CHECK(init.eta == 1.0);
  CHECK(init.d_n == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(state.store.size() == 100);
}

TEST_CASE("particle count after k steps is n0 + k m") {
  auto toy = toy_target(ToyTarget::cold_start, 3);
  const auto cfg = small_config(150, 40, 6, EtaPolicy::rar(0.5));
  auto state = srais_initialize(cfg, *toy.target, toy.initial, Rng(11));
  for (std::size_t k = 1; k <= 6; ++k) {
    const auto d = srais_step(state, cfg, *toy.target);
    CHECK(d.n_particles == 150 + k * 40);
    CHECK(state.store.size() == 150 + k * 40);
    CHECK(state.iteration == k);
  }
}

TEST_CASE("lambda constant at 1 leaves the proposal at the safe density") {
  auto toy = toy_target(ToyTarget::cold_start, 2);
  auto cfg = small_config(100, 50, 4, EtaPolicy::constant(1.0));
  cfg.schedule.lambda_policy = LambdaPolicy::constant;
  cfg.schedule.lambda0 = 1.0;
  auto state = srais_initialize(cfg, *toy.target, toy.initial, Rng(5));
  Rng probe(99);
  const Points xs = toy.initial->sample(20, probe);
  for (int k = 0; k < 4; ++k) {
    srais_step(state, cfg, *toy.target);
    CHECK(state.lambda == 1.0);
    const Vector a = state.proposal->log_densities(xs);
    const Vector b = toy.initial->log_densities(xs);
    CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("zero iterations give only the initialization row") {
  auto toy = toy_target(ToyTarget::cold_start, 2);
  const auto rows = srais_run(small_config(100, 50, 0, EtaPolicy::rar(0.5)), *toy.target, toy.initial,
                              Rng(1), toy.true_mean);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].diag.iteration == 0);
  CHECK(std::isfinite(rows[0].squared_error));
}

TEST_CASE("cold start in one dimension with eta = 1 improves within a budget of 1000") {
  auto toy = toy_target(ToyTarget::cold_start, 1);
  const auto cfg = small_config(200, 80, 10, EtaPolicy::constant(1.0));
  CHECK(cfg.n0 + cfg.iterations * cfg.batch == 1000);
  const auto rows = srais_run(cfg, *toy.target, toy.initial, Rng(20260101), toy.true_mean);
  REQUIRE(rows.size() == 11);
  CHECK(rows.back().squared_error < rows.front().squared_error);
}

TEST_CASE("configured budget of the published toy runs is 400000 particles") {
  const auto cfg = small_config(40000, 18000, 20, EtaPolicy::rar(0.5));
  CHECK(cfg.n0 + cfg.iterations * cfg.batch == 400000);
}

TEST_CASE("runs are deterministic given the seed") {
  auto toy = toy_target(ToyTarget::gaussian_mixture, 4);
  const auto cfg = small_config(300, 100, 5, EtaPolicy::rar(0.5));
  const auto a = srais_run(cfg, *toy.target, toy.initial, Rng(42), toy.true_mean);
  const auto b = srais_run(cfg, *toy.target, toy.initial, Rng(42), toy.true_mean);
  const auto c = srais_run(cfg, *toy.target, toy.initial, Rng(43), toy.true_mean);
  CHECK(dump(a) == dump(b));
  CHECK(dump(a) != dump(c));
}

TEST_CASE("property: safe lower bound and diagnostics over random settings") {
  for (std::uint64_t c = 0; c < 12; ++c) {
    auto rng = gen::stream(71, c);
    const auto dim = gen::size_in(rng, 1, 6);
    const auto kind = static_cast<ToyTarget>(gen::size_in(rng, dim >= 2 ? 0 : 0, dim >= 2 ? 2 : 0));
    auto toy = toy_target(kind, dim);
    auto cfg = small_config(gen::size_in(rng, 50, 400), gen::size_in(rng, 10, 100),
                            gen::size_in(rng, 1, 6), EtaPolicy::rar(gen::uniform(rng, 0, 1)));
    cfg.schedule.lambda0 = gen::uniform(rng, 0.1, 1.0);
    cfg.schedule.h0 = gen::uniform(rng, 0.2, 2.0);
    cfg.subsample_rule = gen::size_in(rng, 0, 1) ? SubsampleRule::full : SubsampleRule::sqrt;
    CAPTURE(c);
    std::vector<TraceRow> rows;
    try {
      rows = srais_run(cfg, *toy.target, toy.initial, Rng(rng()), toy.true_mean);
    } catch (const DegenerateWeightsError&) {
      continue;  // allowed outcome of the collapse rule
    }
    for (const auto& r : rows) {
      CHECK(r.diag.safe_margin >= -1e-9);
      CHECK(r.diag.eta >= 0.0);
      CHECK(r.diag.eta <= 1.0);
      CHECK(r.diag.lambda > 0.0);
      CHECK(r.diag.lambda <= 1.0);
      CHECK(r.diag.h > 0.0);
      CHECK(r.diag.ess >= 1.0 - 1e-9);
      CHECK(r.diag.ess <= static_cast<double>(r.diag.n_particles) + 1e-6);
      CHECK(r.diag.d_n > 0.0);
    }
  }
}

TEST_CASE("regularized weights stay under 1 / (c lambda) for a Student-t safe density") {
  // f = N(0, 1), q0 = t3 with unit scale; c = min q0 / f attained at x = 0 here.
  auto f = Gaussian::isotropic(Vector::Zero(1), 1.0);
  auto q0 = std::make_shared<StudentT>(Vector::Zero(1), Eigen::MatrixXd::Identity(1, 1), 3.0);
  double c = INFINITY;
  for (int i = -20000; i <= 20000; ++i) {
    Vector x(1);
    x << i * 5e-4;
    c = std::min(c, std::exp(q0->log_density(x) - f->log_density(x)));
  }
  const auto cfg = small_config(200, 100, 15, EtaPolicy::rar(0.5));
  auto state = srais_initialize(cfg, *f, q0, Rng(8));
  for (int k = 0; k < 15; ++k) {
    const auto d = srais_step(state, cfg, *f);
    CHECK(d.max_regularized_weight <= 1.0 / (c * d.proposal_lambda) * (1 + 1e-9));
  }
}

TEST_CASE("invalid configurations") {
  auto toy = toy_target(ToyTarget::cold_start, 2);
  CHECK_THROWS_AS(srais_initialize(small_config(0, 10, 1, EtaPolicy::rar(0.5)), *toy.target,
                                   toy.initial, Rng(1)),
                  InputError);
  CHECK_THROWS_AS(srais_initialize(small_config(10, 1, 1, EtaPolicy::rar(0.5)), *toy.target,
                                   toy.initial, Rng(1)),
                  InputError);
  auto other = Gaussian::isotropic(Vector::Zero(3), 1.0);
  CHECK_THROWS_AS(srais_initialize(small_config(10, 10, 1, EtaPolicy::rar(0.5)), *toy.target, other,
                                   Rng(1)),
                  InputError);
}
