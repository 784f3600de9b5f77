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

#include <srais/density.hpp>
#include <srais/emd.hpp>
#include <srais/error.hpp>
#include <srais/estimators.hpp>
#include <srais/kernel.hpp>
#include <srais/rar.hpp>
#include <srais/sampler.hpp>
#include <srais/stats.hpp>
#include <srais/suite.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

namespace srais::suite {

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

// Collects the first few failures of a battery.
class Ledger {
 public:
  void require(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (failures_ <= 5) {
      if (!failed_.empty()) failed_ += "; ";
      failed_ += what;
    }
  }
  CheckResult finish(std::string name, std::string summary) const {
    CheckResult r;
    r.name = std::move(name);
    r.passed = failures_ == 0;
    r.detail = r.passed ? std::move(summary)
                        : std::to_string(failures_) + "/" + std::to_string(checks_) +
                              " checks failed: " + failed_;
    return r;
  }

 private:
  std::size_t checks_ = 0;
  std::size_t failures_ = 0;
  std::string failed_;
};

template <class F>
CheckResult timed(const char* name, F&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  CheckResult r;
  try {
    r = body();
  } catch (const std::exception& e) {
    r.name = name;
    r.passed = false;
    r.detail = std::string("threw: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

Vector scalar(double x) { return Vector::Constant(1, x); }

emd::GridDensity grid_gaussian(const emd::Grid& g, double mean, double variance) {
  return emd::GridDensity::from_log(g, [=](double x) {
    return -0.5 * (kLog2Pi + std::log(variance)) - 0.5 * (x - mean) * (x - mean) / variance;
  });
}

Vector random_log_weights(std::size_t m, Rng& rng) {
  std::normal_distribution<double> z;
  std::uniform_real_distribution<double> u;
  const double sd = 8.0 * u(rng);
  const bool sparse = u(rng) < 0.3;
  Vector lw(static_cast<Eigen::Index>(m));
  for (Eigen::Index i = 0; i < lw.size(); ++i) {
    lw(i) = sd * z(rng);
    if (sparse && u(rng) < 0.4) lw(i) = kNegInf;
  }
  if (lw.maxCoeff() == kNegInf) lw(0) = 0.0;
  return lw;
}

}  // namespace

CheckResult contraction_bound(std::size_t steps) {
  return timed("contraction-bound", [&] {
    const emd::Grid g;
    const auto f = grid_gaussian(g, 0.0, 1.0);
    const auto q1 = grid_gaussian(g, 0.0, 4.0);
    Ledger ledger;
    const double kl0 = emd::kl_divergence(f, q1).value;
    ledger.require(std::abs(kl0 - 0.318147) <= 1e-5, "KL(f||q1) = " + fmt("%.8f", kl0));
    std::ostringstream summary;
    summary << "KL(f||q1)=" << fmt("%.6f", kl0);
    for (auto kind : {emd::RateSchedule::constant, emd::RateSchedule::harmonic,
                      emd::RateSchedule::power}) {
      const emd::EtaSchedule sched{kind, 0.5, 0.5};
      const auto rows = emd::contraction_report(f, q1, sched.take(steps));
      double min_slack = std::numeric_limits<double>::infinity();
      double prev_kl = kl0;
      for (const auto& row : rows) {
        min_slack = std::min(min_slack, row.slack);
        ledger.require(row.tv <= row.bound + emd::kBoundTolerance,
                       std::string(emd::to_string(kind)) + " step " + std::to_string(row.step) +
                           ": tv above bound");
        ledger.require(row.kl <= prev_kl + emd::kKlMonotoneTolerance,
                       std::string(emd::to_string(kind)) + " step " + std::to_string(row.step) +
                           ": KL increased");
        prev_kl = row.kl;
      }
      summary << ", " << emd::to_string(kind) << " min slack " << fmt("%.3g", min_slack);
    }
    return ledger.finish("contraction-bound", summary.str());
  });
}

CheckResult emd_rate() {
  return timed("emd-rate", [] {
    const emd::Grid g;
    const auto f = grid_gaussian(g, 0.0, 1.0);
    const auto q1 = grid_gaussian(g, 0.0, 4.0);
    const emd::EtaSchedule sched{emd::RateSchedule::power, 0.5, 0.5};
    const auto rows = emd::contraction_report(f, q1, sched.take(50));
    std::vector<double> x, y;
    for (const auto& row : rows) {
      // row k describes q_{k+1}; n counts iterates from q_1.
      const double n = static_cast<double>(row.step + 1);
      if (n < 5 || n > 50) continue;
      x.push_back(std::pow(n, 1.0 - sched.beta));
      y.push_back(std::log(row.tv));
    }
    const auto fit = stats::fit_line(x, y);
    Ledger ledger;
    ledger.require(fit.slope < 0.0, "slope " + fmt("%.4f", fit.slope) + " not negative");
    ledger.require(fit.r_squared >= 0.9, "R^2 " + fmt("%.4f", fit.r_squared) + " below 0.9");
    return ledger.finish("emd-rate", "slope " + fmt("%.4f", fit.slope) + ", R^2 " +
                                         fmt("%.5f", fit.r_squared));
  });
}

CheckResult emd_invariants(std::uint64_t seed) {
  return timed("emd-invariants", [&] {
    emd::Grid g;
    g.points = 2048;
    Rng rng(seed);
    std::uniform_real_distribution<double> mean(-3.0, 3.0), var(0.3, 6.0), eta(0.0, 1.0);
    Ledger ledger;
    for (int c = 0; c < 30; ++c) {
      const auto p = grid_gaussian(g, mean(rng), var(rng));
      const auto q = grid_gaussian(g, mean(rng), var(rng));
      const auto r = grid_gaussian(g, mean(rng), var(rng));
      const auto step = emd::emd_step(q, p, eta(rng));
      ledger.require(std::abs(step.mass() - 1.0) <= 1e-8, "step not normalized");
      const auto fixed = emd::emd_step(p, p, eta(rng));
      ledger.require((fixed.values() - p.values()).cwiseAbs().maxCoeff() <= 1e-10,
                     "target is not a fixed point");
      const double pq = emd::tv_distance(p, q), qp = emd::tv_distance(q, p);
      ledger.require(std::abs(pq - qp) <= 1e-12, "tv not symmetric");
      ledger.require(pq <= emd::tv_distance(p, r) + emd::tv_distance(r, q) + 1e-12,
                     "tv triangle inequality");
      ledger.require(emd::kl_divergence(p, p).value <= 1e-12, "KL(p||p) nonzero");
    }
    return ledger.finish("emd-invariants", "30 random triples");
  });
}

CheckResult weight_moments(std::uint64_t seed, std::size_t draws) {
  return timed("weight-moments", [&] {
    const auto f = Gaussian::isotropic(Vector::Zero(1), 1.0);
    const StudentT q(Vector::Zero(1), Eigen::MatrixXd::Identity(1, 1), 3.0);
    Rng rng(seed);
    const Points x = q.sample(draws, rng);
    const Vector log_w = f->log_densities(x) - q.log_densities(x);
    const auto n = static_cast<double>(draws);

    auto moments = [&](double eta) {
      const Vector y = (eta * log_w).array().exp();
      const double m = y.mean();
      const double v = (y.array() - m).square().sum() / (n - 1.0);
      return std::pair{m, v};
    };
    Ledger ledger;
    const auto [m1, v1] = moments(1.0);
    const double se1 = std::sqrt(v1 / n);
    ledger.require(std::abs(m1 - 1.0) <= 5.0 * se1, "mean(W) = " + fmt("%.5f", m1));
    std::ostringstream summary;
    summary << "mean W " << fmt("%.5f", m1) << " var W " << fmt("%.5f", v1);
    for (double eta : {0.25, 0.5, 0.75}) {
      const auto [m, v] = moments(eta);
      const double se = std::sqrt(v / n);
      ledger.require(m <= 1.0 + 3.0 * se, "mean(W^" + fmt("%.2f", eta) + ") = " + fmt("%.5f", m));
      ledger.require(v <= v1, "var(W^" + fmt("%.2f", eta) + ") above var(W)");
      summary << "; eta " << eta << ": mean " << fmt("%.5f", m) << " var " << fmt("%.5f", v);
    }
    return ledger.finish("weight-moments", summary.str());
  });
}

CheckResult rar_properties(std::uint64_t seed, std::size_t cases) {
  return timed("rar-properties", [&] {
    Rng rng(seed);
    std::uniform_int_distribution<std::size_t> size(2, 64);
    Ledger ledger;
    for (std::size_t c = 0; c < cases; ++c) {
      const auto w = BatchWeights::from_log_weights(random_log_weights(size(rng), rng));
      const double eta1 = rar_eta(w, 1.0);
      double prev_d = -std::numeric_limits<double>::infinity();
      for (int i = 0; i <= 10; ++i) {
        const double alpha = i / 10.0;
        const double d = renyi_divergence(w, alpha);
        const double eta = rar_eta(w, alpha);
        ledger.require(eta >= 0.0 && eta <= 1.0, "eta outside [0, 1]");
        ledger.require(d >= prev_d - 1e-10, "divergence decreased in alpha");
        ledger.require(eta1 <= eta + 1e-12, "eta at alpha 1 above eta at " + fmt("%.1f", alpha));
        prev_d = d;
      }
      const auto m = size(rng);
      const auto uniform = BatchWeights::from_normalized(Vector::Constant(static_cast<Eigen::Index>(m), 1.0 / static_cast<double>(m)));
      Vector one_hot = Vector::Zero(static_cast<Eigen::Index>(m));
      one_hot(static_cast<Eigen::Index>(c % m)) = 1.0;
      const auto hot = BatchWeights::from_normalized(one_hot);
      for (int i = 0; i <= 10; ++i) {
        ledger.require(rar_eta(uniform, i / 10.0) == 1.0, "uniform weights not eta = 1");
      }
      ledger.require(rar_eta(hot, 1.0) == 0.0, "one-hot weights not eta = 0 at alpha 1");
    }
    return ledger.finish("rar-properties", std::to_string(cases) + " random batches");
  });
}

CheckResult rar_limits(std::uint64_t seed) {
  return timed("rar-limits", [&] {
    Rng rng(seed);
    std::uniform_int_distribution<std::size_t> size(2, 64);
    std::uniform_real_distribution<double> power(0.25, 1.0);
    std::exponential_distribution<double> expo(1.0);
    Ledger ledger;
    double worst_hi = 0.0, worst_lo = 0.0;
    for (int c = 0; c < 100; ++c) {
      const auto m = size(rng);
      const double p = power(rng);
      Vector lw(static_cast<Eigen::Index>(m));
      for (Eigen::Index i = 0; i < lw.size(); ++i) lw(i) = p * std::log(expo(rng));
      const auto w = BatchWeights::from_log_weights(lw);
      const double hi = std::abs(renyi_divergence(w, 0.999) - renyi_divergence(w, 1.0));
      const double lo = std::abs(renyi_divergence(w, 0.001) - renyi_divergence(w, 0.0));
      worst_hi = std::max(worst_hi, hi);
      worst_lo = std::max(worst_lo, lo);
      ledger.require(hi <= 1e-3, "alpha -> 1 limit off by " + fmt("%.3g", hi));
      ledger.require(lo <= 1e-3, "alpha -> 0 limit off by " + fmt("%.3g", lo));

      std::vector<Eigen::Index> perm(static_cast<std::size_t>(m));
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      Vector shuffled(lw.size());
      for (Eigen::Index i = 0; i < lw.size(); ++i) shuffled(i) = lw(perm[static_cast<std::size_t>(i)]);
      const auto ws = BatchWeights::from_log_weights(shuffled);
      for (double alpha : {0.0, 0.3, 0.5, 1.0}) {
        ledger.require(std::abs(rar_eta(w, alpha) - rar_eta(ws, alpha)) <= 1e-12,
                       "eta changed under permutation");
      }
    }
    // Proposal equal to the target: every weight is 1.
    const auto f = Gaussian::isotropic(Vector::Zero(1), 1.0);
    constexpr std::size_t m = 32;
    double eta_sum = 0.0;
    for (int b = 0; b < 1000; ++b) {
      const Points x = f->sample(m, rng);
      eta_sum += rar_eta(BatchWeights::from_log_weights(f->log_densities(x) - f->log_densities(x)), 0.5);
    }
    const double eta_mean = eta_sum / 1000.0;
    ledger.require(eta_mean >= 1.0 - 5.0 / std::sqrt(static_cast<double>(m)),
                   "mean eta with q = f is " + fmt("%.4f", eta_mean));
    return ledger.finish("rar-limits", "worst |D(0.999)-D(1)| " + fmt("%.2e", worst_hi) +
                                           ", |D(0.001)-D(0)| " + fmt("%.2e", worst_lo) +
                                           ", mean eta (q = f) " + fmt("%.4f", eta_mean));
  });
}

DnStudy dn_convergence_study(std::uint64_t seed, std::size_t replicates) {
  const auto f = Gaussian::isotropic(Vector::Zero(1), 1.0);
  SraisConfig cfg;
  cfg.n0 = 100;
  cfg.batch = 100;
  cfg.iterations = 99;
  cfg.schedule.eta = EtaPolicy::constant(1.0);

  std::vector<double> sum_sq(cfg.iterations + 1, 0.0);
  DnStudy out;
  for (std::size_t r = 0; r < replicates; ++r) {
    IterationDiagnostics d;
    auto state = srais_initialize(cfg, *f, f, Rng(derive_seed(seed, r)), &d);
    sum_sq[0] += (d.d_n - 1.0) * (d.d_n - 1.0);
    for (std::size_t k = 1; k <= cfg.iterations; ++k) {
      d = srais_step(state, cfg, *f);
      sum_sq[k] += (d.d_n - 1.0) * (d.d_n - 1.0);
    }
  }
  std::vector<double> log_n, log_e;
  for (std::size_t k = 0; k <= cfg.iterations; ++k) {
    const double n = static_cast<double>(cfg.n0 + k * cfg.batch);
    const double rms = std::sqrt(sum_sq[k] / static_cast<double>(replicates));
    out.n.push_back(n);
    out.rms_error.push_back(rms);
    // The initial batch comes from q0 = f, so its error is exactly zero.
    if (rms == 0.0) continue;
    log_n.push_back(std::log(n));
    log_e.push_back(std::log(rms));
  }
  const auto fit = stats::fit_line(log_n, log_e);
  out.slope = fit.slope;
  out.r_squared = fit.r_squared;
  out.final_error = out.rms_error.back();
  return out;
}

CheckResult dn_convergence(std::uint64_t seed) {
  return timed("dn-convergence", [&] {
    const auto s = dn_convergence_study(seed);
    Ledger ledger;
    ledger.require(s.final_error < 0.05, "final rms " + fmt("%.4f", s.final_error));
    ledger.require(s.slope >= -0.65 && s.slope <= -0.35, "slope " + fmt("%.4f", s.slope));
    return ledger.finish("dn-convergence", "rms at n=10^4 " + fmt("%.4f", s.final_error) +
                                               ", log-log slope " + fmt("%.4f", s.slope));
  });
}

CheckResult safe_bounds(std::uint64_t seed) {
  return timed("safe-bounds", [&] {
    const auto f = Gaussian::isotropic(Vector::Constant(1, 1.0), 0.25);
    const auto q0 = std::make_shared<StudentT>(Vector::Zero(1), Eigen::MatrixXd::Identity(1, 1), 3.0);
    // c = min q0 / f; the ratio grows in both tails, so a wide fine grid suffices.
    double log_c = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 200000; ++i) {
      const Vector x = scalar(-10.0 + 20.0 * i / 200000.0);
      log_c = std::min(log_c, q0->log_density(x) - f->log_density(x));
    }
    SraisConfig cfg;
    cfg.n0 = 200;
    cfg.batch = 100;
    cfg.iterations = 30;
    cfg.schedule.eta = EtaPolicy::rar(0.5);
    Ledger ledger;
    double worst_margin = std::numeric_limits<double>::infinity();
    double worst_ratio = 0.0;
    auto check = [&](const IterationDiagnostics& d) {
      worst_margin = std::min(worst_margin, d.safe_margin);
      const double cap = std::exp(-log_c) / d.proposal_lambda;
      worst_ratio = std::max(worst_ratio, d.max_regularized_weight / cap);
      ledger.require(d.safe_margin >= -1e-9, "safe margin " + fmt("%.3g", d.safe_margin));
      ledger.require(d.max_regularized_weight <= cap * (1.0 + 1e-6),
                     "weight " + fmt("%.4g", d.max_regularized_weight) + " above cap " + fmt("%.4g", cap));
    };
    for (std::uint64_t r = 0; r < 5; ++r) {
      IterationDiagnostics d;
      auto state = srais_initialize(cfg, *f, q0, Rng(derive_seed(seed, r)), &d);
      check(d);
      for (std::size_t k = 0; k < cfg.iterations; ++k) check(srais_step(state, cfg, *f));
    }
    return ledger.finish("safe-bounds", "c " + fmt("%.5f", std::exp(log_c)) + ", min margin " +
                                            fmt("%.3g", worst_margin) + ", max W/cap " +
                                            fmt("%.4f", worst_ratio));
  });
}

CheckResult kde_invariants(std::uint64_t seed) {
  return timed("kde-invariants", [&] {
    Rng rng(seed);
    std::normal_distribution<double> z;
    std::uniform_real_distribution<double> u(0.1, 2.0);
    const Kernel k{KernelKind::gaussian, 3};
    Ledger ledger;
    for (int c = 0; c < 20; ++c) {
      Points pts(3, 30);
      Vector w(30);
      for (Eigen::Index j = 0; j < 30; ++j) {
        for (Eigen::Index i = 0; i < 3; ++i) pts(i, j) = z(rng);
        w(j) = u(rng);
      }
      Vector x(3);
      for (Eigen::Index i = 0; i < 3; ++i) x(i) = z(rng);
      const double h = u(rng);
      const double base = kde_log_density(WeightedParticles(pts, w, h), k, x);

      std::vector<Eigen::Index> perm(30);
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      Points pp(3, 30);
      Vector pw(30);
      for (Eigen::Index j = 0; j < 30; ++j) {
        pp.col(j) = pts.col(perm[static_cast<std::size_t>(j)]);
        pw(j) = w(perm[static_cast<std::size_t>(j)]);
      }
      ledger.require(std::abs(kde_log_density(WeightedParticles(pp, pw, h), k, x) - base) <= 1e-12,
                     "permutation changed the estimate");
      ledger.require(std::abs(kde_log_density(WeightedParticles(pts, 7.3 * w, h), k, x) - base) <= 1e-12,
                     "weight scale changed the estimate");

      // At a particle the estimate grows like h^-d as h -> 0.
      const WeightedParticles a(pts, w, 1e-3), b(pts, w, 5e-4);
      const double slope = (kde_log_density(b, k, pts.col(0)) - kde_log_density(a, k, pts.col(0))) /
                           (std::log(5e-4) - std::log(1e-3));
      ledger.require(std::abs(slope + 3.0) <= 0.03, "h slope " + fmt("%.4f", slope));
    }
    return ledger.finish("kde-invariants", "20 random particle sets in 3D");
  });
}

CheckResult estimator_invariants(std::uint64_t seed) {
  return timed("estimator-invariants", [&] {
    Rng rng(seed);
    std::normal_distribution<double> z;
    Ledger ledger;
    const auto f = Gaussian::isotropic(Vector::Zero(2), 1.0);
    const Integrand one = [](const Eigen::Ref<const Vector>&) { return Vector::Ones(1); };
    const Integrand identity = [](const Eigen::Ref<const Vector>& x) { return Vector(x); };
    for (int c = 0; c < 20; ++c) {
      Points x(2, 200);
      Vector lw(200);
      for (Eigen::Index j = 0; j < 200; ++j) {
        x(0, j) = z(rng);
        x(1, j) = z(rng);
        lw(j) = 3.0 * z(rng);
      }
      const Vector a = snis_mean(x, lw).value;
      const Vector b = snis_mean(x, (lw.array() + 123.4).matrix()).value;
      ledger.require((a - b).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + a.cwiseAbs().maxCoeff()),
                     "SNIS changed under weight rescaling");
      ledger.require(std::abs(snis_estimate(one, x, lw).value(0) - 1.0) <= 1e-12,
                     "SNIS of a constant");

      const Points y = f->sample(200, rng);
      const Vector zero = f->log_densities(y) - f->log_densities(y);
      const Vector is = is_estimate(identity, y, zero, *f).value;
      const Vector sn = snis_estimate(identity, y, zero).value;
      ledger.require((is - sn).cwiseAbs().maxCoeff() <= 1e-12, "IS and SNIS differ when q = f");
    }
    return ledger.finish("estimator-invariants", "20 random weighted samples");
  });
}

CheckResult density_invariants(std::uint64_t seed) {
  return timed("density-invariants", [&] {
    Ledger ledger;
    emd::Grid g1{-200.0, 200.0, 16384, 1};
    auto mass1 = [&](const Density& d) {
      return emd::GridDensity::from_values(
                 g1, [&] {
                   Vector v(static_cast<Eigen::Index>(g1.points));
                   for (std::size_t i = 0; i < g1.points; ++i) {
                     v(static_cast<Eigen::Index>(i)) = std::exp(d.log_density(scalar(g1.coordinate(i))));
                   }
                   return v;
                 }())
          .mass();
    };
    const auto gauss = Gaussian::isotropic(scalar(0.7), 2.5);
    const auto t3 = std::make_shared<StudentT>(scalar(-1.0), Eigen::MatrixXd::Constant(1, 1, 1.5), 3.0);
    const Mixture mix({{0.3, gauss}, {0.7, t3}});
    for (const Density* d : {static_cast<const Density*>(gauss.get()),
                             static_cast<const Density*>(t3.get()),
                             static_cast<const Density*>(&mix)}) {
      const double m = mass1(*d);
      ledger.require(std::abs(m - 1.0) <= 1e-5, std::string(to_string(d->kind())) + " mass " + fmt("%.8f", m));
    }

    emd::Grid g2{-12.0, 12.0, 401, 2};
    Eigen::Matrix2d cov;
    cov << 1.5, 0.6, 0.6, 0.8;
    const auto g2d = Gaussian::full(Vector::Zero(2), cov);
    Vector v(static_cast<Eigen::Index>(g2.size()));
    for (std::size_t i = 0; i < g2.points; ++i) {
      for (std::size_t j = 0; j < g2.points; ++j) {
        const Vector x = (Vector(2) << g2.coordinate(i), g2.coordinate(j)).finished();
        v(static_cast<Eigen::Index>(i * g2.points + j)) = std::exp(g2d->log_density(x));
      }
    }
    const double m2 = emd::GridDensity::from_values(g2, v).mass();
    ledger.require(std::abs(m2 - 1.0) <= 1e-6, "2D gaussian mass " + fmt("%.8f", m2));

    // Heavy-tail limit.
    Rng rng(seed);
    std::normal_distribution<double> z;
    const auto big_nu = std::make_shared<StudentT>(Vector::Zero(3), Eigen::MatrixXd::Identity(3, 3), 1e6);
    const auto std3 = Gaussian::isotropic(Vector::Zero(3), 1.0);
    for (int c = 0; c < 50; ++c) {
      Vector x(3);
      for (Eigen::Index i = 0; i < 3; ++i) x(i) = z(rng);
      // The gap is O(|x|^4 / nu).
      ledger.require(std::abs(big_nu->log_density(x) - std3->log_density(x)) <= 1e-3,
                     "Student-t with large nu is not Gaussian");
    }

    // Logistic posterior gradient against central differences.
    const Eigen::Index n = 40, p = 4;
    Eigen::MatrixXd feats(n, p);
    Vector labels(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < p; ++j) feats(i, j) = z(rng);
      labels(i) = z(rng) > 0 ? 1.0 : -1.0;
    }
    const LogisticPosterior post(labels, feats);
    for (int c = 0; c < 10; ++c) {
      Vector x(p + 1);
      for (Eigen::Index j = 0; j < p; ++j) x(j) = 0.5 * z(rng);
      x(p) = 0.5 + std::abs(0.3 * z(rng));  // precision, must stay positive
      const Vector grad = post.gradient(x);
      for (Eigen::Index j = 0; j <= p; ++j) {
        Vector a = x, b = x;
        a(j) += 1e-5;
        b(j) -= 1e-5;
        const double fd = (post.log_density(a) - post.log_density(b)) / 2e-5;
        ledger.require(std::abs(fd - grad(j)) <= 1e-5 * (1.0 + std::abs(fd)), "gradient coordinate " + std::to_string(j));
      }
    }
    return ledger.finish("density-invariants", "2D gaussian mass " + fmt("%.8f", m2));
  });
}

std::vector<CheckResult> run_all(std::uint64_t seed,
                                 const std::function<void(const CheckResult&)>& on_result) {
  std::vector<CheckResult> out;
  auto push = [&](CheckResult r) {
    if (on_result) on_result(r);
    out.push_back(std::move(r));
  };
  push(contraction_bound());
  push(emd_rate());
  push(emd_invariants(derive_seed(seed, 1)));
  push(weight_moments(derive_seed(seed, 2)));
  push(rar_properties(derive_seed(seed, 3)));
  push(rar_limits(derive_seed(seed, 4)));
  push(dn_convergence(derive_seed(seed, 5)));
  push(safe_bounds(derive_seed(seed, 6)));
  push(kde_invariants(derive_seed(seed, 7)));
  push(estimator_invariants(derive_seed(seed, 8)));
  push(density_invariants(derive_seed(seed, 9)));
  return out;
}

}  // namespace srais::suite
