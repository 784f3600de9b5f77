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

#include <srais/error.hpp>
#include <srais/experiment.hpp>
#include <srais/stats.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#ifndef SRAIS_VERSION
#define SRAIS_VERSION "unknown"
#endif

namespace srais {

std::string_view version_string() noexcept { return SRAIS_VERSION; }

namespace {

// Stream index for the train/test split; replicates use 0, 1, 2, ...
constexpr std::uint64_t kSplitStream = 0x5EED0F5B117ULL;
constexpr std::uint64_t kSafetyProbeStream = 0x5AFE0C0DEULL;

}  // namespace

Problem build_problem(const RunConfig& cfg) {
  Problem p;
  switch (cfg.kind) {
    case ExperimentKind::toy: {
      auto toy = toy_target(cfg.toy.target, cfg.toy.dim, cfg.toy.nu);
      p.target = toy.target;
      p.safe = toy.initial;
      p.true_mean = toy.true_mean;
      p.description = std::string(to_string(cfg.toy.target)) + " d=" + std::to_string(cfg.toy.dim);
      break;
    }
    case ExperimentKind::blr: {
      const auto raw = load_waveform_csv(cfg.blr.dataset);
      const auto rule = parse_binarization(cfg.blr.binarization);
      p.data = split_dataset(raw, rule, cfg.blr.train_fraction, derive_seed(cfg.seed, kSplitStream));
      p.target = std::make_shared<LogisticPosterior>(p.data->train.labels, p.data->train.features,
                                                     cfg.blr.a, cfg.blr.b);
      p.safe = Gaussian::isotropic(Vector::Zero(static_cast<Eigen::Index>(kWaveformFeatures + 1)),
                                   cfg.blr.safe_variance);
      p.description = "logistic regression on " + std::to_string(raw.size()) + " rows (" +
                      std::to_string(p.data->train.size()) + " train, " +
                      std::to_string(p.data->test.size()) + " test)";
      break;
    }
    case ExperimentKind::emd:
      throw InputError("emd configurations have no sampler problem");
  }
  return p;
}

namespace {

/// Sigmoid of every particle's linear score on the test rows, filled incrementally.
class PredictiveCache {
 public:
  explicit PredictiveCache(const LabeledData& test) : test_(test) {}

  double accuracy(const ParticleStore& store, const Vector& weights) {
    const auto n = static_cast<Eigen::Index>(store.size());
    if (n > probs_.cols()) {
      const Eigen::Index first = probs_.cols();
      probs_.conservativeResize(test_.features.rows(), n);
      const auto omega = store.points().middleCols(first, n - first).topRows(test_.features.cols());
      const Eigen::MatrixXd scores = test_.features * omega;
      probs_.middleCols(first, n - first) = scores.unaryExpr([](double s) { return sigmoid(s); });
    }
    return accuracy_from_probabilities(test_.labels, probs_ * weights);
  }

 private:
  const LabeledData& test_;
  Eigen::MatrixXd probs_;
};

}  // namespace

ReplicateResult run_replicate(const RunConfig& cfg, const Problem& problem, std::size_t replicate) {
  using Clock = std::chrono::steady_clock;
  ReplicateResult res;
  res.replicate = replicate;
  res.seed = derive_seed(cfg.seed, replicate);
  std::optional<PredictiveCache> cache;
  if (problem.data) cache.emplace(problem.data->test);

  auto finish = [&](const SraisState& st, TraceRow& row, Clock::time_point t0) {
    const Vector w = estimate_weights(st, cfg.sampler.estimate_weights);
    row.estimate = st.store.points() * w;
    if (problem.true_mean) row.squared_error = squared_error(row.estimate, *problem.true_mean);
    if (cache) row.accuracy = cache->accuracy(st.store, w);
    row.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    res.rows.push_back(std::move(row));
  };

  try {
    auto t0 = Clock::now();
    TraceRow first;
    SraisState st = srais_initialize(cfg.sampler, *problem.target, problem.safe, Rng(res.seed), &first.diag);
    finish(st, first, t0);
    for (std::size_t k = 1; k <= cfg.sampler.iterations; ++k) {
      t0 = Clock::now();
      TraceRow row;
      row.diag = srais_step(st, cfg.sampler, *problem.target);
      finish(st, row, t0);
    }
  } catch (const std::exception& e) {
    res.ok = false;
    res.error = e.what();
  }
  return res;
}

std::vector<AggregateRow> aggregate(const std::vector<ReplicateResult>& reps) {
  std::vector<const ReplicateResult*> ok;
  for (const auto& r : reps) if (r.ok) ok.push_back(&r);
  std::vector<AggregateRow> out;
  if (ok.empty()) return out;
  const std::size_t n_rows = ok.front()->rows.size();
  for (std::size_t i = 0; i < n_rows; ++i) {
    std::vector<double> lse, eta, acc;
    for (const auto* r : ok) {
      const auto& row = r->rows.at(i);
      lse.push_back(std::log(row.squared_error));
      eta.push_back(row.diag.eta);
      acc.push_back(row.accuracy);
    }
    AggregateRow a;
    a.iteration = ok.front()->rows[i].diag.iteration;
    a.replicates = ok.size();
    a.mean_log_squared_error = stats::mean(lse);
    a.std_log_squared_error = stats::stddev(lse);
    a.mean_eta = stats::mean(eta);
    a.mean_accuracy = stats::mean(acc);
    a.std_accuracy = stats::stddev(acc);
    out.push_back(a);
  }
  return out;
}

std::vector<EtaQuantileRow> eta_quantiles(const std::vector<ReplicateResult>& reps) {
  std::vector<const ReplicateResult*> ok;
  for (const auto& r : reps) if (r.ok) ok.push_back(&r);
  std::vector<EtaQuantileRow> out;
  if (ok.empty()) return out;
  constexpr double kLevels[5] = {0.0, 0.25, 0.5, 0.75, 1.0};
  for (std::size_t i = 0; i < ok.front()->rows.size(); ++i) {
    std::vector<double> eta;
    for (const auto* r : ok) eta.push_back(r->rows.at(i).diag.eta);
    EtaQuantileRow q;
    q.iteration = ok.front()->rows[i].diag.iteration;
    for (int j = 0; j < 5; ++j) q.q[j] = stats::quantile(eta, kLevels[j]);
    out.push_back(q);
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<EmdScheduleReport> run_emd(const EmdSettings& s) {
  auto gaussian = [](double mean, double var) {
    return [mean, var](double x) { return -0.5 * (x - mean) * (x - mean) / var; };
  };
  const auto f = emd::GridDensity::from_log(s.grid, emd::GridDensity::LogFn1(gaussian(s.f_mean, s.f_variance)));
  const auto q1 = emd::GridDensity::from_log(s.grid, emd::GridDensity::LogFn1(gaussian(s.q1_mean, s.q1_variance)));
  std::vector<EmdScheduleReport> out;
  for (auto kind : s.schedules) {
    EmdScheduleReport rep;
    rep.schedule = kind;
    const auto etas = emd::EtaSchedule{kind, s.c, s.beta}.take(s.steps);
    try {
      rep.rows = emd::verify_contraction(f, q1, etas);
    } catch (const VerificationFailure& e) {
      rep.failure = e.what();
      rep.rows = emd::contraction_report(f, q1, etas);
    }
    rep.averaged_kl = emd::averaged_iterate_kl(f, q1, etas);
    out.push_back(std::move(rep));
  }
  return out;
}

std::size_t ExperimentResult::failed() const {
  std::size_t n = 0;
  for (const auto& r : replicates) n += r.ok ? 0 : 1;
  return n;
}

// ---------------------------------------------------------------------------
// CSV

std::string csv_number(double v) {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

namespace {

std::string join(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += cells[i];
  }
  return line + "\n";
}

void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << content;
  if (!out) throw std::runtime_error("write failed for " + p.string());
}

}  // namespace

std::vector<std::string> trace_header(std::size_t dim) {
  std::vector<std::string> h = {"replicate", "iteration", "eta",         "lambda",
                                "h",         "n_particles", "ess",       "batch_ess",
                                "d_n",       "safe_margin", "max_regularized_weight"};
  for (std::size_t i = 0; i < dim; ++i) h.push_back("estimate_" + std::to_string(i));
  h.emplace_back("squared_error");
  h.emplace_back("accuracy");
  return h;
}

std::string format_trace_csv(const ReplicateResult& rep, std::size_t dim) {
  std::string out = join(trace_header(dim));
  for (const auto& row : rep.rows) {
    const auto& d = row.diag;
    std::vector<std::string> c = {std::to_string(rep.replicate), std::to_string(d.iteration),
                                  csv_number(d.eta), csv_number(d.lambda), csv_number(d.h),
                                  std::to_string(d.n_particles), csv_number(d.ess),
                                  csv_number(d.batch_ess), csv_number(d.d_n),
                                  csv_number(d.safe_margin), csv_number(d.max_regularized_weight)};
    for (Eigen::Index i = 0; i < row.estimate.size(); ++i) c.push_back(csv_number(row.estimate(i)));
    c.push_back(csv_number(row.squared_error));
    c.push_back(csv_number(row.accuracy));
    out += join(c);
  }
  return out;
}

std::string format_aggregate_csv(const std::vector<AggregateRow>& rows) {
  std::string out = join({"iteration", "replicates", "mean_log_squared_error", "std_log_squared_error",
                          "mean_eta", "mean_accuracy", "std_accuracy"});
  for (const auto& a : rows) {
    out += join({std::to_string(a.iteration), std::to_string(a.replicates),
                 csv_number(a.mean_log_squared_error), csv_number(a.std_log_squared_error),
                 csv_number(a.mean_eta), csv_number(a.mean_accuracy), csv_number(a.std_accuracy)});
  }
  return out;
}

std::string format_eta_quantiles_csv(const std::vector<EtaQuantileRow>& rows) {
  std::string out = join({"iteration", "q0", "q25", "q50", "q75", "q100"});
  for (const auto& r : rows) {
    out += join({std::to_string(r.iteration), csv_number(r.q[0]), csv_number(r.q[1]),
                 csv_number(r.q[2]), csv_number(r.q[3]), csv_number(r.q[4])});
  }
  return out;
}

std::string format_contraction_csv(const std::vector<EmdScheduleReport>& reports) {
  std::string out = join({"schedule", "step", "eta", "tv", "kl", "bound", "slack", "averaged_kl"});
  for (const auto& rep : reports) {
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
      const auto& r = rep.rows[i];
      out += join({csv_field(emd::to_string(rep.schedule)), std::to_string(r.step), csv_number(r.eta),
                   csv_number(r.tv), csv_number(r.kl), csv_number(r.bound), csv_number(r.slack),
                   csv_number(rep.averaged_kl.at(i))});
    }
  }
  return out;
}

namespace {

std::string format_timing_csv(const std::vector<ReplicateResult>& reps) {
  std::string out = join({"replicate", "iteration", "wall_ms"});
  for (const auto& r : reps) {
    for (const auto& row : r.rows) {
      out += join({std::to_string(r.replicate), std::to_string(row.diag.iteration), csv_number(row.wall_ms)});
    }
  }
  return out;
}

std::string format_meta(const ExperimentResult& res, const Problem* problem) {
  const auto& cfg = res.config;
  std::ostringstream m;
  m << "version: srais " << version_string() << "\n"
    << "experiment: " << cfg.name << " (" << to_string(cfg.kind) << ")\n"
    << "seed: " << cfg.seed << "\n";
  if (problem) {
    m << "problem: " << problem->description << "\n";
    if (problem->data) {
      m << "binarization: " << cfg.blr.binarization << "\n"
        << "split: seeded, train_fraction " << csv_number(cfg.blr.train_fraction) << "\n"
        << "standardization: per-column mean 0, variance 1 using training-split statistics\n";
      if (res.majority_baseline) m << "majority_baseline: " << csv_number(*res.majority_baseline) << "\n";
    }
    if (res.safe_constant) m << "safe_constant: " << csv_number(*res.safe_constant) << " (min q0/f over probes)\n";
    m << "replicates: " << res.replicates.size() << " (failed " << res.failed() << ")\n";
    for (const auto& r : res.replicates) {
      m << "replicate " << r.replicate << ": seed " << r.seed << ", "
        << (r.ok ? "ok" : "failed: " + r.error) << "\n";
    }
  }
  for (const auto& rep : res.emd) {
    m << "schedule " << emd::to_string(rep.schedule) << ": "
      << (rep.failure.empty() ? "bound holds at every step" : "FAILED: " + rep.failure) << "\n";
  }
  for (const auto& w : res.warnings) m << "warning: " << w << "\n";
  m << "\n# configuration\n" << echo_config(cfg);
  return m.str();
}

}  // namespace

std::filesystem::path resolve_out_dir(const std::string& flag, const std::string& config_value) {
  if (!flag.empty()) return flag;
  if (!config_value.empty()) return config_value;
  if (const char* env = std::getenv("SRAIS_OUT"); env && *env) return env;
  return ".";
}

ExperimentResult run_experiment(const RunConfig& cfg, const std::filesystem::path& out_dir,
                                std::ostream* log, unsigned threads) {
  ExperimentResult res;
  res.config = cfg;
  res.out_dir = out_dir;
  std::filesystem::create_directories(out_dir);

  if (cfg.kind == ExperimentKind::emd) {
    res.emd = run_emd(cfg.emd);
    write_file(out_dir / "contraction.csv", format_contraction_csv(res.emd));
    write_file(out_dir / "meta.txt", format_meta(res, nullptr));
    return res;
  }

  res.warnings = assumption_warnings(cfg);
  const Problem problem = build_problem(cfg);
  if (problem.data) res.majority_baseline = majority_fraction(problem.data->test.labels);
  {
    AssumptionReport probe;
    Rng rng(derive_seed(cfg.seed, kSafetyProbeStream));
    check_safe_domination(probe, *problem.safe, *problem.target, rng);
    res.warnings.insert(res.warnings.end(), probe.warnings.begin(), probe.warnings.end());
    // For an unnormalized target the ratio carries an unknown constant.
    if (problem.target->normalized()) res.safe_constant = probe.safe_constant;
  }

  res.replicates.resize(cfg.replicates);
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, cfg.replicates));
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < cfg.replicates; i = next++) {
      res.replicates[i] = run_replicate(cfg, problem, i);
      if (log) {
        std::lock_guard lock(log_mutex);
        const auto& r = res.replicates[i];
        *log << "replicate " << i << (r.ok ? " done" : " failed: " + r.error) << "\n";
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (const auto& r : res.replicates) {
    if (!r.ok) {
      res.warnings.push_back("replicate " + std::to_string(r.replicate) +
                             " failed and is excluded from aggregates: " + r.error);
    }
  }
  if (res.failed() == res.replicates.size()) res.warnings.push_back("every replicate failed");

  const std::size_t dim = cfg.dim();
  for (const auto& r : res.replicates) {
    write_file(out_dir / ("trace_rep" + std::to_string(r.replicate) + ".csv"), format_trace_csv(r, dim));
  }
  write_file(out_dir / "aggregate.csv", format_aggregate_csv(aggregate(res.replicates)));
  write_file(out_dir / "eta_quantiles.csv", format_eta_quantiles_csv(eta_quantiles(res.replicates)));
  write_file(out_dir / "timing.csv", format_timing_csv(res.replicates));
  write_file(out_dir / "meta.txt", format_meta(res, &problem));
  return res;
}

}  // namespace srais
