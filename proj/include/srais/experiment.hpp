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

#ifndef SRAIS_EXPERIMENT_HPP
#define SRAIS_EXPERIMENT_HPP

#include <srais/config.hpp>
#include <srais/dataset.hpp>
#include <srais/sampler.hpp>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace srais {

/// Version string recorded in metadata.
std::string_view version_string() noexcept;

struct ReplicateResult {
  std::size_t replicate = 0;
  std::uint64_t seed = 0;
  bool ok = true;
  std::string error;          ///< set when the replicate aborted
  std::vector<TraceRow> rows; ///< rows completed before any abort
};

/// One row of aggregate.csv, over the successful replicates.
struct AggregateRow {
  std::size_t iteration = 0;
  std::size_t replicates = 0;
  double mean_log_squared_error = 0.0;
  double std_log_squared_error = 0.0;
  double mean_eta = 0.0;
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;
};

struct EtaQuantileRow {
  std::size_t iteration = 0;
  double q[5] = {0, 0, 0, 0, 0};  ///< 0, 25, 50, 75, 100 percent
};

/// Resolved target, safe density and (for blr) the data split of a sampler run.
struct Problem {
  DensityPtr target;
  DensityPtr safe;
  std::optional<Vector> true_mean;
  std::optional<SplitDataset> data;  ///< blr only
  std::string description;
};

Problem build_problem(const RunConfig& cfg);

/// Run one replicate with seed derive_seed(cfg.seed, replicate). Never throws on sampler failure.
ReplicateResult run_replicate(const RunConfig& cfg, const Problem& problem, std::size_t replicate);

std::vector<AggregateRow> aggregate(const std::vector<ReplicateResult>& reps);
std::vector<EtaQuantileRow> eta_quantiles(const std::vector<ReplicateResult>& reps);

/// Grid verification of the mirror-descent contraction, one block per schedule.
struct EmdScheduleReport {
  emd::RateSchedule schedule;
  std::vector<emd::ContractionRow> rows;
  std::vector<double> averaged_kl;
  std::string failure;  ///< empty when every step satisfied the bound and KL decreased
};

std::vector<EmdScheduleReport> run_emd(const EmdSettings& s);

struct ExperimentResult {
  RunConfig config;
  std::filesystem::path out_dir;
  std::vector<ReplicateResult> replicates;
  std::vector<EmdScheduleReport> emd;  ///< emd runs only
  std::vector<std::string> warnings;
  std::optional<double> majority_baseline;  ///< blr: majority-class rate on the test split
  std::optional<double> safe_constant;      ///< empirical min q0 / f over probe points (normalized targets)

  std::size_t failed() const;
};

/// Run every replicate, write the output files into `out_dir` and return the traces.
/**
 * Files: trace_rep<i>.csv, aggregate.csv, eta_quantiles.csv, timing.csv and
 * meta.txt; emd runs write contraction.csv and meta.txt. Replicates run on up to
 * `threads` workers (0 = hardware concurrency); results do not depend on it.
 */
ExperimentResult run_experiment(const RunConfig& cfg, const std::filesystem::path& out_dir,
                                std::ostream* log = nullptr, unsigned threads = 0);

/// Output directory: the flag, else the configured value, else SRAIS_OUT, else ".".
std::filesystem::path resolve_out_dir(const std::string& flag, const std::string& config_value);

// CSV helpers, exposed for tests.
std::string csv_number(double v);
std::string csv_field(std::string_view s);
std::vector<std::string> trace_header(std::size_t dim);
std::string format_trace_csv(const ReplicateResult& rep, std::size_t dim);
std::string format_aggregate_csv(const std::vector<AggregateRow>& rows);
std::string format_eta_quantiles_csv(const std::vector<EtaQuantileRow>& rows);
std::string format_contraction_csv(const std::vector<EmdScheduleReport>& reports);

}  // namespace srais

#endif  // SRAIS_EXPERIMENT_HPP
