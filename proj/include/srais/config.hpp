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

#ifndef SRAIS_CONFIG_HPP
#define SRAIS_CONFIG_HPP

#include <srais/density.hpp>
#include <srais/emd.hpp>
#include <srais/sampler.hpp>

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace srais {

enum class ExperimentKind { toy, blr, emd };

std::string_view to_string(ExperimentKind k) noexcept;

struct ToySettings {
  ToyTarget target = ToyTarget::cold_start;
  std::size_t dim = 16;
  double nu = 3.0;  ///< degrees of freedom of the Student-t start / safe density
};

struct BlrSettings {
  std::string dataset;            ///< CSV path; required for blr runs
  double train_fraction = 0.8;
  std::string binarization = "0-vs-rest";
  double a = 1.0;                 ///< Gamma shape
  double b = 0.01;                ///< Gamma rate
  double safe_variance = 5.0;     ///< q0 = N(0, safe_variance I)
};

struct EmdSettings {
  emd::Grid grid;
  double f_mean = 0.0, f_variance = 1.0;
  double q1_mean = 0.0, q1_variance = 4.0;
  std::vector<emd::RateSchedule> schedules{emd::RateSchedule::constant, emd::RateSchedule::harmonic,
                                           emd::RateSchedule::power};
  double c = 0.5;
  double beta = 0.5;
  std::size_t steps = 50;
};

struct RunConfig {
  std::string name = "custom";
  ExperimentKind kind = ExperimentKind::toy;
  ToySettings toy;
  BlrSettings blr;
  EmdSettings emd;
  SraisConfig sampler;
  std::size_t replicates = 1;
  std::uint64_t seed = 0;
  std::string out_dir;  ///< empty: fall back to SRAIS_OUT, then the working directory

  std::size_t dim() const noexcept;
  std::size_t total_budget() const noexcept {
    return sampler.n0 + sampler.iterations * sampler.batch;
  }
};

/// Dotted-key overrides such as {"eta.policy", "constant"}; values use TOML syntax.
using Overrides = std::vector<std::pair<std::string, std::string>>;

/// Parse and validate configuration text. Throws ParseError or ConfigError.
/**
 * Unknown keys are reported as problems. All validation problems, including
 * the schedule checks of validate_assumptions, are collected and reported in
 * one ConfigError.
 */
RunConfig parse_config(std::string_view text, const Overrides& overrides = {},
                       std::string_view source = "<config>");

/// Load a file, or a preset when `path_or_preset` names one.
RunConfig load_config(const std::string& path_or_preset, const Overrides& overrides = {});

/// Canonical TOML rendering of a configuration with every default filled in.
std::string echo_config(const RunConfig& cfg);

/// Presets that mirror the published experiments.
std::vector<std::string> preset_names();
/// Reduced-budget variants for quick runs (suffix "-small").
std::vector<std::string> desk_preset_names();
bool is_preset(std::string_view name);
/// TOML text of a preset. Throws InputError for unknown names.
std::string preset_text(std::string_view name);

/// Non-fatal remarks from validate_assumptions for a parsed configuration.
std::vector<std::string> assumption_warnings(const RunConfig& cfg);

}  // namespace srais

#endif  // SRAIS_CONFIG_HPP
