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

#ifndef SRAIS_DATASET_HPP
#define SRAIS_DATASET_HPP

#include <srais/estimators.hpp>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace srais {

/// Waveform rows carry 21 features followed by a class in {0, 1, 2}.
inline constexpr std::size_t kWaveformFeatures = 21;
inline constexpr int kWaveformClasses = 3;

/// "k-vs-rest": class k becomes +1, every other class -1.
struct Binarization {
  int positive_class = 0;
  std::string name() const { return std::to_string(positive_class) + "-vs-rest"; }
};

Binarization parse_binarization(std::string_view rule);

struct RawDataset {
  Eigen::MatrixXd features;  ///< one row per example
  std::vector<int> classes;
  bool had_header = false;

  std::size_t size() const noexcept { return classes.size(); }
};

/// Read a Waveform-format CSV. A non-numeric first row is taken as a header.
/**
 * Throws ParseError (with the 1-based line) on a wrong column count, a
 * non-numeric cell or a class outside {0, 1, 2}; InputError if the file
 * cannot be opened or holds no rows.
 */
RawDataset load_waveform_csv(const std::string& path);
RawDataset parse_waveform_csv(std::string_view text);

/// Labels in {-1, +1} under `rule`.
Vector binarize(const std::vector<int>& classes, const Binarization& rule);

struct SplitDataset {
  LabeledData train;
  LabeledData test;
  std::vector<std::size_t> train_rows;  ///< indices into the raw file, in split order
  std::vector<std::size_t> test_rows;
  Vector feature_mean;   ///< of the training split, before standardization
  Vector feature_scale;  ///< training standard deviations (1 where a column is constant)
};

/// Seeded split, then standardize both parts with training-split statistics.
SplitDataset split_dataset(const RawDataset& raw, const Binarization& rule, double train_fraction,
                           std::uint64_t seed);

/// Fraction of the larger class among `labels`.
double majority_fraction(const Vector& labels);

}  // namespace srais

#endif  // SRAIS_DATASET_HPP
