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

#include <srais/dataset.hpp>
#include <srais/error.hpp>
#include <srais/random.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <optional>
#include <sstream>

namespace srais {

Binarization parse_binarization(std::string_view rule) {
  constexpr std::string_view suffix = "-vs-rest";
  if (rule.size() == 1 + suffix.size() && rule.ends_with(suffix)) {
    const int k = rule[0] - '0';
    if (k >= 0 && k < kWaveformClasses) return Binarization{k};
  }
  throw InputError("unknown binarization rule '" + std::string(rule) +
                   "' (expected 0-vs-rest, 1-vs-rest or 2-vs-rest)");
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '"')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '"')) {
    s.remove_suffix(1);
  }
  return s;
}

std::optional<double> to_number(std::string_view cell) {
  cell = trim(cell);
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || end != cell.data() + cell.size() || cell.empty()) return std::nullopt;
  return v;
}

std::vector<std::string_view> split_cells(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    cells.push_back(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

}  // namespace

RawDataset parse_waveform_csv(std::string_view text) {
  constexpr std::size_t kColumns = kWaveformFeatures + 1;
  RawDataset out;
  std::vector<double> values;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (trim(line).empty()) continue;

    const auto cells = split_cells(line);
    if (cells.size() != kColumns) {
      throw ParseError("expected " + std::to_string(kColumns) + " columns, found " +
                       std::to_string(cells.size()), line_no);
    }
    std::vector<std::optional<double>> parsed;
    parsed.reserve(kColumns);
    bool any_numeric = false, all_numeric = true;
    for (auto c : cells) {
      parsed.push_back(to_number(c));
      any_numeric = any_numeric || parsed.back().has_value();
      all_numeric = all_numeric && parsed.back().has_value();
    }
    if (!all_numeric) {
      if (out.classes.empty() && !out.had_header && !any_numeric) {
        out.had_header = true;
        continue;
      }
      for (std::size_t i = 0; i < kColumns; ++i) {
        if (!parsed[i]) {
          throw ParseError("non-numeric cell '" + std::string(trim(cells[i])) + "' in column " +
                           std::to_string(i + 1), line_no);
        }
      }
    }
    const double cls = *parsed.back();
    if (cls != std::floor(cls) || cls < 0 || cls >= kWaveformClasses) {
      throw ParseError("unknown class value '" + std::string(trim(cells.back())) + "'", line_no);
    }
    for (std::size_t i = 0; i < kWaveformFeatures; ++i) {
      if (!std::isfinite(*parsed[i])) throw ParseError("non-finite feature value", line_no);
      values.push_back(*parsed[i]);
    }
    out.classes.push_back(static_cast<int>(cls));
  }
  if (out.classes.empty()) throw InputError("dataset holds no rows");
  const auto n = static_cast<Eigen::Index>(out.classes.size());
  out.features = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      values.data(), n, static_cast<Eigen::Index>(kWaveformFeatures));
  return out;
}

RawDataset load_waveform_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open dataset '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_waveform_csv(buf.str());
}

Vector binarize(const std::vector<int>& classes, const Binarization& rule) {
  Vector labels(static_cast<Eigen::Index>(classes.size()));
  for (std::size_t i = 0; i < classes.size(); ++i) {
    labels(static_cast<Eigen::Index>(i)) = classes[i] == rule.positive_class ? 1.0 : -1.0;
  }
  return labels;
}

SplitDataset split_dataset(const RawDataset& raw, const Binarization& rule, double train_fraction,
                           std::uint64_t seed) {
  const std::size_t n = raw.size();
  if (n < 2) throw InputError("need at least two rows to split");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw InputError("train fraction must lie in (0, 1)");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  for (std::size_t i = n - 1; i > 0; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i);
    std::swap(order[i], order[pick(rng)]);
  }
  auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(n)));
  n_train = std::clamp<std::size_t>(n_train, 1, n - 1);

  SplitDataset out;
  out.train_rows.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  out.test_rows.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());

  const Vector labels = binarize(raw.classes, rule);
  auto gather = [&](const std::vector<std::size_t>& rows) {
    LabeledData d;
    d.labels.resize(static_cast<Eigen::Index>(rows.size()));
    d.features.resize(static_cast<Eigen::Index>(rows.size()), raw.features.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto r = static_cast<Eigen::Index>(rows[i]);
      d.labels(static_cast<Eigen::Index>(i)) = labels(r);
      d.features.row(static_cast<Eigen::Index>(i)) = raw.features.row(r);
    }
    return d;
  };
  out.train = gather(out.train_rows);
  out.test = gather(out.test_rows);

  out.feature_mean = out.train.features.colwise().mean().transpose();
  out.feature_scale.resize(out.feature_mean.size());
  const double denom = std::max<double>(1.0, static_cast<double>(n_train) - 1.0);
  for (Eigen::Index j = 0; j < out.feature_mean.size(); ++j) {
    const double var =
        (out.train.features.col(j).array() - out.feature_mean(j)).square().sum() / denom;
    out.feature_scale(j) = var > 0.0 ? std::sqrt(var) : 1.0;
  }
  for (auto* d : {&out.train, &out.test}) {
    d->features = (d->features.rowwise() - out.feature_mean.transpose()).array().rowwise() /
                  out.feature_scale.transpose().array();
  }
  return out;
}

double majority_fraction(const Vector& labels) {
  if (labels.size() == 0) throw InputError("no labels");
  const auto pos = static_cast<double>((labels.array() > 0.0).count());
  const auto n = static_cast<double>(labels.size());
  return std::max(pos, n - pos) / n;
}

}  // namespace srais
