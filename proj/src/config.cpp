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

#include <srais/config.hpp>
#include <srais/dataset.hpp>
#include <srais/error.hpp>

#include <toml.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace srais {

std::string_view to_string(ExperimentKind k) noexcept {
  switch (k) {
    case ExperimentKind::toy: return "toy";
    case ExperimentKind::blr: return "blr";
    case ExperimentKind::emd: return "emd";
  }
  return "unknown";
}

std::size_t RunConfig::dim() const noexcept {
  switch (kind) {
    case ExperimentKind::toy: return toy.dim;
    case ExperimentKind::blr: return kWaveformFeatures + 1;
    case ExperimentKind::emd: return emd.grid.dims;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Presets

namespace {

// Posterior widths on standardized features are well below 1; wider kernels
// leave the unregularized baseline collapsing on its first batches.
constexpr double kBlrH0 = 0.1;

std::string toy_preset(std::string_view name, std::string_view target, double h0, bool small) {
  std::ostringstream s;
  s << "name = \"" << name << "\"\n"
    << "seed = 20260101\n"
    << "replicates = " << (small ? 20 : 50) << "\n\n"
    << "[experiment]\nkind = \"toy\"\ntarget = \"" << target << "\"\ndim = 16\n\n"
    << "[budget]\n"
    << "n0 = " << (small ? 4000 : 40000) << "\n"
    << "batch = " << (small ? 1800 : 18000) << "\n"
    << "iterations = 20\n\n"
    << "[schedule]\n"
    << "lambda_policy = \"kde_power\"\n"
    << "lambda0 = 0.5\n"
    << "h_policy = \"kde_power\"\n"
    << "h0 = " << h0 << "\n\n"
    << "[eta]\npolicy = \"rar\"\nalpha = 0.5\n\n"
    << "[safe]\nnu = 3.0\n\n"
    << "[subsample]\nmode = \"uniform\"\nrule = \"sqrt\"\n\n"
    << "[estimate]\nweights = \"regularized\"\n";
  return s.str();
}

std::string blr_preset(std::string_view name, bool small) {
  std::ostringstream s;
  s << "name = \"" << name << "\"\n"
    << "seed = 20260102\n"
    << "replicates = " << (small ? 10 : 100) << "\n\n"
    << "[experiment]\nkind = \"blr\"\n\n"
    << "[dataset]\n"
    << "# path = \"waveform.csv\"   (or pass --dataset)\n"
    << "train_fraction = 0.8\n"
    << "binarization = \"0-vs-rest\"\n\n"
    << "[budget]\n"
    << "n0 = " << (small ? 200 : 2000) << "\n"
    << "batch = " << (small ? 20 : 200) << "\n"
    << "iterations = 300\n\n"
    << "[schedule]\n"
    << "lambda_policy = \"power\"\n"
    << "lambda0 = 0.5\n"
    << "lambda_exponent = 0.5\n"
    << "h_policy = \"power\"\n"
    << "h0 = " << kBlrH0 << "\n\n"
    << "[eta]\npolicy = \"rar\"\nalpha = 0.2\n\n"
    << "[safe]\nvariance = 5.0\n\n"
    << "[blr]\na = 1.0\nb = 0.01\n\n"
    << "[subsample]\nmode = \"uniform\"\nrule = \"sqrt\"\n\n"
    << "[estimate]\nweights = \"regularized\"\n";
  return s.str();
}

constexpr std::string_view kEmdPreset = R"(name = "emd-lemma2"
seed = 0

[experiment]
kind = "emd"

[emd]
lo = -20.0
hi = 20.0
points = 8192
f_mean = 0.0
f_variance = 1.0
q1_mean = 0.0
q1_variance = 4.0
schedules = ["constant", "harmonic", "power"]
c = 0.5
beta = 0.5
steps = 50
)";

// Cold start needs a narrower kernel than the mixtures: with h0 = 1 even the
// unregularized baseline stalls on its first batches.
constexpr double kColdStartH0 = 0.3;
constexpr double kMixtureH0 = 1.0;

}  // namespace

std::vector<std::string> preset_names() {
  return {"cold-start-16", "gaussian-mixture-16", "anisotropic-16", "blr-waveform", "emd-lemma2"};
}

std::vector<std::string> desk_preset_names() {
  return {"cold-start-16-small", "gaussian-mixture-16-small", "anisotropic-16-small",
          "blr-waveform-small"};
}

bool is_preset(std::string_view name) {
  for (const auto& n : preset_names()) if (n == name) return true;
  for (const auto& n : desk_preset_names()) if (n == name) return true;
  return false;
}

std::string preset_text(std::string_view name) {
  const bool small = name.ends_with("-small");
  const std::string_view base = small ? name.substr(0, name.size() - 6) : name;
  if (base == "cold-start-16") return toy_preset(name, "cold_start", kColdStartH0, small);
  if (base == "gaussian-mixture-16") return toy_preset(name, "gaussian_mixture", kMixtureH0, small);
  if (base == "anisotropic-16") return toy_preset(name, "anisotropic_mixture", kMixtureH0, small);
  if (base == "blr-waveform") return blr_preset(name, small);
  if (name == "emd-lemma2") return std::string(kEmdPreset);
  throw InputError("unknown preset '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

/// Typed access to a parsed table that records problems instead of throwing.
class Reader {
 public:
  Reader(const toml::table& root, std::vector<std::string>& problems)
      : root_(root), problems_(problems) {}

  template <class T>
  T get(std::string_view dotted, T fallback) {
    seen_.insert(std::string(dotted));
    const auto node = root_.at_path(dotted);
    if (!node) return fallback;
    if constexpr (std::is_same_v<T, double>) {
      if (auto v = node.value<double>()) return *v;  // integers convert
    } else if constexpr (std::is_same_v<T, bool>) {
      if (auto v = node.as_boolean()) return v->get();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (auto v = node.as_string()) return v->get();
    } else if constexpr (std::is_same_v<T, std::int64_t>) {
      if (auto v = node.as_integer()) return v->get();
    }
    problems_.push_back(std::string(dotted) + ": wrong value type");
    return fallback;
  }

  std::size_t count(std::string_view dotted, std::size_t fallback) {
    const auto v = get<std::int64_t>(dotted, static_cast<std::int64_t>(fallback));
    if (v < 0) {
      problems_.push_back(std::string(dotted) + " must be nonnegative");
      return fallback;
    }
    return static_cast<std::size_t>(v);
  }

  std::vector<double> numbers(std::string_view dotted) {
    seen_.insert(std::string(dotted));
    std::vector<double> out;
    const auto node = root_.at_path(dotted);
    if (!node) return out;
    const auto* arr = node.as_array();
    if (!arr) {
      problems_.push_back(std::string(dotted) + ": expected an array of numbers");
      return out;
    }
    for (const auto& el : *arr) {
      if (auto v = el.value<double>()) out.push_back(*v);
      else problems_.push_back(std::string(dotted) + ": expected an array of numbers");
    }
    return out;
  }

  std::vector<std::string> strings(std::string_view dotted, std::vector<std::string> fallback) {
    seen_.insert(std::string(dotted));
    const auto node = root_.at_path(dotted);
    if (!node) return fallback;
    std::vector<std::string> out;
    const auto* arr = node.as_array();
    if (!arr) {
      problems_.push_back(std::string(dotted) + ": expected an array of strings");
      return fallback;
    }
    for (const auto& el : *arr) {
      if (auto v = el.value<std::string>()) out.push_back(*v);
      else problems_.push_back(std::string(dotted) + ": expected an array of strings");
    }
    return out;
  }

  bool has(std::string_view dotted) const { return static_cast<bool>(root_.at_path(dotted)); }

  /// Parse a string-valued enum with `parse`, recording failures.
  template <class E, class Parse>
  E choice(std::string_view dotted, E fallback, Parse parse) {
    if (!has(dotted)) {
      seen_.insert(std::string(dotted));
      return fallback;
    }
    const std::string s = get<std::string>(dotted, "");
    try {
      return parse(s);
    } catch (const InputError& e) {
      problems_.push_back(std::string(dotted) + ": " + e.what());
      return fallback;
    }
  }

  void report_unknown() {
    for (const auto& [section, node] : root_) {
      const std::string sec(section.str());
      if (const auto* t = node.as_table()) {
        for (const auto& [key, _] : *t) {
          const std::string full = sec + "." + std::string(key.str());
          if (!seen_.count(full)) problems_.push_back("unknown key '" + full + "'");
        }
      } else if (!seen_.count(sec)) {
        problems_.push_back("unknown key '" + sec + "'");
      }
    }
  }

 private:
  const toml::table& root_;
  std::vector<std::string>& problems_;
  std::set<std::string> seen_;
};

toml::table parse_table(std::string_view text, std::string_view source) {
  try {
    return toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    throw ParseError(std::string(e.description()), static_cast<std::size_t>(e.source().begin.line));
  }
}

void apply_override(toml::table& root, const std::string& key, const std::string& value) {
  const auto dot = key.find('.');
  toml::table* target = &root;
  std::string leaf = key;
  if (dot != std::string::npos) {
    const std::string section = key.substr(0, dot);
    leaf = key.substr(dot + 1);
    if (leaf.find('.') != std::string::npos || section.empty() || leaf.empty()) {
      throw ConfigError({"override key '" + key + "' must be 'key' or 'section.key'"});
    }
    auto* existing = root.get(section);
    if (!existing) {
      root.insert(section, toml::table{});
      existing = root.get(section);
    }
    target = existing->as_table();
    if (!target) throw ConfigError({"override section '" + section + "' is not a table"});
  }
  // Values are TOML literals; bare words fall back to strings.
  toml::table tmp;
  try {
    tmp = toml::parse("v = " + value);
  } catch (const toml::parse_error&) {
    tmp.insert("v", value);
  }
  target->insert_or_assign(leaf, std::move(*tmp.get("v")));
}

void check_unit_interval(std::vector<std::string>& problems, const char* name, const char* key,
                         double v, bool allow_zero) {
  const bool ok = allow_zero ? (v >= 0.0 && v <= 1.0) : (v > 0.0 && v <= 1.0);
  if (!ok) {
    std::ostringstream s;
    s << name << " not in " << (allow_zero ? "[0,1]" : "(0,1]") << ": " << key << " = " << v;
    problems.push_back(s.str());
  }
}

}  // namespace

RunConfig parse_config(std::string_view text, const Overrides& overrides, std::string_view source) {
  toml::table root = parse_table(text, source);
  for (const auto& [k, v] : overrides) apply_override(root, k, v);

  std::vector<std::string> problems;
  Reader r(root, problems);
  RunConfig cfg;

  cfg.name = r.get<std::string>("name", cfg.name);
  const auto seed = r.get<std::int64_t>("seed", 0);
  if (seed < 0) problems.push_back("seed must be nonnegative");
  cfg.seed = static_cast<std::uint64_t>(seed);
  cfg.replicates = r.count("replicates", 1);
  if (cfg.replicates < 1) problems.push_back("replicates must be at least 1");
  cfg.out_dir = r.get<std::string>("out_dir", "");

  cfg.kind = r.choice("experiment.kind", ExperimentKind::toy, [](std::string_view s) {
    if (s == "toy") return ExperimentKind::toy;
    if (s == "blr") return ExperimentKind::blr;
    if (s == "emd") return ExperimentKind::emd;
    throw InputError("unknown experiment kind '" + std::string(s) + "'");
  });
  if (!r.has("experiment.kind")) problems.push_back("experiment.kind is required");

  // toy
  cfg.toy.target = r.choice("experiment.target", cfg.toy.target,
                            [](std::string_view s) { return parse_toy_target(s); });
  cfg.toy.dim = r.count("experiment.dim", cfg.toy.dim);
  cfg.toy.nu = r.get<double>("safe.nu", cfg.toy.nu);
  if (cfg.kind == ExperimentKind::toy) {
    if (!r.has("experiment.target")) problems.push_back("experiment.target is required for toy runs");
    if (cfg.toy.dim < 1) problems.push_back("experiment.dim must be at least 1");
    if (cfg.toy.target != ToyTarget::cold_start && cfg.toy.dim < 2) {
      problems.push_back("mixture targets need experiment.dim >= 2");
    }
    if (!(cfg.toy.nu > 2.0)) problems.push_back("safe.nu must exceed 2 for a finite covariance");
  }

  // blr
  cfg.blr.dataset = r.get<std::string>("dataset.path", "");
  cfg.blr.train_fraction = r.get<double>("dataset.train_fraction", cfg.blr.train_fraction);
  cfg.blr.binarization = r.get<std::string>("dataset.binarization", cfg.blr.binarization);
  cfg.blr.a = r.get<double>("blr.a", cfg.blr.a);
  cfg.blr.b = r.get<double>("blr.b", cfg.blr.b);
  cfg.blr.safe_variance = r.get<double>("safe.variance", cfg.blr.safe_variance);
  if (cfg.kind == ExperimentKind::blr) {
    if (cfg.blr.dataset.empty()) problems.push_back("dataset.path is required for blr runs (or pass --dataset)");
    if (!(cfg.blr.train_fraction > 0.0 && cfg.blr.train_fraction < 1.0)) {
      problems.push_back("dataset.train_fraction must lie in (0,1)");
    }
    try {
      (void)parse_binarization(cfg.blr.binarization);
    } catch (const InputError& e) {
      problems.push_back(std::string("dataset.binarization: ") + e.what());
    }
    if (!(cfg.blr.a > 0.0 && cfg.blr.b > 0.0)) problems.push_back("blr.a and blr.b must be positive");
    if (!(cfg.blr.safe_variance > 0.0)) problems.push_back("safe.variance must be positive");
  }

  // sampler
  auto& s = cfg.sampler;
  s.n0 = r.count("budget.n0", s.n0);
  s.batch = r.count("budget.batch", s.batch);
  s.iterations = r.count("budget.iterations", s.iterations);
  auto& sch = s.schedule;
  sch.lambda_policy = r.choice("schedule.lambda_policy", sch.lambda_policy,
                               [](std::string_view v) { return parse_lambda_policy(v); });
  sch.lambda0 = r.get<double>("schedule.lambda0", sch.lambda0);
  sch.lambda_exponent = r.get<double>("schedule.lambda_exponent", sch.lambda_exponent);
  sch.h_policy = r.choice("schedule.h_policy", sch.h_policy,
                          [](std::string_view v) { return parse_bandwidth_policy(v); });
  sch.h0 = r.get<double>("schedule.h0", sch.h0);
  s.per_particle_bandwidth = r.get<bool>("schedule.per_particle_bandwidth", false);
  sch.eta.kind = r.choice("eta.policy", EtaPolicyKind::rar,
                          [](std::string_view v) { return parse_eta_policy(v); });
  sch.eta.value = r.get<double>("eta.value", 1.0);
  sch.eta.sequence = r.numbers("eta.sequence");
  sch.eta.alpha = r.get<double>("eta.alpha", 0.5);
  s.subsample_mode = r.choice("subsample.mode", s.subsample_mode,
                              [](std::string_view v) { return parse_subsample_mode(v); });
  s.subsample_rule = r.choice("subsample.rule", s.subsample_rule,
                              [](std::string_view v) { return parse_subsample_rule(v); });
  s.estimate_weights = r.choice("estimate.weights", s.estimate_weights,
                                [](std::string_view v) { return parse_estimate_weights(v); });

  // emd
  auto& e = cfg.emd;
  e.grid.lo = r.get<double>("emd.lo", e.grid.lo);
  e.grid.hi = r.get<double>("emd.hi", e.grid.hi);
  e.grid.points = r.count("emd.points", e.grid.points);
  e.f_mean = r.get<double>("emd.f_mean", e.f_mean);
  e.f_variance = r.get<double>("emd.f_variance", e.f_variance);
  e.q1_mean = r.get<double>("emd.q1_mean", e.q1_mean);
  e.q1_variance = r.get<double>("emd.q1_variance", e.q1_variance);
  {
    std::vector<std::string> names;
    for (auto sc : e.schedules) names.emplace_back(emd::to_string(sc));
    names = r.strings("emd.schedules", names);
    e.schedules.clear();
    for (const auto& n : names) {
      try {
        e.schedules.push_back(emd::parse_rate_schedule(n));
      } catch (const InputError& ex) {
        problems.push_back(std::string("emd.schedules: ") + ex.what());
      }
    }
  }
  e.c = r.get<double>("emd.c", e.c);
  e.beta = r.get<double>("emd.beta", e.beta);
  e.steps = r.count("emd.steps", e.steps);

  r.report_unknown();

  if (cfg.kind == ExperimentKind::emd) {
    if (!(e.grid.hi > e.grid.lo)) problems.push_back("emd.hi must exceed emd.lo");
    if (e.grid.points < 64) problems.push_back("emd.points must be at least 64");
    if (!(e.f_variance > 0.0 && e.q1_variance > 0.0)) problems.push_back("emd variances must be positive");
    if (e.schedules.empty()) problems.push_back("emd.schedules must not be empty");
    check_unit_interval(problems, "c", "emd.c", e.c, false);
    if (!(e.beta >= 0.0)) problems.push_back("emd.beta must be nonnegative");
    if (e.steps < 1) problems.push_back("emd.steps must be at least 1");
  } else {
    if (s.n0 < 1) problems.push_back("budget.n0 must be at least 1");
    if (s.batch < 1) problems.push_back("budget.batch must be at least 1");
    if (!(sch.lambda_exponent >= 0.0)) problems.push_back("schedule.lambda_exponent must be nonnegative");
    if (!(sch.h0 > 0.0)) problems.push_back("schedule.h0 must be positive");
    switch (sch.eta.kind) {
      case EtaPolicyKind::constant:
        check_unit_interval(problems, "eta", "eta.value", sch.eta.value, false);
        break;
      case EtaPolicyKind::sequence:
        if (sch.eta.sequence.size() < s.iterations + 1) {
          problems.push_back("eta.sequence needs " + std::to_string(s.iterations + 1) +
                             " entries (initial batch plus one per iteration)");
        }
        break;
      case EtaPolicyKind::rar:
        check_unit_interval(problems, "alpha", "eta.alpha", sch.eta.alpha, true);
        if (s.batch < 2 || s.n0 < 2) problems.push_back("the rar policy needs budget.n0 and budget.batch >= 2");
        break;
    }
    check_unit_interval(problems, "lambda", "schedule.lambda0", sch.lambda0, false);
    if (s.n0 >= 1 && problems.empty()) {
      const auto plan = plan_schedule(sch, s.n0, s.batch, s.iterations, cfg.dim(), s.subsample_rule);
      for (const auto& err : validate_assumptions(plan).errors) problems.push_back(err);
    }
  }

  if (!problems.empty()) throw ConfigError(std::move(problems));
  return cfg;
}

RunConfig load_config(const std::string& path_or_preset, const Overrides& overrides) {
  if (is_preset(path_or_preset)) {
    return parse_config(preset_text(path_or_preset), overrides, path_or_preset);
  }
  std::ifstream in(path_or_preset);
  if (!in) throw InputError("cannot open configuration '" + path_or_preset + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), overrides, path_or_preset);
}

std::vector<std::string> assumption_warnings(const RunConfig& cfg) {
  if (cfg.kind == ExperimentKind::emd) return {};
  const auto& s = cfg.sampler;
  const auto plan = plan_schedule(s.schedule, s.n0, s.batch, s.iterations, cfg.dim(), s.subsample_rule);
  return validate_assumptions(plan).warnings;
}

// ---------------------------------------------------------------------------

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string quoted(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string echo_config(const RunConfig& cfg) {
  std::ostringstream o;
  o << "name = " << quoted(cfg.name) << "\n"
    << "seed = " << cfg.seed << "\n"
    << "replicates = " << cfg.replicates << "\n"
    << "out_dir = " << quoted(cfg.out_dir) << "\n\n"
    << "[experiment]\nkind = " << quoted(to_string(cfg.kind)) << "\n";
  if (cfg.kind == ExperimentKind::emd) {
    const auto& e = cfg.emd;
    o << "\n[emd]\nlo = " << num(e.grid.lo) << "\nhi = " << num(e.grid.hi)
      << "\npoints = " << e.grid.points << "\nf_mean = " << num(e.f_mean)
      << "\nf_variance = " << num(e.f_variance) << "\nq1_mean = " << num(e.q1_mean)
      << "\nq1_variance = " << num(e.q1_variance) << "\nschedules = [";
    for (std::size_t i = 0; i < e.schedules.size(); ++i) {
      o << (i ? ", " : "") << quoted(emd::to_string(e.schedules[i]));
    }
    o << "]\nc = " << num(e.c) << "\nbeta = " << num(e.beta) << "\nsteps = " << e.steps << "\n";
    return o.str();
  }
  if (cfg.kind == ExperimentKind::toy) {
    o << "target = " << quoted(to_string(cfg.toy.target)) << "\ndim = " << cfg.toy.dim << "\n";
  } else {
    o << "\n[dataset]\npath = " << quoted(cfg.blr.dataset)
      << "\ntrain_fraction = " << num(cfg.blr.train_fraction)
      << "\nbinarization = " << quoted(cfg.blr.binarization) << "\n"
      << "\n[blr]\na = " << num(cfg.blr.a) << "\nb = " << num(cfg.blr.b) << "\n";
  }
  const auto& s = cfg.sampler;
  const auto& sch = s.schedule;
  o << "\n[budget]\nn0 = " << s.n0 << "\nbatch = " << s.batch << "\niterations = " << s.iterations
    << "\n\n[schedule]\nlambda_policy = " << quoted(to_string(sch.lambda_policy))
    << "\nlambda0 = " << num(sch.lambda0) << "\nlambda_exponent = " << num(sch.lambda_exponent)
    << "\nh_policy = " << quoted(to_string(sch.h_policy)) << "\nh0 = " << num(sch.h0)
    << "\nper_particle_bandwidth = " << (s.per_particle_bandwidth ? "true" : "false")
    << "\n\n[eta]\npolicy = " << quoted(to_string(sch.eta.kind));
  switch (sch.eta.kind) {
    case EtaPolicyKind::constant: o << "\nvalue = " << num(sch.eta.value); break;
    case EtaPolicyKind::rar: o << "\nalpha = " << num(sch.eta.alpha); break;
    case EtaPolicyKind::sequence:
      o << "\nsequence = [";
      for (std::size_t i = 0; i < sch.eta.sequence.size(); ++i) o << (i ? ", " : "") << num(sch.eta.sequence[i]);
      o << "]";
      break;
  }
  o << "\n\n[safe]\n";
  if (cfg.kind == ExperimentKind::toy) o << "nu = " << num(cfg.toy.nu) << "\n";
  else o << "variance = " << num(cfg.blr.safe_variance) << "\n";
  o << "\n[subsample]\nmode = " << quoted(to_string(s.subsample_mode))
    << "\nrule = " << quoted(to_string(s.subsample_rule))
    << "\n\n[estimate]\nweights = " << quoted(to_string(s.estimate_weights)) << "\n";
  return o.str();
}

}  // namespace srais
