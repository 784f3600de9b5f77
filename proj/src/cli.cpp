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


#include <srais/cli.hpp>
#include <srais/config.hpp>
#include <srais/error.hpp>
#include <srais/experiment.hpp>
#include <srais/suite.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace srais {

namespace {

constexpr std::uint64_t kSuiteSeed = 20260103;

Overrides parse_sets(const std::vector<std::string>& sets) {
  Overrides out;
  std::vector<std::string> bad;
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) {
      bad.push_back("--set expects key=value, got '" + s + "'");
      continue;
    }
    out.emplace_back(s.substr(0, eq), s.substr(eq + 1));
  }
  if (!bad.empty()) throw ConfigError(std::move(bad));
  return out;
}

// TOML basic string, so that paths survive the literal-or-string rule for overrides.
std::string quoted(const std::string& s) {
  std::string q = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') q += '\\';
    q += c;
  }
  return q + "\"";
}

struct RunArgs {
  std::string config;
  std::string out_dir;
  std::string dataset;
  std::vector<std::string> sets;
  std::uint64_t seed = 0;
  std::size_t replicates = 0;
  unsigned threads = 0;
};

int cmd_run(const RunArgs& a, bool seed_given, bool replicates_given, std::ostream& out,
            std::ostream& err) {
  auto overrides = parse_sets(a.sets);
  if (seed_given) overrides.emplace_back("seed", std::to_string(a.seed));
  if (replicates_given) overrides.emplace_back("replicates", std::to_string(a.replicates));
  if (!a.dataset.empty()) overrides.emplace_back("dataset.path", quoted(a.dataset));
  const RunConfig cfg = load_config(a.config, overrides);
  const auto dir = resolve_out_dir(a.out_dir, cfg.out_dir);

  const auto res = run_experiment(cfg, dir, &err, a.threads);
  for (const auto& w : res.warnings) err << "warning: " << w << "\n";

  if (cfg.kind == ExperimentKind::emd) {
    bool ok = true;
    for (const auto& rep : res.emd) ok = ok && rep.failure.empty();
    out << "wrote " << (dir / "contraction.csv").string() << "\n";
    return ok ? kExitOk : kExitRuntime;
  }
  const auto agg = aggregate(res.replicates);
  out << cfg.name << ": " << res.replicates.size() - res.failed() << "/" << res.replicates.size()
      << " replicates succeeded, output in " << dir.string() << "\n";
  if (!agg.empty()) {
    const auto& last = agg.back();
    char line[160];
    std::snprintf(line, sizeof line, "iteration %zu: mean eta %.6g", last.iteration, last.mean_eta);
    out << line;
    if (cfg.kind == ExperimentKind::blr) {
      std::snprintf(line, sizeof line, ", mean accuracy %.4f (majority %.4f)", last.mean_accuracy,
                    res.majority_baseline.value_or(0.0));
    } else {
      std::snprintf(line, sizeof line, ", mean log squared error %.6g", last.mean_log_squared_error);
    }
    out << line;
    out << "\n";
  }
  return res.failed() == res.replicates.size() ? kExitRuntime : kExitOk;
}

int cmd_verify_emd(const std::string& config, const std::vector<std::string>& sets,
                   const std::string& out_dir, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = load_config(config, parse_sets(sets));
  if (cfg.kind != ExperimentKind::emd) {
    throw ConfigError({"verify-emd needs an emd experiment, got " + std::string(to_string(cfg.kind))});
  }
  std::vector<EmdScheduleReport> reports;
  if (out_dir.empty()) {
    reports = run_emd(cfg.emd);
  } else {
    reports = run_experiment(cfg, out_dir).emd;
  }
  out << format_contraction_csv(reports);
  bool ok = true;
  for (const auto& rep : reports) {
    if (!rep.failure.empty()) {
      err << "schedule " << emd::to_string(rep.schedule) << ": " << rep.failure << "\n";
      ok = false;
    }
  }
  return ok ? kExitOk : kExitRuntime;
}

int cmd_property_suite(std::uint64_t seed, std::ostream& out) {
  bool ok = true;
  suite::run_all(seed, [&](const suite::CheckResult& r) {
    char head[96];
    std::snprintf(head, sizeof head, "%s %-22s %7.2fs  ", r.passed ? "PASS" : "FAIL", r.name.c_str(),
                  r.seconds);
    out << head << r.detail << "\n" << std::flush;
    ok = ok && r.passed;
  });
  return ok ? kExitOk : kExitRuntime;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Safe and regularized adaptive importance sampling", "srais"};
  app.set_version_flag("--version", std::string("srais ") + std::string(version_string()));
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Run an experiment and write its CSV files");
  run->add_option("--config", run_args.config, "Config file or preset name")->required();
  auto* seed_opt = run->add_option("--seed", run_args.seed, "Root seed (overrides the config)");
  auto* reps_opt = run->add_option("--replicates", run_args.replicates, "Replicate count")
                       ->check(CLI::PositiveNumber);
  run->add_option("--out-dir", run_args.out_dir, "Output directory (default: config, $SRAIS_OUT, .)");
  run->add_option("--dataset", run_args.dataset, "Waveform CSV for blr experiments");
  run->add_option("--set", run_args.sets, "Override a config key, e.g. --set budget.batch=50");
  run->add_option("--threads", run_args.threads, "Worker threads (0 = all cores)");

  std::string emd_config;
  std::string emd_out;
  std::vector<std::string> emd_sets;
  auto* verify = app.add_subcommand("verify-emd", "Grid check of the mirror-descent bound; CSV on stdout");
  verify->add_option("--config", emd_config, "Config file or preset name")->required();
  verify->add_option("--set", emd_sets, "Override a config key");
  verify->add_option("--out-dir", emd_out, "Also write contraction.csv and meta.txt here");

  std::uint64_t suite_seed = kSuiteSeed;
  auto* props = app.add_subcommand("property-suite", "Statistical invariant batteries of every module");
  props->add_option("--seed", suite_seed, "Root seed");

  auto* presets = app.add_subcommand("presets", "List or print the built-in configurations");
  presets->require_subcommand(1);
  bool all = false;
  auto* list = presets->add_subcommand("list", "Preset names");
  list->add_flag("--all", all, "Include the desk-scale variants");
  std::string show_name;
  auto* show = presets->add_subcommand("show", "Print a preset as a config file");
  show->add_option("name", show_name, "Preset name")->required();

  std::vector<std::string> args;
  for (int i = argc - 1; i >= 1; --i) args.emplace_back(argv[i]);
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << "srais " << version_string() << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const CLI::App* failing = &app;
    for (auto* sub : app.get_subcommands()) failing = sub;
    err << failing->help();
    return kExitValidation;
  }

  try {
    if (*run) return cmd_run(run_args, seed_opt->count() > 0, reps_opt->count() > 0, out, err);
    if (*verify) return cmd_verify_emd(emd_config, emd_sets, emd_out, out, err);
    if (*props) return cmd_property_suite(suite_seed, out);
    if (*list) {
      for (const auto& n : preset_names()) out << n << "\n";
      if (all) {
        for (const auto& n : desk_preset_names()) out << n << "\n";
      }
      return kExitOk;
    }
    if (*show) {
      if (!is_preset(show_name)) throw InputError("unknown preset '" + show_name + "'");
      out << preset_text(show_name);
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    err << "invalid configuration:\n";
    for (const auto& p : e.problems()) err << "  " << p << "\n";
    return kExitValidation;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "failed: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitValidation;
}

}  // namespace srais
