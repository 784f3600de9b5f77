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
#include <srais/error.hpp>

#include <doctest.h>

#include <algorithm>

using namespace srais;

namespace {

constexpr const char* kMinimal = "seed = 3\n[experiment]\nkind = \"toy\"\ntarget = \"cold_start\"\n";

std::vector<std::string> problems_of(std::string_view text, const Overrides& o = {}) {
  try {
    parse_config(text, o);
  } catch (const ConfigError& e) {
    return e.problems();
  }
  return {};
}

bool mentions(const std::vector<std::string>& v, std::string_view needle) {
  return std::any_of(v.begin(), v.end(),
                     [&](const std::string& s) { return s.find(needle) != std::string::npos; });
}

}  // namespace

TEST_CASE("minimal toy configuration fills defaults") {
  const auto cfg = parse_config(kMinimal);
  CHECK(cfg.kind == ExperimentKind::toy);
  CHECK(cfg.seed == 3);
  CHECK(cfg.sampler.schedule.lambda0 == 0.5);
  CHECK(cfg.sampler.schedule.h0 == 1.0);
  CHECK(cfg.sampler.schedule.eta.kind == EtaPolicyKind::rar);
  CHECK(cfg.sampler.schedule.eta.alpha == 0.5);
  CHECK(cfg.replicates == 1);
  CHECK(cfg.toy.dim == 16);
}

TEST_CASE("lambda0 = 1.5 is rejected") {
  const auto p = problems_of(std::string(kMinimal) + "[schedule]\nlambda0 = 1.5\n");
  CHECK(mentions(p, "lambda not in (0,1]"));
}

TEST_CASE("published logistic-regression preset") {
  const auto cfg = load_config("blr-waveform", {{"dataset.path", "\"x.csv\""}});
  CHECK(cfg.sampler.n0 == 2000);
  CHECK(cfg.sampler.batch == 200);
  CHECK(cfg.sampler.iterations == 300);
  CHECK(cfg.total_budget() == 2000 + 300 * 200);
  CHECK(cfg.dim() == 22);
}

TEST_CASE("published toy preset budget") {
  const auto cfg = load_config("cold-start-16");
  CHECK(cfg.total_budget() == 400000);
  CHECK(cfg.sampler.iterations == 20);
  CHECK(cfg.replicates == 50);
  const auto small = load_config("cold-start-16-small");
  CHECK(small.sampler.n0 == 4000);
  CHECK(small.sampler.batch == 1800);
  CHECK(small.sampler.iterations == 20);
  CHECK(small.total_budget() * 10 == cfg.total_budget());
}

TEST_CASE("every preset parses") {
  for (const auto& name : preset_names()) {
    CAPTURE(name);
    CHECK(is_preset(name));
    CHECK_NOTHROW(load_config(name, {{"dataset.path", "\"x.csv\""}}));
  }
  for (const auto& name : desk_preset_names()) {
    CAPTURE(name);
    CHECK_NOTHROW(load_config(name, {{"dataset.path", "\"x.csv\""}}));
  }
  CHECK(preset_names() == std::vector<std::string>{"cold-start-16", "gaussian-mixture-16",
                                                  "anisotropic-16", "blr-waveform", "emd-lemma2"});
  CHECK_THROWS_AS(preset_text("nope"), InputError);
}

TEST_CASE("parse errors carry the line") {
  try {
    parse_config("seed = 1\n[experiment]\nkind = = \"toy\"\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).starts_with("line 3:"));
  }
}

TEST_CASE("problems are reported together") {
  const auto p = problems_of(std::string(kMinimal) +
                             "replicates = 0\n[budget]\nn0 = 0\n[schedule]\nlambda0 = 2.0\nh0 = -1\n"
                             "[eta]\npolicy = \"rar\"\nalpha = 3\n[bogus]\nkey = 1\n");
  CHECK(p.size() >= 5);
  CHECK(mentions(p, "replicates"));
  CHECK(mentions(p, "budget.n0"));
  CHECK(mentions(p, "lambda not in (0,1]"));
  CHECK(mentions(p, "schedule.h0"));
  CHECK(mentions(p, "alpha"));
  CHECK(mentions(p, "unknown key"));
}

TEST_CASE("unknown keys and required fields") {
  CHECK(mentions(problems_of(std::string(kMinimal) + "[schedule]\nlamda0 = 0.5\n"),
                 "unknown key 'schedule.lamda0'"));
  CHECK(mentions(problems_of("seed = 1\n"), "experiment.kind is required"));
  CHECK(mentions(problems_of("[experiment]\nkind = \"blr\"\n"), "dataset.path is required"));
  CHECK(mentions(problems_of("[experiment]\nkind = \"quantum\"\n"), "unknown experiment kind"));
}

TEST_CASE("dotted overrides") {
  const auto cfg = parse_config(kMinimal, {{"eta.policy", "\"constant\""},
                                           {"eta.value", "1.0"},
                                           {"budget.iterations", "7"},
                                           {"seed", "11"}});
  CHECK(cfg.sampler.schedule.eta.kind == EtaPolicyKind::constant);
  CHECK(cfg.sampler.iterations == 7);
  CHECK(cfg.seed == 11);
  CHECK_THROWS_AS(parse_config(kMinimal, {{"a.b.c", "1"}}), ConfigError);
}

TEST_CASE("eta sequence length must cover the run") {
  const auto p = problems_of(std::string(kMinimal) +
                             "[budget]\niterations = 2\n[eta]\npolicy = \"sequence\"\nsequence = [0.5, 1.0]\n");
  CHECK(mentions(p, "eta.sequence needs 3 entries"));
}

TEST_CASE("echo round-trips") {
  const auto a = load_config("gaussian-mixture-16-small");
  const auto b = parse_config(echo_config(a));
  CHECK(echo_config(b) == echo_config(a));
}

TEST_CASE("constant bandwidth produces an assumption warning") {
  const auto cfg = parse_config(std::string(kMinimal) + "[schedule]\nh_policy = \"constant\"\n");
  const auto w = assumption_warnings(cfg);
  CHECK(mentions(w, "bandwidth schedule"));
}
