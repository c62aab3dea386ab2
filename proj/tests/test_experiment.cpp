// Copyright 2026 The psdc Authors. All Rights Reserved.
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

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "psdc/experiment.hpp"

using namespace psdc;
using nlohmann::json;

TEST_SUITE("experiment") {

TEST_CASE("settings for each scenario") {
  ExperimentConfig cfg;
  cfg.scenario = Scenario::full_rank;
  cfg.n = 20;
  auto s = expand_settings(cfg);
  REQUIRE(s.size() == 10);
  CHECK(s[0].label == "sigma5=10");
  CHECK(s[9].value == 1.0);
  CHECK(s[3].eigenvalues.size() == 20);
  CHECK(s[3].eigenvalues[4] == 7.0);
  CHECK(s[3].eigenvalues[5] == 1.0);
  CHECK(s[3].eigenvalues[19] == 1.0);

  cfg.scenario = Scenario::extreme_kappa;
  s = expand_settings(cfg);
  REQUIRE(s.size() == 8);
  CHECK(s[0].eigenvalues == std::vector<double>{10, 10, 10, 10, 1});
  CHECK(s[7].label == "kappa=inf");
  CHECK(s[7].eigenvalues[4] == 0.0);

  cfg.scenario = Scenario::rank_mismatch_fixed_M;
  cfg.spectrum = Spectrum::decreasing;
  s = expand_settings(cfg);
  CHECK(s.size() == 7);
  CHECK(s[0].rank == 5);
  CHECK(s[0].eigenvalues.front() == 20.0);
  CHECK(s[0].eigenvalues.back() == 2.0);
  CHECK(s[0].eigenvalues.size() == 10);

  cfg.scenario = Scenario::rank_mismatch_fixed_r;
  cfg.sweep = {3, 12};
  s = expand_settings(cfg);
  REQUIRE(s.size() == 2);
  CHECK(s[1].label == "R=12");
  CHECK(s[1].rank == 5);
  CHECK(s[1].eigenvalues.front() == 30.0);
  CHECK(s[1].eigenvalues.back() == 8.0);

  cfg.sweep = {2.5};
  CHECK_THROWS_AS(expand_settings(cfg), std::invalid_argument);
  cfg.sweep = {30};
  CHECK_THROWS_AS(expand_settings(cfg), std::invalid_argument);
}

TEST_CASE("config parsing") {
  const ExperimentConfig cfg = parse_experiment_config(R"({
    "scenario": "extreme_kappa", "n": 100, "r": 3, "p": 0.3, "sweep": [10, "inf"],
    "alpha": 2.5, "lambda": 7, "methods": ["nonconvex", "nystrom"], "trials": 4,
    "seed": 99, "include_timing": false })");
  CHECK(cfg.scenario == Scenario::extreme_kappa);
  CHECK(cfg.n == 100);
  CHECK(cfg.r == 3);
  CHECK(cfg.p == 0.3);
  REQUIRE(cfg.sweep.size() == 2);
  CHECK(std::isinf(cfg.sweep[1]));
  CHECK(cfg.alpha_mode == AlphaMode::fixed);
  CHECK(cfg.alpha_value == 2.5);
  CHECK(cfg.lambda_mode == LambdaMode::fixed);
  CHECK(cfg.lambda_value == 7.0);
  CHECK(cfg.methods == std::vector<Method>{Method::nonconvex, Method::nystrom});
  CHECK(cfg.trials == 4);
  CHECK(cfg.seed == 99);
  CHECK_FALSE(cfg.include_timing);

  const ExperimentConfig defaults = parse_experiment_config(R"({"scenario": "full_rank"})");
  CHECK(defaults.alpha_mode == AlphaMode::max_entry);
  CHECK(defaults.lambda_mode == LambdaMode::spectral_norm);

  CHECK_THROWS(parse_experiment_config(R"({"bogus": 1})"));
  CHECK_THROWS(parse_experiment_config(R"({"p": 1.5})"));
  CHECK_THROWS(parse_experiment_config(R"({"trials": 0})"));
  CHECK_THROWS(parse_experiment_config(R"({"methods": []})"));
  CHECK_THROWS(parse_experiment_config(R"({"scenario": "nope"})"));
  CHECK_THROWS(parse_experiment_config("[1, 2]"));
  CHECK_THROWS(parse_experiment_config("{"));
}

TEST_CASE("quantiles use linear interpolation") {
  const Quantiles q = quantiles({4, 1, 3, 2});
  CHECK(q.min == 1.0);
  CHECK(q.q1 == doctest::Approx(1.75));
  CHECK(q.median == doctest::Approx(2.5));
  CHECK(q.q3 == doctest::Approx(3.25));
  CHECK(q.max == 4.0);
  CHECK(q.count == 4);
  const Quantiles one = quantiles({7});
  CHECK(one.q1 == 7.0);
  CHECK(one.q3 == 7.0);
  CHECK_THROWS_AS(quantiles({}), std::invalid_argument);
}

TEST_CASE("small custom run is reproducible") {
  ExperimentConfig cfg;
  cfg.scenario = Scenario::custom;
  cfg.n = 60;
  cfg.r = 2;
  cfg.p = 0.4;
  cfg.eigenvalues = {10, 6};
  cfg.trials = 3;
  cfg.include_timing = false;
  cfg.compute_k = true;
  cfg.threads = 2;
  const RunReport a = run_experiment(cfg);
  cfg.threads = 1;
  const RunReport b = run_experiment(cfg);
  CHECK(report_to_json(a) == report_to_json(b));
  CHECK(report_to_csv(a) == report_to_csv(b));

  REQUIRE(a.trials.size() == 6);
  for (const TrialRecord* t : a.select(0, Method::nonconvex)) {
    CHECK(t->error.empty());
    REQUIRE(t->re_r.has_value());
    CHECK(*t->re_r < 1e-3);
    CHECK(t->termination == "grad_tol");
    REQUIRE(t->k_total.has_value());
    CHECK(*t->k_identity_gap < 1e-8);
    CHECK(t->storage_entries > 0);
  }
  for (const TrialRecord* t : a.select(0, Method::spectral)) {
    REQUIRE(t->re_r.has_value());
    CHECK(*t->re_r > 0.0);
  }

  const json j = json::parse(report_to_json(a));
  CHECK_FALSE(j.contains("seconds"));
  CHECK(j["errors"] == 0);
  CHECK(j["settings"].size() == 1);
  CHECK(j["trials"].size() == 6);
  CHECK_FALSE(j["trials"][0].contains("seconds"));
  bool saw = false;
  for (const auto& row : j["summary"]) {
    if (row["method"] == "nonconvex" && row["metric"] == "re_r") {
      saw = true;
      CHECK(row["count"] == 3);
    }
  }
  CHECK(saw);

  std::istringstream csv(report_to_csv(a));
  std::string header;
  std::getline(csv, header);
  CHECK(header == "setting,value,method,metric,count,min,q1,median,q3,max");
  std::string line;
  std::size_t rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 9);
  }
  CHECK(rows == j["summary"].size());
}

TEST_CASE("different seeds change the trials") {
  ExperimentConfig cfg;
  cfg.n = 40;
  cfg.r = 1;
  cfg.eigenvalues = {5};
  cfg.trials = 2;
  cfg.methods = {Method::spectral};
  cfg.include_timing = false;
  const RunReport a = run_experiment(cfg);
  cfg.seed = 2;
  const RunReport b = run_experiment(cfg);
  CHECK(*a.trials[0].re_r != *b.trials[0].re_r);
  CHECK(*a.trials[0].re_r != *a.trials[1].re_r);
}

TEST_CASE("small kernel PCA run") {
  ExperimentConfig cfg;
  cfg.scenario = Scenario::kpca_two_spheres;
  cfg.n = 200;
  cfg.r = 2;
  cfg.columns = 20;
  cfg.trials = 2;
  cfg.kmeans_reps = 5;
  cfg.kpca_errors = true;
  cfg.methods = {Method::nonconvex, Method::nystrom};
  cfg.include_timing = false;
  const RunReport rep = run_experiment(cfg);
  REQUIRE(rep.trials.size() == 4);
  for (const TrialRecord& t : rep.trials) {
    CHECK(t.error.empty());
    REQUIRE(t.accuracy.has_value());
    CHECK(*t.accuracy >= 0.5);
    CHECK(*t.accuracy <= 1.0);
    CHECK(t.re_full.has_value());
  }
  const double p_nys = (2.0 * 20 * 200 - 400) / (200.0 * 200.0);
  CHECK(rep.select(0, Method::nystrom)[0]->p_effective == doctest::Approx(p_nys));
  CHECK(rep.select(0, Method::nonconvex)[0]->p_effective == doctest::Approx(p_nys / 2.5));
}

TEST_CASE("trial failures are recorded, not thrown") {
  ExperimentConfig cfg;
  cfg.n = 10;
  cfg.r = 2;
  cfg.p = 0.001;
  cfg.eigenvalues = {1, 1};
  cfg.trials = 1;
  cfg.methods = {Method::nonconvex};
  const RunReport rep = run_experiment(cfg);
  REQUIRE(rep.trials.size() == 1);
  // The mask comes out empty, so there is nothing to tune against.
  CHECK_FALSE(rep.trials[0].error.empty());
  CHECK_FALSE(rep.trials[0].re_r.has_value());
  CHECK(json::parse(report_to_json(rep))["errors"] == 1);
}

}  // TEST_SUITE
