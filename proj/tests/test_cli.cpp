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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "doctest.h"
#include "json.hpp"
#include "psdc/data_model.hpp"
#include "psdc/kernels.hpp"

using nlohmann::json;

namespace {

// Runs the CLI with stdout sent to `out_file`; returns the exit status.
int run(const std::string& args, const std::string& out_file = "cli_stdout.txt") {
  const std::string cmd = std::string("\"") + PSDC_CLI_PATH + "\" " + args + " > " + out_file +
                          " 2> cli_stderr.txt";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("gen-matrix then complete") {
  REQUIRE(run("gen-matrix --n 120 --eigenvalues 10 8 --p 0.4 --seed 3 -o cli_m.txt") == 0);
  const psdc::SampledMatrix m = psdc::load_sampled("cli_m.txt");
  CHECK(m.n() == 120);
  CHECK(m.p_nominal() == 0.4);

  REQUIRE(run("complete cli_m.txt --rank 2 --seed 5 -o cli_m.factor --trace cli_m.trace") == 0);
  const json summary = json::parse(slurp("cli_stdout.txt"));
  CHECK(summary["termination"] == "grad_tol");
  CHECK(summary["grad_norm"].get<double>() <= 1e-3);

  std::istringstream factor(slurp("cli_m.factor"));
  std::size_t n = 0;
  std::size_t r = 0;
  factor >> n >> r;
  CHECK(n == 120);
  CHECK(r == 2);
  CHECK(psdc::load_factor("cli_m.factor").n() == 120);

  std::istringstream trace(slurp("cli_m.trace"));
  std::size_t lines = 0;
  for (std::string line; std::getline(trace, line); ++lines) {
    CHECK(json::parse(line).contains("grad_norm"));
  }
  CHECK(lines == summary["iterations"].get<std::size_t>() + 1);
}

TEST_CASE("fixed regularizer flags reach the solver") {
  REQUIRE(run("gen-matrix --n 40 --eigenvalues 3 --p 0.5 --seed 1 -o cli_small.txt") == 0);
  REQUIRE(run("complete cli_small.txt -r 1 --alpha 2.5 --lambda 0.25 --max-iters 4") == 0);
  const json summary = json::parse(slurp("cli_stdout.txt"));
  CHECK(summary["alpha"] == 2.5);
  CHECK(summary["lambda"] == 0.25);
  CHECK(summary["iterations"].get<std::size_t>() <= 4);
}

TEST_CASE("kernel PCA and Nystrom on two spheres") {
  REQUIRE(run("gen-spheres --n 300 --seed 2 -o cli_spheres.txt") == 0);
  CHECK(psdc::load_dataset("cli_spheres.txt").n() == 300);

  REQUIRE(run("kpca cli_spheres.txt --kernel radial --gamma 1 --rank 2 --sample-rate 0.1 -o cli_kpca") ==
          0);
  const json k = json::parse(slurp("cli_stdout.txt"));
  CHECK(k.contains("accuracy"));
  CHECK(psdc::load_factor("cli_kpca.factor").r() == 2);
  std::istringstream labels(slurp("cli_kpca.labels"));
  std::size_t count = 0;
  for (int v; labels >> v; ++count) CHECK((v == 0 || v == 1));
  CHECK(count == 300);

  REQUIRE(run("nystrom cli_spheres.txt --columns 20 --rank 2 -o cli_nys") == 0);
  const json nys = json::parse(slurp("cli_stdout.txt"));
  CHECK(nys["sampling_rate"].get<double>() == doctest::Approx((2.0 * 20 * 300 - 400) / 90000.0));
  CHECK(psdc::load_factor("cli_nys.factor").n() == 300);
}

TEST_CASE("experiment writes JSON and CSV") {
  {
    std::ofstream cfg("cli_exp.json");
    cfg << R"({"scenario": "custom", "n": 50, "r": 1, "p": 0.5, "eigenvalues": [4],
              "trials": 2, "include_timing": false})";
  }
  REQUIRE(run("experiment cli_exp.json -o cli_exp_out --threads 1") == 0);
  const json report = json::parse(slurp("cli_exp_out.json"));
  CHECK(report["trials"].size() == 4);
  CHECK(slurp("cli_exp_out.csv").rfind("setting,value,method,metric", 0) == 0);
}

TEST_CASE("verify reports success") {
  REQUIRE(run("verify -n 20 --seed 4") == 0);
  const json v = json::parse(slurp("cli_stdout.txt"));
  CHECK(v["passed"] == true);
  CHECK(v["suites"].size() == 4);
  REQUIRE(run("verify --suite hadamard -n 10") == 0);
  CHECK(json::parse(slurp("cli_stdout.txt"))["suites"].size() == 1);
}

TEST_CASE("bad input fails with a nonzero status") {
  CHECK(run("") != 0);
  CHECK(run("complete") != 0);
  CHECK(run("complete does_not_exist.txt -r 2") == 1);
  CHECK(run("verify --suite nonsense") != 0);
  {
    std::ofstream bad("cli_bad.txt");
    bad << "3 1\n2 2 1.0\n";
  }
  CHECK(run("complete cli_bad.txt -r 1") == 1);
  CHECK(run("nystrom cli_spheres.txt --columns 400 --rank 2") == 1);
}
