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

#ifndef PSDC_VERIFY_HPP_
#define PSDC_VERIFY_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

// Randomized instance drivers for the theory_lab checkers and the objective's
// derivatives. Each suite draws instance t from CounterRng(derive_seed(seed, suite, t)),
// so a failing instance can be replayed on its own.
namespace psdc {

enum class Suite { lemma_concern, hadamard, k_identity, gradients };

std::string_view to_string(Suite suite);
/// Accepts the CLI spellings "lemma-concern", "hadamard", "k-identity", "gradients".
Suite parse_suite(std::string_view name);
std::vector<Suite> all_suites();

struct SuiteReport {
  Suite suite = Suite::lemma_concern;
  std::size_t instances = 0;
  std::size_t failures = 0;
  /// Largest observed value of the suite's test statistic:
  ///   lemma-concern, hadamard: lhs - rhs (a failure exceeds kBoundSlack)
  ///   k-identity: relative identity gap (a failure exceeds 1e-8)
  ///   gradients: max relative error over gradient (limit 1e-5) and Hessian (limit 1e-4).
  double worst = 0.0;
  std::size_t first_failure = 0;  // instance index, meaningful when failures > 0
  double seconds = 0.0;

  bool passed() const { return failures == 0; }
};

inline constexpr double kIdentityTol = 1e-8;
inline constexpr double kGradTol = 1e-5;
inline constexpr double kHessTol = 1e-4;

/// Result of one gradients-suite instance.
struct DerivativeCheck {
  double grad_rel_error = 0.0;
  double hess_rel_error = 0.0;
};

/// Central differences on one random instance: each gradient coordinate from f at
/// X +- h e_ij, and the Hessian quadratic form from <grad f(X + hH) - grad f(X - hH), H> / 2h.
/// Regularized rows are kept at least 20% away from the alpha shell.
DerivativeCheck check_derivatives_instance(std::uint64_t seed);

/// Relative identity gap of one random k-identity instance.
double k_identity_instance(std::uint64_t seed);

SuiteReport run_suite(Suite suite, std::size_t instances, std::uint64_t seed);

/// {"seed": s, "instances": N, "passed": bool, "suites": [{...}, ...]}
std::string verify_report_json(const std::vector<SuiteReport>& reports, std::size_t instances,
                               std::uint64_t seed);

}  // namespace psdc

#endif  // PSDC_VERIFY_HPP_
