/*
 * Copyright 2026 The qpa Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Self-checking experiment suites. Each returns a JSON report with one entry
// per check, its measured slack, and an overall "pass".

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qpa/privacy.hpp"
#include "qpa/report.hpp"

namespace qpa {

struct SuiteOptions {
  std::uint64_t seed = 0;
  int threads = 1;
  std::uint64_t budget = kEnumerationBudget;
  double slack = 1e-9;
  int realizations = 100;
};

// ρ_X = diag(1/3, 2/3) with trivial E, n ≤ 4 copies, |Z| = 2^range_bits.
report::Json example1_suite(int n, int range_bits, const SuiteOptions& opt = {});

// Uniform X on four symbols with a fixed qubit ρ_E, hashed by the shared
// permutation family at blocklength n.
report::Json example2_suite(int n, const SuiteOptions& opt = {});

// The property sections below, all run by properties_suite.
report::Json check_relative_entropy_identity(const SuiteOptions& opt);
report::Json check_equivocation_sandwich(const SuiteOptions& opt);
report::Json check_positive_part_bound(const SuiteOptions& opt);
report::Json check_min_entropy_insecurity(const SuiteOptions& opt);
report::Json check_min_entropy_monotone(const SuiteOptions& opt);
report::Json check_positive_part_superadditivity(const SuiteOptions& opt, int instances = 200);
report::Json check_hashed_renyi_bounds(const SuiteOptions& opt);
report::Json check_collision_certificates(const SuiteOptions& opt);
report::Json check_search_determinism(const SuiteOptions& opt);

report::Json properties_suite(const SuiteOptions& opt = {});

// Whether a suite or section report passed.
bool passed(const report::Json& j);

}  // namespace qpa
