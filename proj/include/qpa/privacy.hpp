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

// Privacy amplification on CQ sources: applying a hash, the insecurity of the
// result against 1_Z/|Z| ⊗ ρ_E, exhaustive minima over all functions, family
// averages and finite-size forms of the hashing bounds.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qpa/cq_state.hpp"
#include "qpa/hashing.hpp"
#include "qpa/operator.hpp"

namespace qpa {

enum class Measure { kTraceDistance, kPurifiedDistance, kRelativeEntropy, kRenyi };

struct MeasureSpec {
  Measure measure = Measure::kPurifiedDistance;
  double s = 1.0;  // order 1 + s for kRenyi, s ∈ (0, 1]
};

const char* measure_name(Measure m);
// "trace", "purified", "relative", "renyi".
Measure parse_measure(const std::string& name);

inline constexpr std::uint64_t kEnumerationBudget = std::uint64_t{1} << 24;

// ρ^f_ZE = Σ_z |z⟩⟨z| ⊗ Σ_{x ∈ f⁻¹(z)} p_x ρ^x_E.
CQState apply_hash(const CQState& source, const HashFunction& f);

struct InsecurityReport {
  MeasureSpec measure;
  double value = 0.0;
  std::string hash_id;
  std::string ideal;
  std::uint64_t index = 0;      // winning member for searches
  std::uint64_t evaluated = 0;  // functions evaluated
  // |D − (log|Z| − H(Z|E))| for relative-entropy reports.
  double identity_gap = 0.0;
};

// Evaluates a measure on hashed versions of one source. Everything that does
// not depend on the hash (ρ_E and its powers) is prepared once.
class InsecurityEvaluator {
 public:
  InsecurityEvaluator(const CQState& source, std::size_t range_size, MeasureSpec m);

  double evaluate(const std::vector<std::uint32_t>& table) const;
  // Σ_z Q_{1+s}(A_z ‖ ρ_E) with A_z the hashed blocks.
  double q_sum(const std::vector<std::uint32_t>& table) const;

  std::size_t domain_size() const { return domain_; }
  std::size_t range_size() const { return range_; }

 private:
  void hashed_blocks(const std::vector<std::uint32_t>& table, std::vector<Matrix>& out) const;
  void hashed_scalars(const std::vector<std::uint32_t>& table, std::vector<double>& out) const;

  std::size_t domain_;
  std::size_t range_;
  MeasureSpec m_;
  bool classical_;
  std::vector<Matrix> blocks_;
  std::vector<double> scalars_;  // p_x when E is trivial
  HermitianOperator rho_e_;
  HermitianOperator ideal_block_;  // ρ_E / |Z|
  SpectralDecomposition rho_e_dec_;
  HermitianOperator sigma_gamma_;  // ρ_E^{−s/(2(1+s))}
};

// Insecurity of a ZE state against 1_Z/|Z| ⊗ ρ_E with ρ_E its own marginal.
InsecurityReport insecurity(const CQState& state_ze, MeasureSpec m);

// min over all functions X → Z; ties go to the smallest table index.
InsecurityReport min_insecurity_exhaustive(const CQState& source, std::size_t range_size,
                                           MeasureSpec m, int threads = 1,
                                           std::uint64_t budget = kEnumerationBudget);

struct Sampling {
  bool exhaustive = true;
  std::uint64_t count = 10'000;
  std::uint64_t seed = 0;
};

struct FamilyExpectation {
  double mean = 0.0;
  double std_error = 0.0;  // 0 for exhaustive averages
  std::uint64_t count = 0;
  bool exhaustive = true;
  double max_value = 0.0;
};

// E_F of the insecurity; exhaustive when requested and the family fits in
// `budget`, otherwise Monte Carlo over `sampling.count` seeded draws.
FamilyExpectation family_expectation(const HashFamily& family, const CQState& source,
                                     MeasureSpec m, const Sampling& sampling, int threads = 1,
                                     std::uint64_t budget = kEnumerationBudget);

struct BoundCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  // Positive when the stated inequality holds.
  double slack = 0.0;
};

// tr(Σ_x A_x − λ1)_+ ≥ Σ_x tr(A_x − λ1)_+.
BoundCheck positive_part_superadditivity_check(const std::vector<HermitianOperator>& ops, double lambda);
// E_F Q_{1+s}(ρ^F_ZE ‖ 1_Z ⊗ ρ_E) ≤ v(ρ_E)(Q_{1+s}(ρ_XE ‖ 1_X ⊗ ρ_E) + M^{−s}).
BoundCheck hashed_collision_check(const CQState& source, const HashFamily& family, double s,
                            int threads = 1);
// E_F 2^{s D_{1+s}(ρ^F_ZE ‖ 1_Z/M ⊗ ρ_E)} ≤ 1 + v(ρ_E)^s 2^{s(log M − H_{1+s}(X|E))}.
BoundCheck hashed_renyi_check(const CQState& source, const HashFamily& family, double s,
                            int threads = 1);

// Σ_x tr(E_{ρ_E}(p_x ρ^x) − c·ρ_E)_+, a lower bound on
// tr(ρ^f_ZE − c·1_Z ⊗ ρ_E)_+ for every f.
double pinched_positive_part(const CQState& source, double c);
// tr(ρ^f_ZE − c·1_Z ⊗ ρ_E)_+.
double hashed_positive_part(const CQState& source, const HashFunction& f, double c);

}  // namespace qpa
