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

// Distances and divergences between quantum states. Every logarithm is base 2
// and every returned entropy or divergence is in bits.

#pragma once

#include <limits>
#include <optional>

#include "qpa/cq_state.hpp"
#include "qpa/operator.hpp"

namespace qpa {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
// ρ-mass outside supp(σ) above this makes a divergence +∞.
inline constexpr double kSupportViolationTol = 1e-10;
// Orders closer than this to 1 must go through relative_entropy.
inline constexpr double kAlphaOneGuard = 1e-6;

struct DivergenceResult {
  double value = 0.0;  // bits, or +∞
  std::optional<double> alpha;
  double support_violation = 0.0;

  bool is_infinite() const { return value == kInf; }
};

// F(ρ,σ) = ‖√ρ√σ‖₁ + √((1 − tr ρ)(1 − tr σ)).
double fidelity(const StateDescriptor& rho, const StateDescriptor& sigma);
// √(1 − F²), evaluated without cancellation near F = 1.
double purified_distance(const StateDescriptor& rho, const StateDescriptor& sigma);
// ½(‖ρ − σ‖₁ + |tr(ρ − σ)|)
double trace_distance(const StateDescriptor& rho, const StateDescriptor& sigma);

DivergenceResult relative_entropy(const StateDescriptor& rho, const HermitianOperator& sigma);
DivergenceResult sandwiched_renyi(const StateDescriptor& rho, const HermitianOperator& sigma,
                                  double alpha);
DivergenceResult d_max(const StateDescriptor& rho, const HermitianOperator& sigma);

// log₂ Q_α(ρ‖σ) with the same support conventions as sandwiched_renyi.
// α = 1 is allowed here: Q_1 = tr Π_σ ρ.
double log2_q_alpha(const StateDescriptor& rho, const HermitianOperator& sigma, double alpha);

// max(|D_{1-δ} − D|, |D_{1+δ} − D|); checks the α → 1 limit numerically.
double renyi_limit_gap(const StateDescriptor& rho, const HermitianOperator& sigma, double delta);

// H_α(X|E) = −D_α(ρ_XE ‖ 1_X ⊗ ρ_E) using the block-diagonal form. α = 1 gives
// the von Neumann conditional entropy and α = +∞ the min-entropy.
double renyi_conditional_entropy(const CQState& rho_xe, double alpha);
// H_α(A|B) for a dense bipartite state on C^{dim_a} ⊗ C^{dim_b}.
double renyi_conditional_entropy(const StateDescriptor& rho_ab, std::size_t dim_a,
                                 std::size_t dim_b, double alpha);

double conditional_entropy(const CQState& rho_xe);      // H(X|E)
double conditional_min_entropy(const CQState& rho_xe);  // H_min(X|E)

// Partial trace over the first factor of C^{dim_a} ⊗ C^{dim_b}.
HermitianOperator partial_trace_first(const HermitianOperator& rho_ab, std::size_t dim_a,
                                      std::size_t dim_b);

// Building blocks on unnormalized positive operators. These skip state
// validation and support checks; callers own both.
namespace block {

// ‖√A√B‖₁
double fidelity_term(const HermitianOperator& a, const HermitianOperator& b);
// tr A + tr B − 2‖√A√B‖₁ as a sum of squares: ‖√A − √B·V‖²_F for the
// polar unitary V of √A√B.
double bures_squared(const HermitianOperator& a, const HermitianOperator& b);
double trace_norm(const HermitianOperator& a);
// tr A (1 − Π_σ)
double support_violation(const HermitianOperator& a, const SpectralDecomposition& sigma);
// tr A (log A − log σ), bits.
double relative_entropy_term(const HermitianOperator& a, const SpectralDecomposition& sigma);
// log₂ tr (σ^γ A σ^γ)^α, γ = (1 − α)/2α; −∞ when the operator vanishes.
double log2_q(const HermitianOperator& a, const SpectralDecomposition& sigma, double alpha);
// Same, with σ^γ supplied.
double log2_q_with_power(const HermitianOperator& a, const HermitianOperator& sigma_gamma,
                         double alpha);
// log₂ λ_max(σ^{-1/2} A σ^{-1/2}) on supp(σ).
double log2_max_ratio(const HermitianOperator& a, const SpectralDecomposition& sigma);

// log₂ Σ 2^{v_i}, skipping −∞ entries.
double log2_sum_exp2(const std::vector<double>& v);

}  // namespace block

}  // namespace qpa
