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

#pragma once

#include <string>
#include <vector>

#include "qpa/operator.hpp"

namespace qpa {

// ρ_XE = Σ_x p_x |x⟩⟨x| ⊗ ρ^x_E with one density operator per symbol.
class CQState {
 public:
  CQState(std::vector<std::string> symbols, std::vector<double> probs,
          std::vector<HermitianOperator> conditionals);
  // Labels default to "0", "1", ...
  CQState(std::vector<double> probs, std::vector<HermitianOperator> conditionals);

  // Trivial (one-dimensional) side information.
  static CQState Classical(std::vector<double> probs);
  // ρ_X ⊗ ρ_E.
  static CQState Product(std::vector<double> probs, const HermitianOperator& rho_e);

  std::size_t size() const { return probs_.size(); }
  std::size_t dim_e() const { return conditionals_.front().dim(); }
  const std::vector<std::string>& symbols() const { return symbols_; }
  const std::vector<double>& probs() const { return probs_; }
  const std::vector<HermitianOperator>& conditionals() const { return conditionals_; }

  // p_x ρ^x_E
  HermitianOperator block(std::size_t x) const { return probs_[x] * conditionals_[x]; }
  HermitianOperator marginal_e() const;
  // Block-diagonal Σ_x |x⟩⟨x| ⊗ p_x ρ^x_E, x-major.
  HermitianOperator to_dense() const;
  // 1_X ⊗ ρ_E
  HermitianOperator reference() const;

  // ρ_XE^{⊗n} with X^n indexed base-|X|, first copy most significant.
  CQState tensor_power(int n, std::size_t e_dim_budget = 512) const;

  bool is_classical() const { return dim_e() == 1; }
  // Whether every ρ^x_E commutes with ρ_E (so ρ_XE commutes with 1_X ⊗ ρ_E).
  bool commutes_with_reference(double tol = 1e-10) const;

 private:
  std::vector<std::string> symbols_;
  std::vector<double> probs_;
  std::vector<HermitianOperator> conditionals_;
};

}  // namespace qpa
