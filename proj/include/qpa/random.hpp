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

// Seeded random instances for property suites and tests.

#pragma once

#include <random>
#include <vector>

#include "qpa/cq_state.hpp"
#include "qpa/operator.hpp"

namespace qpa {

// Probability vector from normalized exponential variates.
std::vector<double> random_probabilities(std::size_t n, std::mt19937_64& rng);
// G·G† for a complex Ginibre matrix G with `rank` columns.
HermitianOperator random_psd(std::size_t dim, std::mt19937_64& rng, std::size_t rank = 0);
// random_psd normalized to unit trace.
HermitianOperator random_density(std::size_t dim, std::mt19937_64& rng, std::size_t rank = 0);
HermitianOperator random_hermitian(std::size_t dim, std::mt19937_64& rng);
HermitianOperator random_diagonal_density(std::size_t dim, std::mt19937_64& rng);
// Haar-random unitary via QR of a Ginibre matrix.
Matrix random_unitary(std::size_t dim, std::mt19937_64& rng);
CQState random_cq(std::size_t symbols, std::size_t dim_e, std::mt19937_64& rng);
// CQ state whose conditionals are diagonal in one common random basis.
CQState random_commuting_cq(std::size_t symbols, std::size_t dim_e, std::mt19937_64& rng);

}  // namespace qpa
