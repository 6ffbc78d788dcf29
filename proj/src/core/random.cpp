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

#include "qpa/random.hpp"

namespace qpa {

namespace {

Matrix ginibre(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double re = g(rng);
      const double im = g(rng);
      m(i, j) = {re, im};
    }
  }
  return m;
}

}  // namespace

std::vector<double> random_probabilities(std::size_t n, std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> p(n);
  double sum = 0.0;
  for (auto& x : p) {
    x = e(rng) + 1e-3;
    sum += x;
  }
  for (auto& x : p) x /= sum;
  return p;
}

HermitianOperator random_psd(std::size_t dim, std::mt19937_64& rng, std::size_t rank) {
  const Matrix g = ginibre(dim, rank ? rank : dim, rng);
  const Matrix m = g * g.adjoint();
  return HermitianOperator((m + m.adjoint()) * 0.5);
}

HermitianOperator random_density(std::size_t dim, std::mt19937_64& rng, std::size_t rank) {
  const HermitianOperator a = random_psd(dim, rng, rank);
  return (1.0 / a.trace()) * a;
}

HermitianOperator random_hermitian(std::size_t dim, std::mt19937_64& rng) {
  const Matrix g = ginibre(dim, dim, rng);
  return HermitianOperator((g + g.adjoint()) * 0.5);
}

HermitianOperator random_diagonal_density(std::size_t dim, std::mt19937_64& rng) {
  return HermitianOperator::Diagonal(random_probabilities(dim, rng));
}

Matrix random_unitary(std::size_t dim, std::mt19937_64& rng) {
  const Matrix g = ginibre(dim, dim, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR();
  for (std::size_t j = 0; j < dim; ++j) {
    const std::complex<double> d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

CQState random_cq(std::size_t symbols, std::size_t dim_e, std::mt19937_64& rng) {
  std::vector<double> p = random_probabilities(symbols, rng);
  std::vector<HermitianOperator> c;
  for (std::size_t x = 0; x < symbols; ++x) c.push_back(random_density(dim_e, rng));
  return CQState(std::move(p), std::move(c));
}

CQState random_commuting_cq(std::size_t symbols, std::size_t dim_e, std::mt19937_64& rng) {
  const Matrix u = random_unitary(dim_e, rng);
  std::vector<double> p = random_probabilities(symbols, rng);
  std::vector<HermitianOperator> c;
  for (std::size_t x = 0; x < symbols; ++x) {
    const HermitianOperator d = random_diagonal_density(dim_e, rng);
    const Matrix m = u * d.matrix() * u.adjoint();
    c.push_back(HermitianOperator((m + m.adjoint()) * 0.5));
  }
  return CQState(std::move(p), std::move(c));
}

}  // namespace qpa
