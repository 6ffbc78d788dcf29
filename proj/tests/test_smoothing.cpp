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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "helpers.hpp"
#include "qpa/cq_state.hpp"
#include "qpa/error.hpp"
#include "qpa/exponents.hpp"
#include "qpa/hashing.hpp"
#include "qpa/measures.hpp"
#include "qpa/random.hpp"
#include "qpa/smoothing.hpp"

using namespace qpa;
using qpa::test::diag;
using qpa::test::state;

namespace {

double purified_of(const std::vector<double>& p, const std::vector<double>& pt) {
  // ρ is normalized, so the generalized fidelity has no defect term
  double f = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) f += std::sqrt(p[i] * pt[i]);
  return std::sqrt(std::max(0.0, 1.0 - f * f));
}

// Brute force over the feasible box 0 <= p~ <= 2^λ q, mass <= 1.
double grid_epsilon(const std::vector<double>& p, const std::vector<double>& q, double lambda, int points) {
  const double c0 = std::exp2(lambda) * q[0], c1 = std::exp2(lambda) * q[1];
  double best = 1.0;
  for (int i = 0; i <= points; ++i) {
    const double a = std::min(c0, 1.0) * i / points;
    const double b = std::min(c1, 1.0 - a);
    best = std::min(best, purified_of(p, {a, b}));
  }
  return best;
}

}  // namespace

TEST_CASE("oracle: no smoothing needed above D_max") {
  const auto sol = classical_smoothing_oracle({0.5, 0.5}, {0.25, 0.75}, 1.0);
  CHECK(sol.epsilon == doctest::Approx(0.0).epsilon(1e-7));
  CHECK(sol.p_tilde[0] == doctest::Approx(0.5));
  CHECK(sol.p_tilde[1] == doctest::Approx(0.5));
}

TEST_CASE("oracle: KKT example at lambda = 0") {
  const auto sol = classical_smoothing_oracle({0.5, 0.5}, {0.25, 0.75}, 0.0);
  CHECK(sol.p_tilde[0] == doctest::Approx(0.25));
  CHECK(sol.p_tilde[1] == doctest::Approx(0.75));
  CHECK(sol.fidelity == doctest::Approx(std::sqrt(1.0 / 8) + std::sqrt(3.0 / 8)));
  CHECK(sol.epsilon == doctest::Approx(0.2588).epsilon(1e-4));
}

TEST_CASE("oracle agrees with brute force on two-point instances") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 30; ++i) {
    const auto p = random_probabilities(2, rng);
    const auto q = random_probabilities(2, rng);
    std::uniform_real_distribution<double> u(-1.0, 1.5);
    const double lambda = u(rng);
    const double oracle = classical_smoothing_oracle(p, q, lambda).epsilon;
    const double grid = grid_epsilon(p, q, lambda, 1'000'000);
    CHECK(std::abs(oracle - grid) <= 1e-3);
    CHECK(oracle <= grid + 1e-9);
  }
}

TEST_CASE("oracle is locally optimal along feasible directions") {
  std::mt19937_64 rng(32);
  for (int i = 0; i < 30; ++i) {
    const std::size_t n = 3 + i % 3;
    const auto p = random_probabilities(n, rng);
    const auto q = random_probabilities(n, rng);
    const double lambda = 0.1 * (i % 7);
    const auto sol = classical_smoothing_oracle(p, q, lambda);
    const double cap = std::exp2(lambda);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        for (double step : {1e-4, -1e-4}) {
          std::vector<double> t = sol.p_tilde;
          t[a] += step;
          if (a != b) t[b] -= step;
          bool ok = true;
          double mass = 0.0;
          for (std::size_t k = 0; k < n; ++k) {
            ok = ok && t[k] >= 0.0 && t[k] <= cap * q[k] + 1e-15;
            mass += t[k];
          }
          if (!ok || mass > 1.0 + 1e-15) continue;
          double f = 0.0;
          for (std::size_t k = 0; k < n; ++k) f += std::sqrt(p[k] * t[k]);
          CHECK(f <= sol.fidelity + 1e-8);
        }
      }
    }
  }
}

TEST_CASE("oracle handles zero reference mass and is monotone in lambda") {
  const auto sol = classical_smoothing_oracle({0.5, 0.5}, {1.0, 0.0}, 3.0);
  CHECK(sol.p_tilde[1] == 0.0);
  CHECK(sol.fidelity == doctest::Approx(std::sqrt(0.5)));
  std::mt19937_64 rng(33);
  const auto p = random_probabilities(4, rng);
  const auto q = random_probabilities(4, rng);
  double prev = 2.0;
  for (double l = -2.0; l < 3.0; l += 0.1) {
    const double e = classical_smoothing_oracle(p, q, l).epsilon;
    CHECK(e <= prev + 1e-12);
    prev = e;
  }
}

TEST_CASE("spectrum and atom forms agree") {
  std::mt19937_64 rng(34);
  const auto p = random_probabilities(3, rng);
  const auto q = random_probabilities(3, rng);
  const auto spec = joint_spectrum(HermitianOperator::Diagonal(p), HermitianOperator::Diagonal(q));
  CHECK(spec.total_weight() == doctest::Approx(1.0));
  for (double l : {-0.5, 0.0, 0.4, 1.3}) {
    CHECK(classical_smoothing_oracle(spec, l).epsilon ==
          doctest::Approx(classical_smoothing_oracle(p, q, l).epsilon).epsilon(1e-10));
  }
  CHECK_THROWS_AS(joint_spectrum(random_density(2, rng), random_density(2, rng)), Error);
}

TEST_CASE("iid spectrum") {
  const auto base = joint_spectrum(diag({0.5, 0.5}), diag({0.25, 0.75}));
  const auto one = iid_spectrum(base, 1);
  CHECK(one.size() == base.size());
  const auto twenty = iid_spectrum(base, 20);
  CHECK(twenty.size() <= 21);
  CHECK(twenty.total_weight() == doctest::Approx(1.0).epsilon(1e-9));
  // dense cross-check of positive parts at n = 3
  std::mt19937_64 rng(35);
  const auto p = random_probabilities(2, rng);
  const auto q = random_probabilities(2, rng);
  const auto rho = HermitianOperator::Diagonal(p);
  const auto sig = HermitianOperator::Diagonal(q);
  const auto s3 = iid_spectrum(joint_spectrum(rho, sig), 3);
  for (double c : {0.3, 1.0, 2.5}) {
    const double dense = positive_part_trace(tensor_power(rho, 3) - std::exp2(c) * tensor_power(sig, 3));
    CHECK(positive_part_trace(s3, c) == doctest::Approx(dense).epsilon(1e-10));
  }
}

TEST_CASE("achievability and converse bound endpoints") {
  const auto p = state({0.5, 0.5});
  const auto q = diag({0.25, 0.75});
  CHECK(achievability_bound(p, q, 0.3, 0.0) == 1.0);
  CHECK(achievability_bound(p, q, 200.0, 1.0) < 1e-20);
  CHECK(converse_bound(p, q, 5.0) == 0.0);
  CHECK(converse_bound_from_mass(1.0, 9.0) == doctest::Approx(std::sqrt(2.0 / 9.0)));
}

TEST_CASE("bounds bracket the exact value for commuting pairs") {
  std::mt19937_64 rng(36);
  for (int i = 0; i < 20; ++i) {
    const auto p = random_probabilities(3, rng);
    const auto q = random_probabilities(3, rng);
    const auto rho = state(HermitianOperator::Diagonal(p));
    const auto sig = HermitianOperator::Diagonal(q);
    for (double l = -1.0; l <= 2.0; l += 0.25) {
      const double exact = classical_smoothing_oracle(p, q, l).epsilon;
      CHECK(converse_bound(rho, sig, l) <= exact + 1e-9);
      for (double s = 0.0; s <= 4.0; s += 0.25) CHECK(achievability_bound(rho, sig, l, s) >= exact - 1e-9);
    }
  }
}

TEST_CASE("pinched witness") {
  std::mt19937_64 rng(37);
  // above D_max + log v the witness is ρ itself
  const auto rho = state(random_density(3, rng));
  const HermitianOperator sig = random_density(3, rng);
  const double lam = d_max(rho, sig).value + std::log2(3.0) + 0.01;
  const auto w = pinched_smoothing_witness(rho, sig, lam);
  CHECK(w.achieved == doctest::Approx(0.0).epsilon(1e-6));
  for (int i = 0; i < 30; ++i) {
    const auto r = state(random_density(3, rng));
    const HermitianOperator s = random_density(3, rng);
    const double l = 0.2 * (i % 10);
    const auto wit = pinched_smoothing_witness(r, s, l);
    CHECK(min_eigenvalue(std::exp2(l) * s - wit.rho_tilde.op()) >= -1e-9);
    CHECK(wit.rho_tilde.trace() <= 1.0 + 1e-9);
    double best = 1.0;
    for (int k = 0; k <= 400; ++k) best = std::min(best, achievability_bound(r, s, l, 0.01 * k));
    CHECK(wit.achieved <= best + 1e-9);
  }
  // commuting pair: feasible, so never better than the optimum
  const std::vector<double> p = {0.2, 0.5, 0.3}, q = {0.5, 0.2, 0.3};
  for (double l : {0.0, 0.5, 1.0}) {
    const auto wit = pinched_smoothing_witness(state(HermitianOperator::Diagonal(p)), HermitianOperator::Diagonal(q), l);
    CHECK(wit.achieved >= classical_smoothing_oracle(p, q, l).epsilon - 1e-9);
  }
}

TEST_CASE("iid certificates on the reference pair") {
  const auto p = state({0.5, 0.5});
  const auto q = diag({0.25, 0.75});
  const double r = 0.5 * (relative_entropy(p, q).value + d_max(p, q).value);
  for (int n = 1; n <= 12; ++n) {
    const auto c = iid_smoothing_certificate(p, q, r, n);
    REQUIRE(c.exact.has_value());
    CHECK(c.lower <= *c.exact + 1e-9);
    CHECK(*c.exact <= c.upper + 1e-9);
    CHECK(c.commuting);
    if (c.witness) CHECK(min_eigenvalue(std::exp2(c.lambda) * tensor_power(q, n) - c.witness->op()) >= -1e-9);
  }
  for (int n : {1, 5, 9}) CHECK(*iid_smoothing_certificate(p, q, 1.2, n).exact == doctest::Approx(0.0).epsilon(1e-7));
}

TEST_CASE("non-commuting certificates keep lower <= witness") {
  std::mt19937_64 rng(38);
  for (int i = 0; i < 5; ++i) {
    const auto r = state(random_density(2, rng));
    const HermitianOperator s = random_density(2, rng);
    const double rate = 0.5 * (relative_entropy(r, s).value + d_max(r, s).value);
    for (int n = 1; n <= 3; ++n) {
      const auto c = iid_smoothing_certificate(r, s, rate, n);
      CHECK_FALSE(c.commuting);
      REQUIRE(c.witness_value.has_value());
      CHECK(c.lower <= *c.witness_value + 1e-9);
      CHECK(c.lower <= c.upper + 1e-9);
    }
  }
}

TEST_CASE("smooth min-entropy") {
  const CQState biased = CQState::Classical({0.2, 0.3, 0.5});
  const double hmin = conditional_min_entropy(biased);
  CHECK(smooth_min_entropy(biased, 1e-9) == doctest::Approx(hmin).epsilon(1e-5));
  CHECK(smooth_min_entropy(biased, 0.1) >= hmin);
  // relabeling and padding X leaves the value unchanged
  const CQState padded = CQState::Classical({0.5, 0.0, 0.3, 0.2});
  for (double e : {0.01, 0.1, 0.3}) {
    CHECK(smooth_min_entropy(padded, e) == doctest::Approx(smooth_min_entropy(biased, e)).epsilon(1e-5));
  }
  // post-processing: H^ε(X|E) ≥ H^ε(f(X)|E) over every f: 3 → 2
  std::mt19937_64 rng(39);
  const CQState src = random_commuting_cq(3, 2, rng);
  const HashFamily all = HashFamily::AllFunctions(3, 2);
  for (double e : {0.01, 0.1, 0.3}) {
    const double hx = smooth_min_entropy(src, e);
    for (std::uint64_t f = 0; f < *all.size(); ++f) {
      const HashFunction h = all.member(f);
      std::vector<double> probs(2, 0.0);
      std::vector<Matrix> sums(2, Matrix::Zero(2, 2));
      for (std::size_t x = 0; x < 3; ++x) sums[h.table[x]] += src.block(x).matrix();
      std::vector<HermitianOperator> cond;
      std::vector<double> pz;
      for (int z = 0; z < 2; ++z) {
        const double pzv = sums[z].trace().real();
        if (pzv <= 0.0) continue;
        pz.push_back(pzv);
        cond.emplace_back(sums[z] / pzv);
      }
      CHECK(hx >= smooth_min_entropy(CQState(pz, cond), e) - 2e-6);
    }
  }
  CHECK_THROWS_AS(smooth_min_entropy(random_cq(2, 2, rng), 0.1), Error);
}
