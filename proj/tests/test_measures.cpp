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

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "qpa/cq_state.hpp"
#include "qpa/measures.hpp"
#include "qpa/random.hpp"

using namespace qpa;
using qpa::test::diag;
using qpa::test::state;

namespace {

// Random projective measurement in a random basis, as a CPTP map to a
// diagonal output.
HermitianOperator measure(const HermitianOperator& a, const Matrix& basis) {
  std::vector<double> out(a.dim());
  for (std::size_t k = 0; k < a.dim(); ++k) {
    out[k] = (basis.col(k).adjoint() * a.matrix() * basis.col(k))(0, 0).real();
  }
  return HermitianOperator::Diagonal(out);
}

double classical_renyi(const std::vector<double>& p, const std::vector<double>& q, double a) {
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += std::pow(p[i], a) * std::pow(q[i], 1.0 - a);
  return std::log2(sum) / (a - 1.0);
}

}  // namespace

TEST_CASE("fidelity examples") {
  std::mt19937_64 rng(1);
  const auto r = state(random_density(3, rng));
  CHECK(fidelity(r, r) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(fidelity(state({0.5, 0.5}), state({0.25, 0.75})) ==
        doctest::Approx(std::sqrt(1.0 / 8) + std::sqrt(3.0 / 8)));
  CHECK(fidelity(state({0.5, 0.5}), StateDescriptor(diag({0.0, 0.0}), StateKind::kSubnormalized)) == 0.0);
}

TEST_CASE("purified and trace distance examples") {
  std::mt19937_64 rng(2);
  const auto r = state(random_density(3, rng));
  CHECK(purified_distance(r, r) == doctest::Approx(0.0).epsilon(1e-7));
  CHECK(purified_distance(state({1.0, 0.0}), state({0.0, 1.0})) == doctest::Approx(1.0));
  CHECK(trace_distance(r, r) == doctest::Approx(0.0));
  CHECK(trace_distance(state({1.0 / 3, 2.0 / 3}), state({0.5, 0.5})) == doctest::Approx(1.0 / 6));
  const StateDescriptor half(0.5 * r.op(), StateKind::kSubnormalized);
  CHECK(trace_distance(r, half) == doctest::Approx(0.5));
}

TEST_CASE("relative entropy examples") {
  std::mt19937_64 rng(3);
  const auto r = state(random_density(3, rng));
  CHECK(relative_entropy(r, r.op()).value == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(relative_entropy(state({0.5, 0.5}), diag({0.25, 0.75})).value ==
        doctest::Approx(0.5 + 0.5 * std::log2(2.0 / 3.0)));
  const auto d = relative_entropy(state({1.0, 0.0}), diag({0.0, 1.0}));
  CHECK(d.is_infinite());
  CHECK(d.support_violation == doctest::Approx(1.0));
}

TEST_CASE("sandwiched Renyi examples") {
  std::mt19937_64 rng(4);
  const auto r = state(random_density(3, rng));
  for (double a : {0.5, 0.9, 2.0, 7.0}) CHECK(sandwiched_renyi(r, r.op(), a).value == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(sandwiched_renyi(state({0.5, 0.5}), diag({0.25, 0.75}), 2.0).value == doctest::Approx(std::log2(4.0 / 3.0)));
  // commuting case against direct summation
  const std::vector<double> p = {0.1, 0.6, 0.3}, q = {0.3, 0.3, 0.4};
  for (double a : {0.3, 0.5, 1.5, 3.0}) {
    CHECK(sandwiched_renyi(state({0.1, 0.6, 0.3}), diag({0.3, 0.3, 0.4}), a).value ==
          doctest::Approx(classical_renyi(p, q, a)).epsilon(1e-12));
  }
  // α < 1 stays finite on partially overlapping supports
  CHECK_FALSE(sandwiched_renyi(state({0.5, 0.5}), diag({1.0, 0.0}), 0.5).is_infinite());
  CHECK(sandwiched_renyi(state({0.5, 0.5}), diag({1.0, 0.0}), 2.0).is_infinite());
}

TEST_CASE("D_max examples") {
  std::mt19937_64 rng(5);
  const auto r = state(random_density(3, rng));
  CHECK(d_max(r, r.op()).value == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(d_max(state({1.0 / 3, 2.0 / 3}), diag({0.5, 0.5})).value == doctest::Approx(std::log2(4.0 / 3.0)));
}

TEST_CASE("divergence properties on random pairs") {
  std::mt19937_64 rng(6);
  const double alphas[] = {0.5, 0.8, 1.2, 2.0, 5.0, 20.0};
  for (int i = 0; i < 100; ++i) {
    const std::size_t dim = 2 + i % 3;
    const auto r = state(random_density(dim, rng));
    const HermitianOperator s = random_density(dim, rng);
    // monotone in α and capped by D_max
    double prev = -1e300;
    const double dmax = d_max(r, s).value;
    for (double a : alphas) {
      const double v = sandwiched_renyi(r, s, a).value;
      CHECK(v >= prev - 1e-9);
      CHECK(v <= dmax + 1e-9);
      prev = v;
    }
    // convexity of log Q_α
    std::vector<double> lq;
    for (int k = 0; k <= 20; ++k) lq.push_back(log2_q_alpha(r, s, 0.5 + 0.25 * k));
    for (std::size_t k = 1; k + 1 < lq.size(); ++k) CHECK(lq[k + 1] - 2 * lq[k] + lq[k - 1] >= -1e-7);
    // α → 1 and the D_{1/2} identity
    const double d = relative_entropy(r, s).value;
    CHECK(std::abs(sandwiched_renyi(r, s, 1.0 + 1e-4).value - d) <= 1e-3);
    CHECK(std::abs(sandwiched_renyi(r, s, 1.0 - 1e-4).value - d) <= 1e-3);
    CHECK(std::abs(renyi_limit_gap(r, s, 1e-4)) <= 1e-3);
    const auto sd = state(s);
    CHECK(sandwiched_renyi(r, s, 0.5).value == doctest::Approx(-2.0 * std::log2(fidelity(r, sd))).epsilon(1e-8));
    // Fuchs–van de Graaf and the relative-entropy bound on P
    const double td = trace_distance(r, sd);
    const double pd = purified_distance(r, sd);
    CHECK(pd >= td - 1e-9);
    CHECK(pd <= std::sqrt(2 * td - td * td) + 1e-9);
    CHECK(pd <= std::sqrt(std::log(2.0) * d) + 1e-9);
  }
}

TEST_CASE("data processing under measurements and pinching") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    const std::size_t dim = 2 + i % 3;
    const auto r = state(random_density(dim, rng));
    const HermitianOperator s = random_density(dim, rng);
    const Matrix u = random_unitary(dim, rng);
    const auto mr = state(measure(r.op(), u));
    const HermitianOperator ms = measure(s, u);
    const auto pr = state(pinching(r.op(), s));
    for (double a : {0.5, 1.0, 2.0, 5.0}) {
      const double before = a == 1.0 ? relative_entropy(r, s).value : sandwiched_renyi(r, s, a).value;
      const double after_m = a == 1.0 ? relative_entropy(mr, ms).value : sandwiched_renyi(mr, ms, a).value;
      const double after_p = a == 1.0 ? relative_entropy(pr, s).value : sandwiched_renyi(pr, s, a).value;
      CHECK(before >= after_m - 1e-9);
      CHECK(before >= after_p - 1e-9);
    }
  }
}

TEST_CASE("conditional entropies") {
  std::mt19937_64 rng(8);
  const HermitianOperator e = random_density(2, rng);
  const CQState prod = CQState::Product({0.5, 0.5}, e);
  for (double a : {0.5, 1.0, 2.0, 10.0}) CHECK(renyi_conditional_entropy(prod, a) == doctest::Approx(1.0));
  CHECK(conditional_entropy(prod) == doctest::Approx(1.0));
  // trivial E reduces to the Rényi entropy
  const std::vector<double> p = {0.2, 0.5, 0.3};
  const CQState cl = CQState::Classical(p);
  for (double a : {0.5, 2.0, 3.0}) {
    double sum = 0.0;
    for (double x : p) sum += std::pow(x, a);
    CHECK(renyi_conditional_entropy(cl, a) == doctest::Approx(std::log2(sum) / (1.0 - a)));
  }
  CHECK(conditional_min_entropy(CQState::Classical({1.0 / 3, 2.0 / 3})) == doctest::Approx(std::log2(1.5)));
}

TEST_CASE("CQ fast path matches the dense bipartite computation") {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 20; ++i) {
    const CQState cq = random_cq(2 + i % 2, 2, rng);
    const StateDescriptor dense(cq.to_dense());
    for (double a : {0.5, 1.0, 2.0}) {
      CHECK(renyi_conditional_entropy(cq, a) ==
            doctest::Approx(renyi_conditional_entropy(dense, cq.size(), cq.dim_e(), a)).epsilon(1e-9));
    }
  }
}

TEST_CASE("discarding classical information cannot raise the entropy") {
  // ρ_{AXB} with A, X classical: H_α(AX|B) ≥ H_α(A|B).
  std::mt19937_64 rng(10);
  for (int i = 0; i < 30; ++i) {
    const CQState ax = random_cq(4, 2, rng);  // symbol index = 2a + x
    std::vector<double> pa(2, 0.0);
    std::vector<HermitianOperator> ca;
    for (int a = 0; a < 2; ++a) {
      pa[a] = ax.probs()[2 * a] + ax.probs()[2 * a + 1];
      ca.push_back((1.0 / pa[a]) * (ax.block(2 * a) + ax.block(2 * a + 1)));
    }
    const CQState a_only(pa, ca);
    for (double a : {0.5, 1.0, 2.0, 5.0}) {
      CHECK(renyi_conditional_entropy(ax, a) >= renyi_conditional_entropy(a_only, a) - 1e-9);
    }
  }
}
