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
#include "qpa/error.hpp"
#include "qpa/exponents.hpp"
#include "qpa/measures.hpp"
#include "qpa/random.hpp"

using namespace qpa;
using qpa::test::diag;
using qpa::test::state;

namespace {

const CQState kBiased = CQState::Classical({1.0 / 3, 2.0 / 3});

double grid_max(const std::function<double(double)>& f, double lo, double hi, int points) {
  double best = -1e300;
  for (int i = 0; i <= points; ++i) best = std::max(best, f(lo + (hi - lo) * i / points));
  return best;
}

double h_alpha(const CQState& cq, double a) { return renyi_conditional_entropy(cq, a); }

}  // namespace

TEST_CASE("maximize_concave finds interior and boundary optima") {
  auto o = maximize_concave([](double s) { return -(s - 0.3) * (s - 0.3); }, 0.0, 1.0);
  CHECK(o.s == doctest::Approx(0.3).epsilon(1e-6));
  o = maximize_concave([](double s) { return s; }, 0.0, 2.0);
  CHECK(o.s == 2.0);
  // flat objective: the smallest s wins
  o = maximize_concave([](double) { return 1.0; }, 0.5, 3.0);
  CHECK(o.s == 0.5);
}

TEST_CASE("smoothing exponent regimes and grid agreement") {
  const auto p = state({0.5, 0.5});
  const auto q = diag({0.25, 0.75});
  const double d = relative_entropy(p, q).value;
  const double dmax = d_max(p, q).value;
  CHECK(smoothing_exponent(p, q, d).value == 0.0);
  CHECK(smoothing_exponent(p, q, d).regime == Regime::kZero);
  const auto inf = smoothing_exponent(p, q, dmax + 0.1);
  CHECK(inf.value == kInf);
  CHECK(inf.regime == Regime::kDivergent);
  const double r = 0.5 * (d + dmax);
  const auto v = smoothing_exponent(p, q, r);
  const double grid = grid_max([&](double s) { return 0.5 * s * (r - sandwiched_renyi(p, q, 1 + s).value); },
                               1e-5, 64.0, 200000);
  CHECK(v.value == doctest::Approx(grid).epsilon(1e-6));
  CHECK(v.purified() == doctest::Approx(v.value / 2));
}

TEST_CASE("upper exponent endpoints") {
  CHECK(pa_upper_exponent(kBiased, conditional_entropy(kBiased)).value == 0.0);
  CHECK(pa_upper_exponent(kBiased, conditional_entropy(kBiased)).maximizer_s == 0.0);
  const auto at_min = pa_upper_exponent(kBiased, std::log2(1.5));
  CHECK(at_min.value == kInf);
  CHECK(at_min.boundary);
  for (double r : {0.0, 0.2, 0.5, 0.58}) CHECK(pa_upper_exponent(kBiased, r).value == kInf);
}

TEST_CASE("lower exponent endpoints") {
  CHECK(pa_lower_exponent(kBiased, 1.0).value == 0.0);
  CHECK(pa_lower_exponent(kBiased, 0.0).value == doctest::Approx(std::log2(9.0 / 5.0)).epsilon(1e-10));
  CHECK(pa_lower_exponent(kBiased, 0.0).maximizer_s == doctest::Approx(1.0));
}

TEST_CASE("upper and lower exponents agree above the critical rate") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 5; ++i) {
    const CQState cq = random_cq(3, 2, rng);
    const double rc = r_critical(cq);
    const double h = conditional_entropy(cq);
    for (int k = 0; k < 10; ++k) {
      const double r = rc + (h - rc) * k / 10.0;
      CHECK(pa_upper_exponent(cq, r).value == doctest::Approx(pa_lower_exponent(cq, r).value).epsilon(1e-8));
    }
    // strict gap permitted below, never reversed
    for (double r = 0.0; r < rc; r += 0.05) CHECK(pa_upper_exponent(cq, r).value >= pa_lower_exponent(cq, r).value);
  }
}

TEST_CASE("upper exponent matches a dense grid on random states") {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 6; ++i) {
    const CQState cq = random_cq(2 + i % 2, 2, rng);
    const double h = conditional_entropy(cq);
    const double hmin = conditional_min_entropy(cq);
    for (double t : {0.3, 0.6, 0.9}) {
      const double r = hmin + t * (h - hmin);
      const auto v = pa_upper_exponent(cq, r);
      const double grid = grid_max([&](double s) { return s * (h_alpha(cq, 1 + s) - r); }, 0.0, 64.0, 64000);
      CHECK(v.value == doctest::Approx(grid).epsilon(1e-6));
      CHECK(v.value <= grid + 1e-6 * (1 + grid));
    }
  }
}

TEST_CASE("exponents are nonincreasing and convex in R") {
  std::mt19937_64 rng(23);
  const CQState cq = random_cq(3, 2, rng);
  const double hmin = conditional_min_entropy(cq);
  const double h = conditional_entropy(cq);
  std::vector<double> up, lo;
  for (int k = 0; k <= 40; ++k) {
    const double r = hmin + 0.01 + (h + 0.1 - hmin - 0.01) * k / 40.0;
    up.push_back(pa_upper_exponent(cq, r).value);
    lo.push_back(pa_lower_exponent(cq, r).value);
  }
  for (std::size_t k = 1; k < up.size(); ++k) {
    CHECK(up[k] <= up[k - 1] + 1e-9);
    CHECK(lo[k] <= lo[k - 1] + 1e-9);
  }
  for (std::size_t k = 1; k + 1 < up.size(); ++k) {
    CHECK(up[k + 1] - 2 * up[k] + up[k - 1] >= -1e-7);
    CHECK(lo[k + 1] - 2 * lo[k] + lo[k - 1] >= -1e-7);
  }
}

TEST_CASE("r_hat examples") {
  const CQState uniform = CQState::Classical({0.25, 0.25, 0.25, 0.25});
  for (double s : {0.1, 1.0, 5.0}) CHECK(r_hat(uniform, s) == doctest::Approx(2.0).epsilon(1e-9));
  std::mt19937_64 rng(24);
  const CQState cq = random_cq(3, 2, rng);
  CHECK(std::abs(r_hat(cq, 1e-4) - conditional_entropy(cq)) <= 1e-3);
  CHECK(std::abs(r_hat(cq, 64.0) - conditional_min_entropy(cq)) <= 1e-2);
  double prev = 1e300;
  for (double s = 0.05; s < 10; s *= 1.3) {
    const double v = r_hat(cq, s);
    CHECK(v <= prev + 1e-9);
    prev = v;
  }
  CHECK_THROWS_AS(r_hat(cq, 0.0), Error);
}

TEST_CASE("critical rate examples") {
  CHECK(r_critical(CQState::Classical({0.5, 0.5})) == doctest::Approx(1.0));
  std::mt19937_64 rng(25);
  const CQState prod = CQState::Product({0.2, 0.8}, random_density(2, rng));
  CHECK(r_critical(prod) == doctest::Approx(r_critical(CQState::Classical({0.2, 0.8}))).epsilon(1e-9));
  const double rc = r_critical(kBiased);
  const double h = -(1.0 / 3) * std::log2(1.0 / 3) - (2.0 / 3) * std::log2(2.0 / 3);
  CHECK(rc > std::log2(1.5));
  CHECK(rc < h);
  // For a classical source R̂(1) = Σ p² log(1/p) / Σ p².
  CHECK(rc == doctest::Approx((1.0 / 9 * std::log2(3.0) + 4.0 / 9 * std::log2(1.5)) / (5.0 / 9)).epsilon(1e-8));
}

TEST_CASE("Mosonyi-Ogawa rate") {
  const auto p = state({0.5, 0.5});
  const auto q = diag({0.25, 0.75});
  const double d = relative_entropy(p, q).value;
  CHECK(mo_rate(p, q, d).value == 0.0);
  CHECK(mo_rate(p, q, 1.5).value == -kInf);
  const double a = 0.6;
  const auto v = mo_rate(p, q, a);
  double grid = 1e300;
  for (int i = 0; i <= 64000; ++i) {
    const double s = 64.0 * i / 64000;
    grid = std::min(grid, s == 0 ? 0.0 : s * (sandwiched_renyi(p, q, 1 + s).value - a));
  }
  CHECK(v.value == doctest::Approx(grid).epsilon(1e-6));
}

TEST_CASE("equivocation rate") {
  CHECK(equivocation_rate(kBiased, 0.0, 0.5) == 0.0);
  CHECK(equivocation_rate(CQState::Classical({0.5, 0.5}), 2.0, 0.7) == doctest::Approx(1.0));
  CHECK(equivocation_rate(kBiased, 1.0, 1.0) == doctest::Approx(1.0 - std::log2(9.0 / 5.0)));
  CHECK_THROWS_AS(equivocation_rate(kBiased, 1.0, 0.0), Error);
  CHECK_THROWS_AS(equivocation_rate(kBiased, 1.0, 1.5), Error);
}

TEST_CASE("Renyi security exponent") {
  CHECK(renyi_security_exponent(kBiased, 1.0, 0.5).value == 0.0);
  const double h2 = std::log2(9.0 / 5.0);
  CHECK(renyi_security_exponent(kBiased, 0.7, 1.0).value == doctest::Approx(h2 - 0.7));
  CHECK(renyi_security_exponent(kBiased, 0.7, 1.0).valid == false);
  CHECK(renyi_security_exponent(kBiased, 0.8, 1.0).valid == true);
  std::mt19937_64 rng(26);
  const CQState cq = random_cq(3, 2, rng);
  for (double r : {0.1, 0.3, 0.6}) {
    const double grid = grid_max([&](double t) { return t * (h_alpha(cq, 1 + t) - r); }, 0.3, 1.0, 70000);
    CHECK(renyi_security_exponent(cq, r, 0.3).value == doctest::Approx(std::max(0.0, grid)).epsilon(1e-6));
  }
  CHECK_THROWS_AS(renyi_security_exponent(cq, 0.1, 0.0), Error);
}

TEST_CASE("exponent curves do not depend on the thread count") {
  std::mt19937_64 rng(27);
  const CQState cq = random_cq(3, 2, rng);
  const auto a = exponent_curve(cq, 0.0, 1.5, 31, CurveMode::kBoth, 1.0, {}, 1);
  const auto b = exponent_curve(cq, 0.0, 1.5, 31, CurveMode::kBoth, 1.0, {}, 8);
  REQUIRE(a.points.size() == 31);
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    CHECK(a.points[i].upper->value == b.points[i].upper->value);
    CHECK(a.points[i].lower->value == b.points[i].lower->value);
  }
  CHECK(a.r_critical == doctest::Approx(r_critical(cq)));
  CHECK_THROWS_AS(exponent_curve(cq, 1.0, 0.5, 3, CurveMode::kUpper), Error);
}
