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

#include <set>

#include "qpa/error.hpp"
#include "qpa/hashing.hpp"

using namespace qpa;

TEST_CASE("hash functions validate their tables") {
  CHECK_NOTHROW(HashFunction(2, {0, 1, 1}));
  CHECK_THROWS_AS(HashFunction(2, {0, 2}), Error);
  CHECK(HashFunction(3, {2, 0, 1}).describe() == "[2,0,1]");
}

TEST_CASE("all-functions enumeration reads the table as a base-|Z| number") {
  const HashFamily all = HashFamily::AllFunctions(3, 2);
  REQUIRE(all.size().has_value());
  CHECK(*all.size() == 8);
  CHECK(all.member(0).table == std::vector<std::uint32_t>{0, 0, 0});
  CHECK(all.member(1).table == std::vector<std::uint32_t>{0, 0, 1});
  CHECK(all.member(6).table == std::vector<std::uint32_t>{1, 1, 0});
  std::set<std::vector<std::uint32_t>> seen;
  for (std::uint64_t i = 0; i < 8; ++i) seen.insert(all.member(i).table);
  CHECK(seen.size() == 8);
  std::vector<std::uint32_t> t;
  all.member_table(5, t);
  CHECK(t == all.member(5).table);
}

TEST_CASE("all-functions collision probability is exactly 1/|Z|") {
  for (auto [d, m] : {std::pair<std::size_t, std::size_t>{3, 2}, {4, 3}, {2, 5}}) {
    const auto c = HashFamily::AllFunctions(d, m).certify();
    CHECK(c.max_collision == doctest::Approx(1.0 / m));
    CHECK(c.two_universal);
    CHECK(c.method == "exhaustive");
  }
  // beyond the work budget the closed form is used
  const auto big = HashFamily::AllFunctions(64, 2).certify(1000);
  CHECK(big.max_collision == doctest::Approx(0.5));
  CHECK(big.two_universal);
}

TEST_CASE("affine prime family") {
  CHECK_THROWS_AS(HashFamily::AffinePrime(9, 2, 9), Error);
  CHECK_THROWS_AS(HashFamily::AffinePrime(5, 7, 5), Error);
  for (std::uint64_t p : {5, 7, 11, 13, 31, 257}) {
    for (std::size_t m : {2, 3, 4}) {
      const HashFamily f = HashFamily::AffinePrime(p, m, p);
      const auto c = f.certify();
      CHECK(c.max_collision <= 1.0 / m + 1e-12);
      CHECK(c.two_universal);
    }
  }
  // exhaustive and pair-class counting agree
  const HashFamily f = HashFamily::AffinePrime(7, 3, 6);
  const auto ex = f.certify();
  const auto pc = f.certify(1);
  CHECK(ex.numerator * pc.denominator == pc.numerator * ex.denominator);
}

TEST_CASE("permutation family of the quaternary example") {
  const HashFamily base = HashFamily::Example2Permutation(1);
  CHECK(*base.size() == 24);
  CHECK(base.domain_size() == 4);
  CHECK(base.range_size() == 2);
  const auto c = base.certify();
  CHECK(c.max_collision == doctest::Approx(1.0 / 3));
  CHECK(c.numerator == 8);
  CHECK(c.denominator == 24);
  CHECK(c.two_universal);
  // every member splits the four symbols evenly
  for (std::uint64_t i = 0; i < 24; ++i) {
    const auto t = base.member(i).table;
    int ones = 0;
    for (auto z : t) ones += static_cast<int>(z);
    CHECK(ones == 2);
  }
  // the n-fold product with one shared permutation keeps collision 1/3
  const auto c2 = HashFamily::Example2Permutation(2).certify();
  CHECK(c2.max_collision == doctest::Approx(1.0 / 3));
  CHECK_FALSE(c2.two_universal);
}

TEST_CASE("seeded sampling is reproducible") {
  const HashFamily f = HashFamily::AllFunctions(16, 4);
  CHECK(f.sample(7, 3).table == f.sample(7, 3).table);
  CHECK(f.sample(7, 3).table != f.sample(8, 3).table);
  auto a = derive_rng(1, 2);
  auto b = derive_rng(1, 2);
  CHECK(a() == b());
  CHECK(is_prime(257));
  CHECK_FALSE(is_prime(1));
  CHECK_FALSE(is_prime(91));
}
