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

// Hash functions X → Z as lookup tables and the hash families offered for
// sampling and exhaustive averaging.

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace qpa {

struct HashFunction {
  std::size_t domain_size = 0;
  std::size_t range_size = 0;
  std::vector<std::uint32_t> table;  // domain index → range index

  HashFunction() = default;
  HashFunction(std::size_t range, std::vector<std::uint32_t> table);

  std::string describe() const;  // "[z0,z1,...]"
};

enum class FamilyKind { kAllFunctions, kAffinePrime, kExample2Permutation };

const char* family_kind_name(FamilyKind k);

// Max over pairs x ≠ x' of Pr_F[F(x) = F(x')], compared with 1/|Z|.
struct CollisionCertificate {
  double max_collision = 0.0;
  std::uint64_t numerator = 0;    // collisions at the worst pair
  std::uint64_t denominator = 0;  // family size used for the count
  double bound = 0.0;             // 1/|Z|
  bool two_universal = false;
  std::string method;
  std::size_t worst_x = 0;
  std::size_t worst_y = 0;
};

// Independent generator for draw `index` under a master seed.
std::mt19937_64 derive_rng(std::uint64_t seed, std::uint64_t index);

class HashFamily {
 public:
  // Every function X → Z; members ordered by the table read as a base-|Z|
  // integer with entry 0 most significant.
  static HashFamily AllFunctions(std::size_t domain, std::size_t range);
  // x ↦ ((a·x + b) mod p) mod M for a ∈ [1,p), b ∈ [0,p); domain and M ≤ p.
  static HashFamily AffinePrime(std::uint64_t prime, std::size_t range, std::size_t domain);
  // (f∘Π)^{×n} on {1,2,3,4}^n with f(1)=f(2)=0, f(3)=f(4)=1 and one uniformly
  // random permutation Π shared by all n coordinates.
  static HashFamily Example2Permutation(int n);

  FamilyKind kind() const { return kind_; }
  std::string name() const;
  std::size_t domain_size() const { return domain_; }
  std::size_t range_size() const { return range_; }
  std::uint64_t prime() const { return prime_; }
  int blocklength() const { return n_; }

  // Number of members, absent when it exceeds 2^63.
  std::optional<std::uint64_t> size() const;
  HashFunction member(std::uint64_t index) const;
  void member_table(std::uint64_t index, std::vector<std::uint32_t>& table) const;
  // Uniform member for draw `index` under `seed`.
  HashFunction sample(std::uint64_t seed, std::uint64_t index) const;

  // Exact certification: exhaustive over members and pairs when that fits in
  // `work_budget` table lookups, otherwise by per-pair-class counting.
  CollisionCertificate certify(std::uint64_t work_budget = 100'000'000) const;

 private:
  HashFamily(FamilyKind kind, std::size_t domain, std::size_t range)
      : kind_(kind), domain_(domain), range_(range) {}

  CollisionCertificate certify_exhaustive() const;

  FamilyKind kind_;
  std::size_t domain_;
  std::size_t range_;
  std::uint64_t prime_ = 0;
  int n_ = 1;
};

bool is_prime(std::uint64_t p);

}  // namespace qpa
