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

#include "qpa/hashing.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <numeric>

#include "qpa/error.hpp"

namespace qpa {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

const std::array<std::array<std::uint32_t, 4>, 24>& permutations4() {
  static const auto perms = [] {
    std::array<std::array<std::uint32_t, 4>, 24> out{};
    std::array<std::uint32_t, 4> p = {0, 1, 2, 3};
    for (auto& slot : out) {
      slot = p;
      std::next_permutation(p.begin(), p.end());
    }
    return out;
  }();
  return perms;
}

// Checked a^b; nullopt on overflow past 2^63.
std::optional<std::uint64_t> checked_pow(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < b; ++i) {
    if (a != 0 && r > (std::uint64_t{1} << 63) / a) return std::nullopt;
    r *= a;
  }
  return r;
}

}  // namespace

std::mt19937_64 derive_rng(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL)));
}

bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d) {
    if (p % d == 0) return false;
  }
  return true;
}

HashFunction::HashFunction(std::size_t range, std::vector<std::uint32_t> t)
    : domain_size(t.size()), range_size(range), table(std::move(t)) {
  for (auto z : table) {
    if (z >= range_size) Fail(ErrorCode::kInvalidArgument, "hash table entry outside the range");
  }
}

std::string HashFunction::describe() const {
  std::string s = "[";
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(table[i]);
  }
  return s + "]";
}

const char* family_kind_name(FamilyKind k) {
  switch (k) {
    case FamilyKind::kAllFunctions: return "all_functions";
    case FamilyKind::kAffinePrime: return "affine_prime";
    case FamilyKind::kExample2Permutation: return "example2_permutation";
  }
  return "unknown";
}

HashFamily HashFamily::AllFunctions(std::size_t domain, std::size_t range) {
  if (domain < 1 || range < 1) Fail(ErrorCode::kInvalidArgument, "all_functions: empty domain or range");
  return HashFamily(FamilyKind::kAllFunctions, domain, range);
}

HashFamily HashFamily::AffinePrime(std::uint64_t prime, std::size_t range, std::size_t domain) {
  if (!is_prime(prime)) Fail(ErrorCode::kInvalidArgument, "affine_prime: modulus is not prime");
  if (range < 1 || range > prime) Fail(ErrorCode::kInvalidArgument, "affine_prime: range must lie in [1, p]");
  if (domain < 1 || domain > prime) Fail(ErrorCode::kInvalidArgument, "affine_prime: domain must lie in [1, p]");
  if (prime > (1u << 20)) Fail(ErrorCode::kInvalidArgument, "affine_prime: p above 2^20 is not supported");
  HashFamily f(FamilyKind::kAffinePrime, domain, range);
  f.prime_ = prime;
  return f;
}

HashFamily HashFamily::Example2Permutation(int n) {
  if (n < 1 || n > 15) Fail(ErrorCode::kInvalidArgument, "example2_permutation: n must lie in [1, 15]");
  HashFamily f(FamilyKind::kExample2Permutation, std::size_t{1} << (2 * n), std::size_t{1} << n);
  f.n_ = n;
  return f;
}

std::string HashFamily::name() const {
  switch (kind_) {
    case FamilyKind::kAllFunctions:
      return "all_functions(" + std::to_string(domain_) + "->" + std::to_string(range_) + ")";
    case FamilyKind::kAffinePrime:
      return "affine_prime(p=" + std::to_string(prime_) + ",M=" + std::to_string(range_) +
             ",domain=" + std::to_string(domain_) + ")";
    case FamilyKind::kExample2Permutation:
      return "example2_permutation(n=" + std::to_string(n_) + ")";
  }
  return "unknown";
}

std::optional<std::uint64_t> HashFamily::size() const {
  switch (kind_) {
    case FamilyKind::kAllFunctions: return checked_pow(range_, domain_);
    case FamilyKind::kAffinePrime: return prime_ * (prime_ - 1);
    case FamilyKind::kExample2Permutation: return 24;
  }
  return std::nullopt;
}

void HashFamily::member_table(std::uint64_t index, std::vector<std::uint32_t>& table) const {
  const auto count = size();
  if (count && index >= *count) Fail(ErrorCode::kInvalidArgument, "hash family member index out of range");
  table.resize(domain_);
  switch (kind_) {
    case FamilyKind::kAllFunctions:
      for (std::size_t i = domain_; i-- > 0;) {
        table[i] = static_cast<std::uint32_t>(index % range_);
        index /= range_;
      }
      break;
    case FamilyKind::kAffinePrime: {
      const std::uint64_t a = index / prime_ + 1;
      const std::uint64_t b = index % prime_;
      for (std::size_t x = 0; x < domain_; ++x) {
        table[x] = static_cast<std::uint32_t>(((a * x + b) % prime_) % range_);
      }
      break;
    }
    case FamilyKind::kExample2Permutation: {
      const auto& pi = permutations4()[index];
      for (std::size_t x = 0; x < domain_; ++x) {
        std::uint32_t z = 0;
        for (int c = n_ - 1; c >= 0; --c) {
          const std::uint32_t digit = (x >> (2 * c)) & 3u;
          z = (z << 1) | (pi[digit] >= 2 ? 1u : 0u);
        }
        table[x] = z;
      }
      break;
    }
  }
}

HashFunction HashFamily::member(std::uint64_t index) const {
  std::vector<std::uint32_t> t;
  member_table(index, t);
  return HashFunction(range_, std::move(t));
}

HashFunction HashFamily::sample(std::uint64_t seed, std::uint64_t index) const {
  std::mt19937_64 rng = derive_rng(seed, index);
  const auto count = size();
  if (count) {
    std::uniform_int_distribution<std::uint64_t> pick(0, *count - 1);
    return member(pick(rng));
  }
  // Too many members to index: draw the table entries independently.
  std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(range_ - 1));
  std::vector<std::uint32_t> t(domain_);
  for (auto& z : t) z = pick(rng);
  return HashFunction(range_, std::move(t));
}

CollisionCertificate HashFamily::certify_exhaustive() const {
  const std::uint64_t members = *size();
  const std::size_t d = domain_;
  std::vector<std::uint64_t> hits(d * (d - 1) / 2, 0);
  std::vector<std::uint32_t> t;
  for (std::uint64_t m = 0; m < members; ++m) {
    member_table(m, t);
    std::size_t k = 0;
    for (std::size_t x = 0; x < d; ++x) {
      for (std::size_t y = x + 1; y < d; ++y, ++k) hits[k] += t[x] == t[y];
    }
  }
  CollisionCertificate c;
  c.method = "exhaustive";
  c.denominator = members;
  std::size_t k = 0;
  for (std::size_t x = 0; x < d; ++x) {
    for (std::size_t y = x + 1; y < d; ++y, ++k) {
      if (hits[k] > c.numerator) {
        c.numerator = hits[k];
        c.worst_x = x;
        c.worst_y = y;
      }
    }
  }
  return c;
}

CollisionCertificate HashFamily::certify(std::uint64_t work_budget) const {
  CollisionCertificate c;
  const auto members = size();
  const double pairs = 0.5 * static_cast<double>(domain_) * static_cast<double>(domain_ - 1);
  if (domain_ < 2) {
    c.method = "trivial";
    c.denominator = 1;
  } else if (members && static_cast<double>(*members) * (pairs + domain_) <= static_cast<double>(work_budget)) {
    c = certify_exhaustive();
  } else if (kind_ == FamilyKind::kAllFunctions) {
    // Tables agreeing at x and y: |Z|^{d−1} of |Z|^d, for every pair.
    c.method = "closed_form";
    c.numerator = 1;
    c.denominator = range_;
    c.worst_x = 0;
    c.worst_y = 1;
  } else if (kind_ == FamilyKind::kAffinePrime) {
    // Shifting b maps the pair (x, x + δ) to (0, δ), so pair classes are
    // indexed by δ ∈ [1, domain − 1]; each class is counted over all (a, b).
    c.method = "pair_classes";
    c.denominator = prime_ * (prime_ - 1);
    for (std::uint64_t delta = 1; delta < domain_; ++delta) {
      std::uint64_t hits = 0;
      for (std::uint64_t a = 1; a < prime_; ++a) {
        for (std::uint64_t b = 0; b < prime_; ++b) {
          hits += (b % range_) == (((a * delta + b) % prime_) % range_);
        }
      }
      if (hits > c.numerator) {
        c.numerator = hits;
        c.worst_x = 0;
        c.worst_y = delta;
      }
    }
  } else {
    Fail(ErrorCode::kBudgetExceeded, "collision certification exceeds the work budget");
  }
  c.max_collision = static_cast<double>(c.numerator) / static_cast<double>(c.denominator);
  c.bound = 1.0 / static_cast<double>(range_);
  // n·|Z| ≤ |F| compared in integers.
  c.two_universal = c.numerator * range_ <= c.denominator;
  return c;
}

}  // namespace qpa
