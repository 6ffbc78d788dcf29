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

#include "qpa/suites.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <numeric>

#include "qpa/error.hpp"
#include "qpa/measures.hpp"
#include "qpa/parallel.hpp"
#include "qpa/random.hpp"
#include "qpa/smoothing.hpp"

namespace qpa {

using report::Json;
using report::number;

namespace {

// Collects named checks; a check passes when its slack is ≥ −tol.
class Section {
 public:
  Section(std::string name, double tol) : name_(std::move(name)), tol_(tol) {}

  bool check(const std::string& label, double slack, Json detail = Json::object()) {
    ++checks_;
    const bool ok = slack >= -tol_;
    if (slack < worst_) worst_ = slack;
    if (!ok) {
      ++failures_;
      if (failed_.size() < 20) {
        detail["check"] = label;
        detail["slack"] = number(slack);
        failed_.push_back(std::move(detail));
      }
    }
    return ok;
  }

  void record(const std::string& key, Json value) { extra_[key] = std::move(value); }

  Json finish() const {
    Json j;
    j["name"] = name_;
    j["pass"] = failures_ == 0;
    j["checks"] = checks_;
    j["failures"] = failures_;
    j["worst_slack"] = number(checks_ ? worst_ : 0.0);
    j["tolerance"] = tol_;
    for (auto it = extra_.begin(); it != extra_.end(); ++it) j[it.key()] = it.value();
    if (!failed_.empty()) j["failed"] = failed_;
    return j;
  }

 private:
  std::string name_;
  double tol_;
  std::uint64_t checks_ = 0;
  std::uint64_t failures_ = 0;
  double worst_ = kInf;
  Json extra_ = Json::object();
  Json failed_ = Json::array();
};

std::uint64_t ipow(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

HermitianOperator example2_rho_e() {
  Matrix m(2, 2);
  m << 0.7, std::complex<double>(0.2, 0.1), std::complex<double>(0.2, -0.1), 0.3;
  return HermitianOperator(m);
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

bool passed(const Json& j) { return j.contains("pass") && j["pass"].get<bool>(); }

report::Json example1_suite(int n, int range_bits, const SuiteOptions& opt) {
  if (n < 1 || n > 4) Fail(ErrorCode::kInvalidArgument, "example1: n must lie in [1, 4]");
  if (range_bits < 1 || range_bits > n) {
    Fail(ErrorCode::kInvalidArgument, "example1: range bits must lie in [1, n]");
  }
  const std::size_t domain = std::size_t{1} << n;
  const std::uint64_t m = std::uint64_t{1} << range_bits;
  const double functions = std::pow(static_cast<double>(m), static_cast<double>(domain));
  if (functions > static_cast<double>(opt.budget)) {
    Fail(ErrorCode::kBudgetExceeded, "example1: " + std::to_string(m) + "^" + std::to_string(domain) +
                                         " functions exceed the enumeration budget");
  }
  const std::uint64_t count = ipow(m, static_cast<int>(domain));
  const std::int64_t three_n = static_cast<std::int64_t>(ipow(3, n));

  // P(x) = k_x / 3^n with k_x = 2^{#ones}; 2·3^n·|Z|·d(f) = Σ_z |Z·k_z − 3^n|.
  std::vector<std::int64_t> k(domain);
  for (std::size_t x = 0; x < domain; ++x) k[x] = std::int64_t{1} << std::popcount(x);
  struct Scan {
    std::int64_t min_num = std::numeric_limits<std::int64_t>::max();
    std::uint64_t min_index = 0;
    std::uint64_t violations = 0;
  };
  const std::uint64_t chunks = std::min<std::uint64_t>(count, 256);
  const std::uint64_t per = (count + chunks - 1) / chunks;
  std::vector<Scan> scans(chunks);
  const HashFamily all = HashFamily::AllFunctions(domain, m);
  parallel_for(chunks, opt.threads, [&](std::size_t c) {
    const std::uint64_t begin = c * per;
    const std::uint64_t end = std::min(count, begin + per);
    if (begin >= end) return;
    std::vector<std::uint32_t> table;
    all.member_table(begin, table);
    std::vector<std::int64_t> kz(m);
    for (std::uint64_t i = begin; i < end; ++i) {
      std::fill(kz.begin(), kz.end(), 0);
      for (std::size_t x = 0; x < domain; ++x) kz[table[x]] += k[x];
      std::int64_t num = 0;
      for (std::uint64_t z = 0; z < m; ++z) num += std::abs(static_cast<std::int64_t>(m) * kz[z] - three_n);
      if (num < static_cast<std::int64_t>(m)) ++scans[c].violations;
      if (num < scans[c].min_num) scans[c].min_num = num, scans[c].min_index = i;
      for (std::size_t q = table.size(); q-- > 0;) {
        if (++table[q] < m) break;
        table[q] = 0;
      }
    }
  });
  Scan total;
  for (const auto& s : scans) {
    total.violations += s.violations;
    if (s.min_num < total.min_num) total.min_num = s.min_num, total.min_index = s.min_index;
  }
  const std::int64_t den = 2 * three_n * static_cast<std::int64_t>(m);
  const std::int64_t g = std::gcd(total.min_num, den);
  const double bound = 1.0 / (2.0 * static_cast<double>(three_n));

  Section sec("example1", opt.slack);
  sec.record("n", n);
  sec.record("range_size", m);
  sec.record("functions", count);
  sec.record("min_trace_distance", number(static_cast<double>(total.min_num) / static_cast<double>(den)));
  sec.record("min_trace_distance_exact",
             std::to_string(total.min_num / g) + "/" + std::to_string(den / g));
  sec.record("min_trace_hash", all.member(total.min_index).describe());
  sec.record("bound", number(bound));
  sec.record("bound_violations", total.violations);
  // Integer form of d(f) ≥ 1/(2·3^n) for every f.
  sec.check("trace_distance_bound_all_functions",
            total.violations == 0 ? static_cast<double>(total.min_num - static_cast<std::int64_t>(m)) /
                                        static_cast<double>(den)
                                  : -1.0);
  if (n == 1 && m == 2) {
    sec.check("n1_minimum_equals_one_sixth", total.min_num * 6 == den ? 0.0 : -1.0);
  }

  const CQState source = CQState::Classical({1.0 / 3.0, 2.0 / 3.0}).tensor_power(n);
  Json minima;
  for (Measure meas : {Measure::kTraceDistance, Measure::kPurifiedDistance, Measure::kRelativeEntropy}) {
    const InsecurityReport r = min_insecurity_exhaustive(source, m, {meas, 1.0}, opt.threads, opt.budget);
    minima[measure_name(meas)] = report::to_json(r);
    if (meas == Measure::kTraceDistance) {
      sec.check("float_minimum_matches_integer_scan",
                1e-12 - std::abs(r.value - static_cast<double>(total.min_num) / static_cast<double>(den)));
    }
    if (meas == Measure::kPurifiedDistance) {
      // P ≥ d ≥ 1/(2·3^n): −(1/n) log P ≤ log 3 + 1/n.
      const double sample = -std::log2(r.value) / n;
      const double cap = std::log2(3.0) + 1.0 / n;
      sec.record("exponent_sample_P", number(sample));
      sec.record("exponent_cap_P", number(cap));
      sec.check("purified_exponent_sample_below_cap", cap - sample);
    }
    if (meas == Measure::kRelativeEntropy) {
      // Pinsker in bits, D ≥ (2/ln 2)d²: −(1/n) log D ≤ log 9 + (1/n) log(2 ln 2).
      const double sample = -std::log2(r.value) / n;
      const double cap = std::log2(9.0) + std::log2(2.0 * std::log(2.0)) / n;
      sec.record("exponent_sample_D", number(sample));
      sec.record("exponent_cap_D", number(cap));
      sec.check("relative_entropy_exponent_sample_below_cap", cap - sample);
      sec.check("relative_entropy_identity", opt.slack - r.identity_gap);
    }
  }
  sec.record("minima", std::move(minima));
  Json out = sec.finish();
  out["suite"] = "example1";
  return out;
}

report::Json example2_suite(int n, const SuiteOptions& opt) {
  if (n < 1 || n > 4) Fail(ErrorCode::kInvalidArgument, "example2: n must lie in [1, 4]");
  Section sec("example2", 1e-12);
  sec.record("n", n);

  const CollisionCertificate base = HashFamily::Example2Permutation(1).certify();
  sec.record("base_collision", report::to_json(base));
  sec.check("base_collision_is_one_third", base.numerator * 3 == base.denominator ? 0.0 : -1.0);
  sec.check("base_family_two_universal", base.two_universal ? 0.0 : -1.0);
  const HashFamily family = HashFamily::Example2Permutation(n);
  // The n-fold family keeps collision 1/3 at pairs differing in one
  // coordinate, which exceeds 1/2^n for n ≥ 2; reported, not asserted.
  sec.record("blocklength_collision", report::to_json(family.certify()));

  const CQState source = CQState::Product({0.25, 0.25, 0.25, 0.25}, example2_rho_e()).tensor_power(n);
  const std::vector<MeasureSpec> measures = {{Measure::kTraceDistance, 1.0},
                                             {Measure::kPurifiedDistance, 1.0},
                                             {Measure::kRelativeEntropy, 1.0},
                                             {Measure::kRenyi, 0.5},
                                             {Measure::kRenyi, 1.0}};
  std::vector<InsecurityEvaluator> evals;
  for (const auto& ms : measures) evals.emplace_back(source, family.range_size(), ms);
  const std::size_t reps = static_cast<std::size_t>(std::max(0, opt.realizations));
  std::vector<double> worst(reps, 0.0);
  parallel_for(reps, opt.threads, [&](std::size_t i) {
    const HashFunction f = family.sample(opt.seed, i);
    for (const auto& e : evals) worst[i] = std::max(worst[i], e.evaluate(f.table));
  });
  double max_insecurity = 0.0;
  for (std::size_t i = 0; i < reps; ++i) {
    max_insecurity = std::max(max_insecurity, worst[i]);
    sec.check("realization_" + std::to_string(i) + "_uniform", -worst[i], Json{{"value", number(worst[i])}});
  }
  sec.record("realizations", reps);
  sec.record("max_insecurity", number(max_insecurity));

  Json expectations;
  for (const auto& ms : measures) {
    const FamilyExpectation e = family_expectation(family, source, ms, {true, 0, opt.seed}, opt.threads);
    std::string key = measure_name(ms.measure);
    if (ms.measure == Measure::kRenyi) key += "_" + report::format_number(ms.s);
    Json ej = report::to_json(e);
    // A zero average insecurity at every n makes the exponent +∞.
    ej["exponent"] = number(e.mean <= 1e-12 ? kInf : -std::log2(e.mean) / n);
    expectations[key] = std::move(ej);
    sec.check("expectation_zero_" + key, -e.mean);
  }
  sec.record("expectations", std::move(expectations));
  Json out = sec.finish();
  out["suite"] = "example2";
  return out;
}

report::Json check_relative_entropy_identity(const SuiteOptions& opt) {
  std::mt19937_64 rng = derive_rng(opt.seed, 101);
  Section sec("relative_entropy_identity", opt.slack);
  for (int i = 0; i < 20; ++i) {
    const std::size_t xs = 2 + i % 3;
    const std::size_t de = 1 + i % 3;
    const std::size_t m = 2 + i % 2;
    const CQState src = random_cq(xs, de, rng);
    std::vector<std::uint32_t> t(xs);
    for (auto& z : t) z = static_cast<std::uint32_t>(rng() % m);
    const InsecurityReport r = insecurity(apply_hash(src, HashFunction(m, t)), {Measure::kRelativeEntropy, 1.0});
    sec.check("instance_" + std::to_string(i), opt.slack - r.identity_gap);
  }
  return sec.finish();
}

report::Json check_equivocation_sandwich(const SuiteOptions& opt) {
  std::mt19937_64 rng = derive_rng(opt.seed, 102);
  Section sec("equivocation_sandwich", opt.slack);
  Json samples = Json::array();
  std::vector<CQState> sources = {random_cq(2, 2, rng), random_cq(2, 2, rng),
                                  CQState::Classical(random_probabilities(2, rng))};
  for (std::size_t k = 0; k < sources.size(); ++k) {
    const CQState& src = sources[k];
    const HermitianOperator rho_e = src.marginal_e();
    for (int n = 1; n <= 3; ++n) {
      const CQState src_n = src.tensor_power(n);
      for (std::size_t m : {std::size_t{2}, std::size_t{4}}) {
        if (n == 3 && m == 4 && k > 0) continue;  // one large instance keeps the suite short
        for (double s : {0.5, 1.0}) {
          const double h = renyi_conditional_entropy(src, 1.0 + s);
          const double log_m = std::log2(static_cast<double>(m));
          const double min_d = min_insecurity_exhaustive(src_n, m, {Measure::kRenyi, s}, opt.threads, opt.budget).value;
          const double converse = std::max(0.0, log_m - n * h);
          const double log_v = std::log2(static_cast<double>(distinct_eigenvalue_count_iid(rho_e, n)));
          // (1/s) log(1 + M^s Q^n) with Q = 2^{−sH}, in log-sum form.
          const double upper = (block::log2_sum_exp2({0.0, s * log_m - n * s * h}) + log_v) / s;
          const double rate = log_m / n;
          const double eq = std::max(0.0, rate - h);
          const std::string tag = "src" + std::to_string(k) + "_n" + std::to_string(n) + "_M" +
                                  std::to_string(m) + "_s" + report::format_number(s);
          Json d{{"n", n}, {"M", m}, {"s", s}, {"converse", number(converse)},
                 {"min_renyi", number(min_d)}, {"upper", number(upper)}};
          sec.check(tag + "_converse", min_d - converse, d);
          sec.check(tag + "_achievability", upper - min_d, d);
          sec.check(tag + "_normalized_bracket", std::min(eq - converse / n, upper / n - eq), d);
          d["rate"] = number(rate);
          d["equivocation"] = number(eq);
          samples.push_back(std::move(d));
        }
      }
    }
  }
  sec.record("samples", std::move(samples));
  return sec.finish();
}

report::Json check_positive_part_bound(const SuiteOptions& opt) {
  std::mt19937_64 rng = derive_rng(opt.seed, 103);
  Section sec("positive_part_hash_independent", opt.slack);
  for (int i = 0; i < 3; ++i) {
    const CQState src = random_cq(2, 2, rng);
    for (int n = 1; n <= 2; ++n) {
      const CQState src_n = src.tensor_power(n);
      for (std::size_t m : {std::size_t{2}, std::size_t{3}}) {
        const HashFamily all = HashFamily::AllFunctions(src_n.size(), m);
        for (double t : {0.5, 1.0, 2.0}) {
          const double c = t / static_cast<double>(m);
          const double rhs = pinched_positive_part(src_n, c);
          for (std::uint64_t f = 0; f < *all.size(); ++f) {
            const double lhs = hashed_positive_part(src_n, all.member(f), c);
            sec.check("src" + std::to_string(i) + "_n" + std::to_string(n) + "_f" + std::to_string(f),
                      lhs - rhs, Json{{"lhs", lhs}, {"rhs", rhs}, {"t", t}, {"M", m}});
          }
        }
      }
    }
  }
  return sec.finish();
}

report::Json check_min_entropy_insecurity(const SuiteOptions& opt) {
  std::mt19937_64 rng = derive_rng(opt.seed, 104);
  Section sec("min_entropy_insecurity", opt.slack);
  for (int i = 0; i < 6; ++i) {
    const std::size_t xs = 3 + i % 2;
    const CQState src = i < 3 ? CQState::Classical(random_probabilities(xs, rng)) : random_commuting_cq(xs, 2, rng);
    for (std::size_t m : {std::size_t{2}, std::size_t{3}}) {
      // ε* = ε(ρ_XE ‖ 1 ⊗ ρ_E, −log|Z|), so log|Z| meets H^{ε*}_min at the boundary.
      const double eps = smoothing_epsilon(src, -std::log2(static_cast<double>(m)));
      const HashFamily all = HashFamily::AllFunctions(xs, m);
      const InsecurityEvaluator eval(src, m, {Measure::kPurifiedDistance, 1.0});
      std::vector<std::uint32_t> t;
      for (std::uint64_t f = 0; f < *all.size(); ++f) {
        all.member_table(f, t);
        const double p = eval.evaluate(t);
        sec.check("src" + std::to_string(i) + "_M" + std::to_string(m) + "_f" + std::to_string(f), p - eps,
                  Json{{"insecurity", p}, {"epsilon", eps}});
      }
    }
  }
  return sec.finish();
}

report::Json check_min_entropy_monotone(const SuiteOptions& opt) {
  std::mt19937_64 rng = derive_rng(opt.seed, 105);
  const double resolution = 1e-7;
  Section sec("min_entropy_monotone_under_functions", 2.0 * resolution);
  for (int i = 0; i < 4; ++i) {
    const std::size_t xs = 3 + i % 2;
    const CQState src = i < 2 ? CQState::Classical(random_probabilities(xs, rng)) : random_commuting_cq(xs, 2, rng);
    for (double eps : {0.01, 0.1, 0.3}) {
      const double hx = smooth_min_entropy(src, eps, resolution);
      for (std::size_t m : {std::size_t{2}, std::size_t{3}}) {
        const HashFamily all = HashFamily::AllFunctions(xs, m);
        for (std::uint64_t f = 0; f < *all.size(); ++f) {
          const double hz = smooth_min_entropy(apply_hash(src, all.member(f)), eps, resolution);
          sec.check("src" + std::to_string(i) + "_eps" + report::format_number(eps) + "_M" +
                        std::to_string(m) + "_f" + std::to_string(f),
                    hx - hz, Json{{"H_X", hx}, {"H_Z", hz}});
        }
      }
    }
  }
  return sec.finish();
}

report::Json check_positive_part_superadditivity(const SuiteOptions& opt, int instances) {
  std::mt19937_64 rng = derive_rng(opt.seed, 106);
  Section sec("positive_part_superadditivity", opt.slack);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (int i = 0; i < instances; ++i) {
    const std::size_t d = 2 + i % 3;
    const std::size_t k = 1 + i % 5;
    std::vector<HermitianOperator> ops;
    for (std::size_t j = 0; j < k; ++j) ops.push_back((u(rng) / d) * random_density(d, rng));
    const double lambda = 0.5 * u(rng) / d;
    const BoundCheck c = positive_part_superadditivity_check(ops, lambda);
    sec.check("instance_" + std::to_string(i), c.slack, report::to_json(c));
  }
  return sec.finish();
}

report::Json check_hashed_renyi_bounds(const SuiteOptions& opt) {
  std::mt19937_64 rng = derive_rng(opt.seed, 107);
  Section sec("hashed_renyi_bounds", opt.slack);
  for (std::size_t xs = 2; xs <= 4; ++xs) {
    for (std::size_t m = 2; m <= 3; ++m) {
      for (std::size_t de = 1; de <= 3; ++de) {
        const CQState src = de == 1 ? CQState::Classical(random_probabilities(xs, rng)) : random_cq(xs, de, rng);
        const HashFamily all = HashFamily::AllFunctions(xs, m);
        for (double s : {0.25, 0.5, 1.0}) {
          const std::string tag = "X" + std::to_string(xs) + "_Z" + std::to_string(m) + "_E" +
                                  std::to_string(de) + "_s" + report::format_number(s);
          const BoundCheck c3 = hashed_collision_check(src, all, s, opt.threads);
          const BoundCheck c4 = hashed_renyi_check(src, all, s, opt.threads);
          sec.check(tag + "_collision", c3.slack, report::to_json(c3));
          sec.check(tag + "_renyi", c4.slack, report::to_json(c4));
        }
      }
    }
  }
  return sec.finish();
}

report::Json check_collision_certificates(const SuiteOptions& opt) {
  Section sec("collision_certificates", 1e-12);
  (void)opt;
  for (auto [d, m] : {std::pair{3, 2}, std::pair{4, 3}, std::pair{5, 2}}) {
    const CollisionCertificate c = HashFamily::AllFunctions(d, m).certify();
    sec.check("all_functions_" + std::to_string(d) + "_" + std::to_string(m) + "_exact",
              c.numerator * m == c.denominator ? 0.0 : -1.0, report::to_json(c));
  }
  for (std::uint64_t p : {5u, 7u, 31u, 257u}) {
    for (std::size_t m : {std::size_t{2}, std::size_t{3}, std::size_t{4}}) {
      const HashFamily fam = HashFamily::AffinePrime(p, m, p);
      const CollisionCertificate c = fam.certify();
      sec.check("affine_p" + std::to_string(p) + "_M" + std::to_string(m), c.bound - c.max_collision,
                report::to_json(c));
      if (p <= 31) {
        // Pair-class counting must agree with the exhaustive count.
        const CollisionCertificate classes = fam.certify(0);
        sec.check("affine_p" + std::to_string(p) + "_M" + std::to_string(m) + "_methods_agree",
                  classes.numerator == c.numerator && classes.denominator == c.denominator ? 0.0 : -1.0);
      }
    }
  }
  const CollisionCertificate e2 = HashFamily::Example2Permutation(1).certify();
  sec.check("example2_base_one_third", e2.numerator * 3 == e2.denominator ? 0.0 : -1.0, report::to_json(e2));
  Json nfold = Json::array();
  for (int n = 2; n <= 3; ++n) nfold.push_back(report::to_json(HashFamily::Example2Permutation(n).certify()));
  sec.record("example2_blocklength_certificates", std::move(nfold));
  return sec.finish();
}

report::Json check_search_determinism(const SuiteOptions& opt) {
  std::mt19937_64 rng = derive_rng(opt.seed, 108);
  Section sec("search_determinism", 0.0);
  const CQState src = random_cq(2, 2, rng).tensor_power(2);
  const InsecurityReport ref = min_insecurity_exhaustive(src, 3, {Measure::kPurifiedDistance, 1.0}, 1);
  const HashFamily fam = HashFamily::AllFunctions(src.size(), 3);
  const FamilyExpectation mc_ref = family_expectation(fam, src, {Measure::kRelativeEntropy, 1.0}, {false, 500, opt.seed}, 1);
  for (int threads : {4, 8}) {
    const InsecurityReport r = min_insecurity_exhaustive(src, 3, {Measure::kPurifiedDistance, 1.0}, threads);
    sec.check("exhaustive_threads_" + std::to_string(threads),
              same_bits(r.value, ref.value) && r.index == ref.index ? 0.0 : -1.0);
    const FamilyExpectation mc = family_expectation(fam, src, {Measure::kRelativeEntropy, 1.0}, {false, 500, opt.seed}, threads);
    sec.check("monte_carlo_threads_" + std::to_string(threads),
              same_bits(mc.mean, mc_ref.mean) && same_bits(mc.std_error, mc_ref.std_error) ? 0.0 : -1.0);
  }
  return sec.finish();
}

report::Json properties_suite(const SuiteOptions& opt) {
  Json sections = Json::array();
  bool all = true;
  for (auto* fn : {&check_relative_entropy_identity, &check_equivocation_sandwich, &check_positive_part_bound,
                   &check_min_entropy_insecurity, &check_min_entropy_monotone, &check_hashed_renyi_bounds,
                   &check_collision_certificates, &check_search_determinism}) {
    Json s = fn(opt);
    all = all && passed(s);
    sections.push_back(std::move(s));
  }
  Json superadd = check_positive_part_superadditivity(opt);
  all = all && passed(superadd);
  sections.push_back(std::move(superadd));
  return Json{{"suite", "properties"}, {"pass", all}, {"sections", std::move(sections)}};
}

}  // namespace qpa
