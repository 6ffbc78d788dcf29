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

// End-to-end acceptance run: one PASS/FAIL line per criterion.

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qpa/cq_state.hpp"
#include "qpa/exponents.hpp"
#include "qpa/hashing.hpp"
#include "qpa/measures.hpp"
#include "qpa/random.hpp"
#include "qpa/report.hpp"
#include "qpa/smoothing.hpp"
#include "qpa/suites.hpp"

using namespace qpa;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Tally {
  bool ok = true;
  std::size_t checks = 0;
  std::size_t failures = 0;
  double worst = kInf;
  std::string first_failure;

  void check(bool cond, const std::string& what) {
    ++checks;
    if (!cond) {
      ++failures;
      ok = false;
      if (first_failure.empty()) first_failure = what;
    }
  }
  void slack(double s, double tol, const std::string& what) {
    worst = std::min(worst, s);
    check(s >= -tol, what);
  }
  std::string summary() const {
    std::ostringstream os;
    os << checks << " checks, " << failures << " failures";
    if (std::isfinite(worst)) os << ", worst slack " << report::format_number(worst, 4);
    if (!first_failure.empty()) os << ", first failure: " << first_failure;
    return os.str();
  }
};

std::vector<CQState> random_states(std::uint64_t seed, int count) {
  std::mt19937_64 rng = derive_rng(seed, 0);
  std::vector<CQState> out;
  for (int i = 0; i < count; ++i) {
    const std::size_t xs = 2 + i % 2;
    const std::size_t de = 1 + (i / 2) % 3;
    out.push_back(de == 1 ? CQState::Classical(random_probabilities(xs, rng)) : random_cq(xs, de, rng));
  }
  return out;
}

Outcome smoothing_sandwich() {
  const StateDescriptor p(HermitianOperator::Diagonal({0.5, 0.5}));
  const HermitianOperator q = HermitianOperator::Diagonal({0.25, 0.75});
  const double r = 0.5 * (relative_entropy(p, q).value + d_max(p, q).value);
  const double e = smoothing_exponent(p, q, r).value;
  Tally t;
  for (int n = 1; n <= 12; ++n) {
    const SmoothingCertificate c = iid_smoothing_certificate(p, q, r, n);
    const std::string tag = "n=" + std::to_string(n);
    t.check(c.exact.has_value(), tag + " exact missing");
    if (!c.exact) continue;
    t.slack(*c.exact - c.lower, 1e-9, tag + " converse");
    t.slack(c.upper - *c.exact, 1e-9, tag + " achievability");
    if (n >= 8) {
      const double lo = -std::log2(c.upper) / n;
      const double hi = c.lower > 0.0 ? -std::log2(c.lower) / n : kInf;
      t.check(lo <= e + 1e-12 && e <= hi, tag + " bracket");
    }
  }
  return {t.ok, t.summary() + ", exponent " + report::format_number(e, 6)};
}

double grid_argmax(const std::vector<double>& s, const std::vector<double>& h, double rate, double* value) {
  double best = 0.0, arg = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double v = s[i] * (h[i] - rate);
    if (v > best) best = v, arg = s[i];
  }
  *value = best;
  return arg;
}

Outcome regime_map() {
  const auto states = random_states(2024, 20);
  Tally t;
  for (std::size_t k = 0; k < states.size(); ++k) {
    const CQState& cq = states[k];
    const ConditionalRenyiProfile prof(cq);
    const double h = prof.entropy(), hmin = prof.min_entropy();
    const double rc = r_hat(prof, 1.0);
    // s grid: fine up to 4, coarse to 64
    std::vector<double> sg, hg;
    for (double s = 1e-4; s <= 4.0; s += 1e-4) sg.push_back(s);
    for (double s = 4.01; s <= 64.0; s += 0.01) sg.push_back(s);
    for (double s : sg) hg.push_back(prof.h_alpha(1.0 + s));
    std::vector<double> rates = {h, h - 1e-10, hmin, hmin + 1e-10, rc, h + 0.1};
    for (int i = 0; i <= 24; ++i) rates.push_back((h + 0.3) * i / 24.0);
    for (double rate : rates) {
      const ExponentValue v = pa_upper_exponent(prof, rc, rate);
      const std::string tag = "state " + std::to_string(k) + " R=" + report::format_number(rate, 8);
      const bool zero = v.value == 0.0;
      const bool inf = v.value == kInf;
      const bool interior = v.maximizer_s && *v.maximizer_s > 0.0 && *v.maximizer_s <= 1.0 && !inf;
      t.check(zero == (rate >= h - 1e-9), tag + " zero case");
      t.check(inf == (rate <= hmin + 1e-9), tag + " infinite case");
      t.check(interior == (rate >= rc && rate < h - 1e-9), tag + " interior case");
      if (!inf) {
        double gv = 0.0;
        const double arg = grid_argmax(sg, hg, rate, &gv);
        t.slack(1e-6 * (1.0 + gv) - std::abs(v.value - gv), 0.0, tag + " grid value");
        if (!zero && gv > 1e-9) {
          // the grid maximizer falls on the same side of s = 1
          if (rate > rc + 1e-6) t.check(arg <= 1.0 + 1e-3, tag + " grid maximizer");
          if (rate < rc - 1e-6) t.check(arg >= 1.0 - 1e-3, tag + " grid maximizer");
        }
      }
    }
  }
  return {t.ok, t.summary()};
}

Outcome high_rate_matching() {
  const auto states = random_states(2025, 20);
  Tally t;
  std::mt19937_64 rng = derive_rng(2025, 1);
  for (std::size_t k = 0; k < states.size(); ++k) {
    const ConditionalRenyiProfile prof(states[k]);
    const double rc = r_hat(prof, 1.0);
    std::uniform_real_distribution<double> u(rc, prof.entropy() + 0.2);
    for (int i = 0; i < 50; ++i) {
      const double rate = i == 0 ? rc : u(rng);
      const double up = pa_upper_exponent(prof, rc, rate).value;
      const double lo = pa_lower_exponent(prof, rc, rate).value;
      t.slack(1e-8 - std::abs(up - lo), 0.0, "state " + std::to_string(k) + " R=" + report::format_number(rate, 8));
    }
  }
  return {t.ok, t.summary()};
}

Outcome example1() {
  Tally t;
  std::string mins;
  for (int n = 1; n <= 3; ++n) {
    for (int rb = 1; rb <= n; ++rb) {
      const report::Json r = example1_suite(n, rb);
      t.check(passed(r), "n=" + std::to_string(n) + " bits=" + std::to_string(rb));
      if (rb == 1) {
        const double m = report::to_double(r["min_trace_distance"]);
        if (n == 1) t.check(r["min_trace_distance_exact"] == "1/6", "n=1 minimum is not exactly 1/6");
        if (n == 2) t.check(m >= 1.0 / 18.0, "n=2 minimum below 1/18");
        mins += (mins.empty() ? "" : ", ") + std::string("n=") + std::to_string(n) + " min " +
                r["min_trace_distance_exact"].get<std::string>();
      }
    }
  }
  return {t.ok, t.summary() + "; " + mins};
}

Outcome example2() {
  Tally t;
  const CollisionCertificate c = HashFamily::Example2Permutation(1).certify();
  t.check(c.numerator * 3 == c.denominator && c.denominator == 24 && c.two_universal, "base collision");
  for (int n = 1; n <= 4; ++n) t.check(passed(example2_suite(n)), "n=" + std::to_string(n));
  return {t.ok, t.summary() + ", collision " + std::to_string(c.numerator) + "/" + std::to_string(c.denominator)};
}

Outcome hashing_bounds() {
  SuiteOptions opt;
  const report::Json a = check_positive_part_superadditivity(opt, 200);
  const report::Json b = check_hashed_renyi_bounds(opt);
  std::ostringstream os;
  os << "superadditivity " << a["checks"] << " checks, hashed bounds " << b["checks"] << " checks, worst slack "
     << report::format_number(std::min(report::to_double(a["worst_slack"]), report::to_double(b["worst_slack"])), 4);
  return {passed(a) && passed(b), os.str()};
}

Outcome equivocation_sandwich() {
  const report::Json r = check_equivocation_sandwich({});
  std::ostringstream os;
  os << r["checks"] << " checks, " << r["failures"] << " failures, worst slack "
     << report::format_number(report::to_double(r["worst_slack"]), 4);
  return {passed(r), os.str()};
}
// Random POVM with k outcomes, normalised so the elements sum to identity.
// diagonal operator.
std::vector<Matrix> random_povm(std::size_t dim, std::size_t k, std::mt19937_64& rng) {
  std::vector<Matrix> g;
  Matrix total = Matrix::Zero(dim, dim);
  for (std::size_t i = 0; i < k; ++i) {
    g.push_back(random_psd(dim, rng).matrix());
    total += g.back();
  }
  const Matrix inv_sqrt = mat_power(HermitianOperator(total), -0.5).matrix();
  for (auto& e : g) e = inv_sqrt * e * inv_sqrt;
  return g;
}

HermitianOperator apply_povm(const std::vector<Matrix>& povm, const HermitianOperator& a) {
  std::vector<double> out;
  for (const auto& e : povm) out.push_back(std::max(0.0, (e * a.matrix()).trace().real()));
  return HermitianOperator::Diagonal(out);
}

Outcome divergence_properties() {
  std::mt19937_64 rng = derive_rng(2026, 0);
  Tally t;
  const double alphas[] = {0.5, 0.8, 1.2, 2.0, 5.0, 20.0};
  int limit_violations = 0, first_order = 0;
  auto div = [](const StateDescriptor& r, const HermitianOperator& s, double a) {
    return a == 1.0 ? relative_entropy(r, s).value : sandwiched_renyi(r, s, a).value;
  };
  for (int i = 0; i < 500; ++i) {
    const std::size_t dim = 2 + i % 3;
    const StateDescriptor r(random_density(dim, rng, 1 + i % dim));
    const HermitianOperator s = random_density(dim, rng);
    const StateDescriptor sd(s);
    const std::string tag = "pair " + std::to_string(i);
    if (i < 100) {
      double prev = -kInf;
      for (double a : alphas) {
        const double v = div(r, s, a);
        t.slack(v - prev, 1e-9, tag + " monotone");
        prev = v;
      }
      std::vector<double> lq;
      for (int k = 0; k <= 16; ++k) lq.push_back(log2_q_alpha(r, s, 0.5 + 0.25 * k));
      for (std::size_t k = 1; k + 1 < lq.size(); ++k) t.slack(lq[k + 1] - 2 * lq[k] + lq[k - 1], 1e-7, tag + " convex");
      const auto povm = random_povm(dim, 2 + i % 3, rng);
      const StateDescriptor mr(apply_povm(povm, r.op()));
      const HermitianOperator ms = apply_povm(povm, s);
      for (double a : {0.5, 1.0, 2.0, 5.0}) t.slack(div(r, s, a) - div(mr, ms, a), 1e-9, tag + " data processing");
      // The gap at 1 ± δ is ≈ δ·V/(2 ln 2) with V the divergence variance, which
      // rank-deficient ρ against ill-conditioned σ can push past 1e-3; the
      // limit is checked on full-rank pairs.
      const StateDescriptor full(random_density(dim, rng));
      const double d = relative_entropy(full, s).value;
      const double up = sandwiched_renyi(full, s, 1.0 + 1e-4).value - d;
      const double down = sandwiched_renyi(full, s, 1.0 - 1e-4).value - d;
      t.slack(1e-3 - std::abs(up), 0.0, tag + " alpha limit");
      t.slack(1e-3 - std::abs(down), 0.0, tag + " alpha limit");
      if (std::max(std::abs(up), std::abs(down)) > 1e-3) {
        // diagnose: a pure first-order gap is antisymmetric and shrinks tenfold with δ
        ++limit_violations;
        const double up5 = sandwiched_renyi(full, s, 1.0 + 1e-5).value - d;
        if (std::abs(up + down) <= 1e-6 && std::abs(up / up5 - 10.0) <= 0.1) ++first_order;
      }
    }
    const double td = trace_distance(r, sd);
    const double pd = purified_distance(r, sd);
    t.slack(pd - td, 1e-9, tag + " Fuchs-van de Graaf lower");
    t.slack(std::sqrt(std::max(0.0, 2 * td - td * td)) - pd, 1e-9, tag + " Fuchs-van de Graaf upper");
    t.slack(std::sqrt(std::log(2.0) * relative_entropy(r, s).value) - pd, 1e-9, tag + " purified vs relative");
  }
  std::string note;
  if (limit_violations > 0) {
    note = "; alpha-limit violations " + std::to_string(limit_violations) + ", of which " + std::to_string(first_order) +
           " are the exact first-order variance term";
  }
  return {t.ok, t.summary() + note};
}

struct Run {
  int code;
  std::string out;
};

Run cli(const std::string& args) {
  const std::string cmd = std::string(QPA_CLI) + " " + args + " 2>/dev/null";
  Run r{-1, {}};
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

Outcome determinism() {
  const std::string data = QPA_DATA_DIR;
  const std::vector<std::string> commands = {
      "pa-search " + data + "/example2.json --n 2 --range 2 --measure purified",
      "pa-search " + data + "/bb84_like.json --n 3 --range 4 --measure renyi --s 0.5",
      "--seed 11 pa-family " + data + "/bb84_like.json --n 4 --range 4 --samples 5000 --measure trace",
      "--seed 12 pa-family " + data + "/example2.json --n 3 --family affine --range 4 --samples 3000",
      "--seed 13 suite example2 --n 3",
  };
  Tally t;
  for (const auto& c : commands) {
    const Run base = cli("--threads 1 " + c);
    t.check(base.code == 0 && !base.out.empty(), "exit code for: " + c);
    for (int th : {4, 8}) t.check(cli("--threads " + std::to_string(th) + " " + c).out == base.out, "threads " + std::to_string(th) + ": " + c);
  }
  return {t.ok, t.summary() + " over " + std::to_string(commands.size()) + " commands"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "smoothing sandwich", 10, smoothing_sandwich},
      {2, "four-case regime map", 30, regime_map},
      {3, "high-rate matching", 30, high_rate_matching},
      {4, "biased-bit exact reproduction", 60, example1},
      {5, "quaternary permutation exact reproduction", 30, example2},
      {6, "hashing bound suite", 120, hashing_bounds},
      {7, "Renyi equivocation finite-n sandwich", 120, equivocation_sandwich},
      {8, "divergence property suite", 60, divergence_properties},
      {9, "determinism across thread counts", 300, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.limit_s;
    const bool pass = o.pass && in_time;
    failed += pass ? 0 : 1;
    std::printf("criterion %d %-44s %s  %7.2fs (limit %gs)  %s%s\n", c.id, c.name, pass ? "PASS" : "FAIL", secs,
                c.limit_s, o.detail.c_str(), in_time ? "" : " [over time limit]");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
