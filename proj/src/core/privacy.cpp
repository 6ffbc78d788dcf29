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

#include "qpa/privacy.hpp"

#include <algorithm>
#include <cmath>

#include "qpa/error.hpp"
#include "qpa/measures.hpp"
#include "qpa/parallel.hpp"

namespace qpa {

namespace {

double entropy_bits(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  const double cut = ev.size() ? kSupportCut * std::max(0.0, ev(ev.size() - 1)) : 0.0;
  double h = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > cut) h -= ev(i) * std::log2(ev(i));
  }
  return h;
}

void check_measure(const MeasureSpec& m) {
  if (m.measure == Measure::kRenyi && !(m.s > 0.0 && m.s <= 1.0)) {
    Fail(ErrorCode::kInvalidArgument, "Renyi insecurity: s must lie in (0,1]");
  }
}

// Fixed-size chunks keep floating-point summation order independent of the
// number of workers.
constexpr std::uint64_t kSumChunk = 1024;

struct ChunkSums {
  double sum = 0.0;
  double sum_sq = 0.0;
  double max = -kInf;
};

template <class ValueAt>
ChunkSums chunked_sums(std::uint64_t count, int threads, ValueAt&& value_at) {
  const std::uint64_t chunks = (count + kSumChunk - 1) / kSumChunk;
  std::vector<ChunkSums> partial(chunks);
  parallel_for(chunks, threads, [&](std::size_t c) {
    ChunkSums& p = partial[c];
    const std::uint64_t end = std::min<std::uint64_t>(count, (c + 1) * kSumChunk);
    for (std::uint64_t i = c * kSumChunk; i < end; ++i) {
      const double v = value_at(i);
      p.sum += v;
      p.sum_sq += v * v;
      p.max = std::max(p.max, v);
    }
  });
  ChunkSums total;
  for (const auto& p : partial) {
    total.sum += p.sum;
    total.sum_sq += p.sum_sq;
    total.max = std::max(total.max, p.max);
  }
  return total;
}

}  // namespace

const char* measure_name(Measure m) {
  switch (m) {
    case Measure::kTraceDistance: return "trace";
    case Measure::kPurifiedDistance: return "purified";
    case Measure::kRelativeEntropy: return "relative";
    case Measure::kRenyi: return "renyi";
  }
  return "unknown";
}

Measure parse_measure(const std::string& name) {
  if (name == "trace") return Measure::kTraceDistance;
  if (name == "purified") return Measure::kPurifiedDistance;
  if (name == "relative") return Measure::kRelativeEntropy;
  if (name == "renyi") return Measure::kRenyi;
  Fail(ErrorCode::kInvalidArgument, "unknown measure '" + name + "' (trace, purified, relative, renyi)");
}

CQState apply_hash(const CQState& source, const HashFunction& f) {
  if (f.domain_size != source.size()) {
    Fail(ErrorCode::kDimensionMismatch, "apply_hash: hash domain " + std::to_string(f.domain_size) +
                                            " does not match " + std::to_string(source.size()) +
                                            " source symbols");
  }
  const std::size_t d = source.dim_e();
  std::vector<Matrix> sums(f.range_size, Matrix::Zero(d, d));
  std::vector<double> probs(f.range_size, 0.0);
  for (std::size_t x = 0; x < source.size(); ++x) {
    sums[f.table[x]] += source.probs()[x] * source.conditionals()[x].matrix();
    probs[f.table[x]] += source.probs()[x];
  }
  const HermitianOperator rho_e = source.marginal_e();
  std::vector<HermitianOperator> conditionals;
  conditionals.reserve(f.range_size);
  for (std::size_t z = 0; z < f.range_size; ++z) {
    conditionals.push_back(probs[z] > 0.0 ? HermitianOperator(sums[z] / probs[z]) : rho_e);
  }
  return CQState(std::move(probs), std::move(conditionals));
}

InsecurityEvaluator::InsecurityEvaluator(const CQState& source, std::size_t range_size,
                                         MeasureSpec m)
    : domain_(source.size()),
      range_(range_size),
      m_(m),
      classical_(source.is_classical()),
      rho_e_(source.marginal_e()),
      ideal_block_((1.0 / static_cast<double>(range_size)) * rho_e_),
      sigma_gamma_(HermitianOperator::Identity(source.dim_e())) {
  if (range_size < 1) Fail(ErrorCode::kInvalidArgument, "insecurity: empty range");
  check_measure(m);
  if (classical_) {
    scalars_ = source.probs();
  } else {
    blocks_.reserve(source.size());
    for (std::size_t x = 0; x < source.size(); ++x) blocks_.push_back(source.block(x).matrix());
    rho_e_dec_ = eig(rho_e_);
    if (m.measure == Measure::kRenyi) {
      sigma_gamma_ = mat_power(rho_e_dec_, -m.s / (2.0 * (1.0 + m.s)));
    }
  }
}

void InsecurityEvaluator::hashed_blocks(const std::vector<std::uint32_t>& table,
                                        std::vector<Matrix>& out) const {
  const Eigen::Index d = rho_e_.matrix().rows();
  out.assign(range_, Matrix::Zero(d, d));
  for (std::size_t x = 0; x < blocks_.size(); ++x) out[table[x]] += blocks_[x];
}

void InsecurityEvaluator::hashed_scalars(const std::vector<std::uint32_t>& table,
                                         std::vector<double>& out) const {
  out.assign(range_, 0.0);
  for (std::size_t x = 0; x < scalars_.size(); ++x) out[table[x]] += scalars_[x];
}

double InsecurityEvaluator::evaluate(const std::vector<std::uint32_t>& table) const {
  if (table.size() != domain_size()) Fail(ErrorCode::kDimensionMismatch, "insecurity: table size mismatch");
  const double inv_m = 1.0 / static_cast<double>(range_);
  const double log_m = std::log2(static_cast<double>(range_));
  double v = 0.0;
  if (classical_) {
    std::vector<double> a;
    hashed_scalars(table, a);
    switch (m_.measure) {
      case Measure::kTraceDistance:
        for (double x : a) v += std::abs(x - inv_m);
        v *= 0.5;
        break;
      case Measure::kPurifiedDistance: {
        double gap = 0.0;
        const double r = std::sqrt(inv_m);
        for (double x : a) gap += (std::sqrt(x) - r) * (std::sqrt(x) - r);
        gap = std::min(1.0, 0.5 * gap);
        v = std::sqrt(gap * (2.0 - gap));
        break;
      }
      case Measure::kRelativeEntropy:
        for (double x : a) {
          if (x > 0.0) v += x * (std::log2(x) + log_m);
        }
        break;
      case Measure::kRenyi: {
        std::vector<double> terms;
        for (double x : a) {
          if (x > 0.0) terms.push_back((1.0 + m_.s) * std::log2(x));
        }
        v = log_m + block::log2_sum_exp2(terms) / m_.s;
        break;
      }
    }
    return std::max(0.0, v);
  }

  std::vector<Matrix> a;
  hashed_blocks(table, a);
  switch (m_.measure) {
    case Measure::kTraceDistance:
      for (const auto& x : a) v += block::trace_norm(HermitianOperator(x - ideal_block_.matrix()));
      v *= 0.5;
      break;
    case Measure::kPurifiedDistance: {
      double gap = 0.0;
      for (const auto& x : a) gap += block::bures_squared(HermitianOperator(x), ideal_block_);
      gap = std::min(1.0, 0.5 * gap);
      v = std::sqrt(gap * (2.0 - gap));
      break;
    }
    case Measure::kRelativeEntropy: {
      const double cut = kSupportCut * rho_e_dec_.lambda_max();
      const Matrix log_e = rho_e_dec_.apply([&](double x) { return x > cut ? std::log2(x) : 0.0; });
      for (const auto& x : a) {
        v -= entropy_bits(x);
        v -= (x * log_e).trace().real();
      }
      v += log_m;
      break;
    }
    case Measure::kRenyi: {
      std::vector<double> terms;
      for (const auto& x : a) {
        terms.push_back(block::log2_q_with_power(HermitianOperator(x), sigma_gamma_, 1.0 + m_.s));
      }
      v = log_m + block::log2_sum_exp2(terms) / m_.s;
      break;
    }
  }
  return std::max(0.0, v);
}

double InsecurityEvaluator::q_sum(const std::vector<std::uint32_t>& table) const {
  if (m_.measure != Measure::kRenyi) Fail(ErrorCode::kInvalidArgument, "q_sum requires a Renyi evaluator");
  std::vector<double> terms;
  if (classical_) {
    std::vector<double> a;
    hashed_scalars(table, a);
    for (double x : a) {
      if (x > 0.0) terms.push_back((1.0 + m_.s) * std::log2(x));
    }
  } else {
    std::vector<Matrix> a;
    hashed_blocks(table, a);
    for (const auto& x : a) {
      terms.push_back(block::log2_q_with_power(HermitianOperator(x), sigma_gamma_, 1.0 + m_.s));
    }
  }
  return std::exp2(block::log2_sum_exp2(terms));
}

InsecurityReport insecurity(const CQState& state_ze, MeasureSpec m) {
  const std::size_t range = state_ze.size();
  std::vector<std::uint32_t> identity(range);
  for (std::size_t z = 0; z < range; ++z) identity[z] = static_cast<std::uint32_t>(z);
  InsecurityReport r;
  r.measure = m;
  r.value = InsecurityEvaluator(state_ze, range, m).evaluate(identity);
  r.hash_id = "identity";
  r.ideal = "uniform(" + std::to_string(range) + ") x rho_E";
  r.evaluated = 1;
  if (m.measure == Measure::kRelativeEntropy) {
    // log|Z| − H(Z|E) with H(Z|E) = H(ZE) − H(E) from spectra alone.
    double h_ze = 0.0;
    for (std::size_t z = 0; z < range; ++z) h_ze += entropy_bits(state_ze.block(z).matrix());
    const double h_e = entropy_bits(state_ze.marginal_e().matrix());
    r.identity_gap = std::abs(r.value - (std::log2(static_cast<double>(range)) - (h_ze - h_e)));
  }
  return r;
}

InsecurityReport min_insecurity_exhaustive(const CQState& source, std::size_t range_size,
                                           MeasureSpec m, int threads, std::uint64_t budget) {
  const HashFamily all = HashFamily::AllFunctions(source.size(), range_size);
  const auto count = all.size();
  if (!count || *count > budget) {
    Fail(ErrorCode::kBudgetExceeded,
         "exhaustive search over " + std::to_string(range_size) + "^" + std::to_string(source.size()) +
             " functions exceeds the enumeration budget of " + std::to_string(budget) +
             "; use family sampling (pa-family) instead");
  }
  const InsecurityEvaluator eval(source, range_size, m);
  struct Best {
    double value = kInf;
    std::uint64_t index = 0;
  };
  const std::uint64_t chunks = std::min<std::uint64_t>(*count, 256);
  const std::uint64_t per = (*count + chunks - 1) / chunks;
  std::vector<Best> best(chunks);
  parallel_for(chunks, threads, [&](std::size_t c) {
    const std::uint64_t begin = c * per;
    const std::uint64_t end = std::min(*count, begin + per);
    if (begin >= end) return;
    std::vector<std::uint32_t> table;
    all.member_table(begin, table);
    for (std::uint64_t i = begin; i < end; ++i) {
      const double v = eval.evaluate(table);
      if (v < best[c].value) best[c] = {v, i};
      // Odometer step to member i + 1; the last entry is least significant.
      for (std::size_t k = table.size(); k-- > 0;) {
        if (++table[k] < range_size) break;
        table[k] = 0;
      }
    }
  });
  Best winner;
  for (const auto& b : best) {
    if (b.value < winner.value || (b.value == winner.value && b.index < winner.index)) winner = b;
  }
  InsecurityReport r;
  r.measure = m;
  r.value = winner.value;
  r.index = winner.index;
  r.evaluated = *count;
  r.hash_id = all.member(winner.index).describe();
  r.ideal = "uniform(" + std::to_string(range_size) + ") x rho_E";
  if (m.measure == Measure::kRelativeEntropy) {
    r.identity_gap = insecurity(apply_hash(source, all.member(winner.index)), m).identity_gap;
  }
  return r;
}

FamilyExpectation family_expectation(const HashFamily& family, const CQState& source,
                                     MeasureSpec m, const Sampling& sampling, int threads,
                                     std::uint64_t budget) {
  if (family.domain_size() != source.size()) {
    Fail(ErrorCode::kDimensionMismatch, "family domain " + std::to_string(family.domain_size()) +
                                            " does not match " + std::to_string(source.size()) +
                                            " source symbols");
  }
  const InsecurityEvaluator eval(source, family.range_size(), m);
  const auto size = family.size();
  FamilyExpectation out;
  if (sampling.exhaustive && size && *size <= budget) {
    const ChunkSums s = chunked_sums(*size, threads, [&](std::uint64_t i) {
      std::vector<std::uint32_t> table;
      family.member_table(i, table);
      return eval.evaluate(table);
    });
    out.count = *size;
    out.mean = s.sum / static_cast<double>(*size);
    out.max_value = s.max;
    out.exhaustive = true;
    return out;
  }
  if (sampling.count < 1) Fail(ErrorCode::kInvalidArgument, "Monte Carlo sample count must be positive");
  const ChunkSums s = chunked_sums(sampling.count, threads, [&](std::uint64_t i) {
    return eval.evaluate(family.sample(sampling.seed, i).table);
  });
  const double n = static_cast<double>(sampling.count);
  out.count = sampling.count;
  out.mean = s.sum / n;
  out.max_value = s.max;
  out.exhaustive = false;
  if (sampling.count > 1) {
    const double var = std::max(0.0, (s.sum_sq - n * out.mean * out.mean) / (n - 1.0));
    out.std_error = std::sqrt(var / n);
  }
  return out;
}

BoundCheck positive_part_superadditivity_check(const std::vector<HermitianOperator>& ops, double lambda) {
  if (ops.empty()) Fail(ErrorCode::kInvalidArgument, "bound check: no operators");
  if (!(lambda > 0.0)) Fail(ErrorCode::kInvalidArgument, "bound check: lambda must be positive");
  const std::size_t d = ops.front().dim();
  const HermitianOperator shift = lambda * HermitianOperator::Identity(d);
  HermitianOperator total = HermitianOperator::Zero(d);
  BoundCheck c;
  for (const auto& a : ops) {
    if (a.dim() != d) Fail(ErrorCode::kDimensionMismatch, "bound check: operators differ in dimension");
    total = total + a;
    c.rhs += positive_part_trace(a - shift);
  }
  c.lhs = positive_part_trace(total - shift);
  c.slack = c.lhs - c.rhs;
  return c;
}

namespace {

// (E_F Σ_z Q_{1+s}(A_z ‖ ρ_E), Q_{1+s}(ρ_XE ‖ 1 ⊗ ρ_E), v(ρ_E)).
struct HashedTerms {
  double family_mean;
  double q_source;
  double v;
};

HashedTerms hashed_terms(const CQState& source, const HashFamily& family, double s, int threads) {
  if (!(s > 0.0 && s <= 1.0)) Fail(ErrorCode::kInvalidArgument, "bound check: s must lie in (0,1]");
  if (family.domain_size() != source.size()) Fail(ErrorCode::kDimensionMismatch, "bound check: family domain mismatch");
  const auto size = family.size();
  if (!size || *size > kEnumerationBudget) {
    Fail(ErrorCode::kBudgetExceeded, "bound check needs an exhaustively enumerable family");
  }
  const InsecurityEvaluator eval(source, family.range_size(), {Measure::kRenyi, s});
  const ChunkSums sums = chunked_sums(*size, threads, [&](std::uint64_t i) {
    std::vector<std::uint32_t> table;
    family.member_table(i, table);
    return eval.q_sum(table);
  });
  HashedTerms t;
  t.family_mean = sums.sum / static_cast<double>(*size);
  t.q_source = std::exp2(-s * renyi_conditional_entropy(source, 1.0 + s));
  t.v = static_cast<double>(eig(source.marginal_e()).distinct_count());
  return t;
}

}  // namespace

BoundCheck hashed_collision_check(const CQState& source, const HashFamily& family, double s,
                            int threads) {
  const HashedTerms t = hashed_terms(source, family, s, threads);
  const double m = static_cast<double>(family.range_size());
  BoundCheck c;
  c.lhs = t.family_mean;
  c.rhs = t.v * (t.q_source + std::pow(m, -s));
  c.slack = c.rhs - c.lhs;
  return c;
}

BoundCheck hashed_renyi_check(const CQState& source, const HashFamily& family, double s,
                            int threads) {
  const HashedTerms t = hashed_terms(source, family, s, threads);
  const double m = static_cast<double>(family.range_size());
  BoundCheck c;
  c.lhs = std::pow(m, s) * t.family_mean;
  c.rhs = 1.0 + std::pow(t.v, s) * std::pow(m, s) * t.q_source;
  c.slack = c.rhs - c.lhs;
  return c;
}

double pinched_positive_part(const CQState& source, double c) {
  const HermitianOperator rho_e = source.marginal_e();
  const SpectralDecomposition d = eig(rho_e);
  const HermitianOperator shift = c * rho_e;
  double sum = 0.0;
  for (std::size_t x = 0; x < source.size(); ++x) {
    const Matrix b = source.block(x).matrix();
    Matrix pinched = Matrix::Zero(b.rows(), b.cols());
    for (std::size_t k = 0; k < d.distinct_count(); ++k) {
      const Matrix p = d.cluster_projector(k);
      pinched += p * b * p;
    }
    sum += positive_part_trace(HermitianOperator(pinched) - shift);
  }
  return sum;
}

double hashed_positive_part(const CQState& source, const HashFunction& f, double c) {
  const CQState hashed = apply_hash(source, f);
  const HermitianOperator shift = c * hashed.marginal_e();
  double sum = 0.0;
  for (std::size_t z = 0; z < hashed.size(); ++z) {
    sum += positive_part_trace(hashed.block(z) - shift);
  }
  return sum;
}

}  // namespace qpa
