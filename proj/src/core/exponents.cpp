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

#include "qpa/exponents.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "qpa/error.hpp"
#include "qpa/parallel.hpp"

namespace qpa {

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::kZero: return "zero";
    case Regime::kCritical: return "critical";
    case Regime::kSubcritical: return "subcritical";
    case Regime::kDivergent: return "divergent";
  }
  return "unknown";
}

Optimum maximize_concave(const std::function<double(double)>& f, double lo, double hi,
                         double tol) {
  if (!(hi >= lo)) Fail(ErrorCode::kInvalidArgument, "maximize_concave: empty interval");
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo;
  double b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < 300 && (b - a) > tol * std::max(1.0, std::abs(b)); ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  // Candidates in ascending s; a later one must beat the incumbent strictly.
  std::array<Optimum, 5> cand = {Optimum{lo, f(lo)}, Optimum{c, fc}, Optimum{0.5 * (a + b), 0.0},
                                 Optimum{d, fd}, Optimum{hi, f(hi)}};
  cand[2].value = f(cand[2].s);
  std::sort(cand.begin(), cand.end(), [](const Optimum& x, const Optimum& y) { return x.s < y.s; });
  Optimum best = cand[0];
  for (std::size_t i = 1; i < cand.size(); ++i) {
    if (cand[i].value > best.value + 1e-15 * (1.0 + std::abs(best.value))) best = cand[i];
  }
  return best;
}

ConditionalRenyiProfile::ConditionalRenyiProfile(const CQState& rho_xe)
    : rho_e_(eig(rho_xe.marginal_e())) {
  for (std::size_t x = 0; x < rho_xe.size(); ++x) {
    if (rho_xe.probs()[x] > 0.0) blocks_.push_back(rho_xe.block(x));
  }
  h_ = conditional_entropy(rho_xe);
  hmin_ = conditional_min_entropy(rho_xe);
}

double ConditionalRenyiProfile::phi(double s) const {
  if (s == 0.0) return 0.0;
  return s * h_alpha(1.0 + s);
}

double ConditionalRenyiProfile::h_alpha(double alpha) const {
  if (alpha == 1.0) return h_;
  if (alpha == kInf) return hmin_;
  if (!(alpha > 0.0)) Fail(ErrorCode::kInvalidArgument, "Renyi order must be positive");
  const HermitianOperator sg = mat_power(rho_e_, (1.0 - alpha) / (2.0 * alpha));
  std::vector<double> terms;
  terms.reserve(blocks_.size());
  for (const auto& b : blocks_) terms.push_back(block::log2_q_with_power(b, sg, alpha));
  return -block::log2_sum_exp2(terms) / (alpha - 1.0);
}

DivergenceProfile::DivergenceProfile(const StateDescriptor& rho, const HermitianOperator& sigma)
    : rho_(rho.op()), sigma_(eig(sigma)) {
  d_ = qpa::relative_entropy(rho, sigma).value;
  dmax_ = qpa::d_max(rho, sigma).value;
}

double DivergenceProfile::psi(double s) const {
  if (s == 0.0) return 0.0;
  if (dmax_ == kInf) return kInf;
  return block::log2_q(rho_, sigma_, 1.0 + s);
}

namespace {

bool slope_positive_at_cap(const std::function<double(double)>& f, const ExponentOptions& opt) {
  const double h = 1e-3;
  return (f(opt.s_max) - f(opt.s_max - h)) / h > 1e-9;
}

// Sup over s ≥ 0 of a concave objective that is 0 at s = 0 and whose optimum
// is known to be finite and positive.
ExponentValue interior_sup(const std::function<double(double)>& obj, bool optimum_beyond_one,
                           const ExponentOptions& opt) {
  ExponentValue v;
  if (!optimum_beyond_one) {
    const Optimum o = maximize_concave(obj, 0.0, 1.0, opt.search_tol);
    v.value = std::max(0.0, o.value);
    v.maximizer_s = std::max(o.s, opt.search_tol);
    v.regime = Regime::kCritical;
  } else {
    const Optimum o = maximize_concave(obj, 1.0, opt.s_max, opt.search_tol);
    v.value = std::max(0.0, o.value);
    v.maximizer_s = std::max(o.s, 1.0 + opt.search_tol);
    v.regime = Regime::kSubcritical;
    if (opt.s_max - o.s <= 1e-6 * opt.s_max && slope_positive_at_cap(obj, opt)) v.capped = true;
  }
  return v;
}

ExponentValue zero_exponent() {
  ExponentValue v;
  v.value = 0.0;
  v.maximizer_s = 0.0;
  v.regime = Regime::kZero;
  return v;
}

}  // namespace

ExponentValue smoothing_exponent(const StateDescriptor& rho, const HermitianOperator& sigma,
                                 double r, const ExponentOptions& opt) {
  const DivergenceProfile prof(rho, sigma);
  if (r <= prof.relative_entropy() + opt.rate_tol) return zero_exponent();
  auto obj = [&](double s) { return 0.5 * (s * r - prof.psi(s)); };
  if (r >= prof.d_max() - opt.rate_tol) {
    ExponentValue v;
    v.value = kInf;
    v.regime = Regime::kDivergent;
    v.boundary = r <= prof.d_max() + opt.rate_tol;
    if (prof.d_max() < kInf) v.capped_value = maximize_concave(obj, 0.0, opt.s_max, opt.search_tol).value;
    return v;
  }
  // The derivative of s·D_{1+s} at s = 1 separates the two interior cases.
  const double h = opt.fd_step;
  const double slope_at_one = (prof.psi(1.0 + h) - prof.psi(1.0 - h)) / (2.0 * h);
  return interior_sup(obj, r > slope_at_one, opt);
}

ExponentValue pa_upper_exponent(const ConditionalRenyiProfile& profile, double rc, double rate,
                                const ExponentOptions& opt) {
  if (rate >= profile.entropy() - opt.rate_tol) return zero_exponent();
  auto obj = [&](double s) { return profile.phi(s) - s * rate; };
  if (rate <= profile.min_entropy() + opt.rate_tol) {
    ExponentValue v;
    v.value = kInf;
    v.regime = Regime::kDivergent;
    v.boundary = rate >= profile.min_entropy() - opt.rate_tol;
    v.capped_value = maximize_concave(obj, 0.0, opt.s_max, opt.search_tol).value;
    return v;
  }
  return interior_sup(obj, rate < rc, opt);
}

ExponentValue pa_upper_exponent(const CQState& rho_xe, double rate, const ExponentOptions& opt) {
  const ConditionalRenyiProfile profile(rho_xe);
  return pa_upper_exponent(profile, r_hat(profile, 1.0, opt), rate, opt);
}

ExponentValue pa_lower_exponent(const ConditionalRenyiProfile& profile, double /*rc*/,
                                double rate, const ExponentOptions& opt) {
  if (rate >= profile.entropy() - opt.rate_tol) return zero_exponent();
  auto obj = [&](double s) { return profile.phi(s) - s * rate; };
  return interior_sup(obj, false, opt);
}

ExponentValue pa_lower_exponent(const CQState& rho_xe, double rate, const ExponentOptions& opt) {
  const ConditionalRenyiProfile profile(rho_xe);
  return pa_lower_exponent(profile, r_hat(profile, 1.0, opt), rate, opt);
}

double r_hat(const ConditionalRenyiProfile& profile, double s, const ExponentOptions& opt) {
  if (!(s > 0.0)) Fail(ErrorCode::kInvalidArgument, "r_hat: s must be positive");
  const double h = std::min(opt.fd_step, 0.5 * s);
  auto central = [&](double step) {
    return (profile.phi(s + step) - profile.phi(s - step)) / (2.0 * step);
  };
  return (4.0 * central(0.5 * h) - central(h)) / 3.0;
}

double r_hat(const CQState& rho_xe, double s, const ExponentOptions& opt) {
  return r_hat(ConditionalRenyiProfile(rho_xe), s, opt);
}

double r_critical(const CQState& rho_xe, const ExponentOptions& opt) {
  return r_hat(rho_xe, 1.0, opt);
}

ExponentValue mo_rate(const StateDescriptor& rho, const HermitianOperator& sigma, double a,
                      const ExponentOptions& opt) {
  const DivergenceProfile prof(rho, sigma);
  if (a <= prof.relative_entropy() + opt.rate_tol) return zero_exponent();
  if (a >= prof.d_max() - opt.rate_tol) {
    ExponentValue v;
    v.value = -kInf;
    v.regime = Regime::kDivergent;
    v.boundary = a <= prof.d_max() + opt.rate_tol;
    return v;
  }
  auto obj = [&](double s) { return s * a - prof.psi(s); };
  const double h = opt.fd_step;
  const double slope_at_one = (prof.psi(1.0 + h) - prof.psi(1.0 - h)) / (2.0 * h);
  ExponentValue v = interior_sup(obj, a > slope_at_one, opt);
  v.value = -v.value;
  return v;
}

double equivocation_rate(const CQState& rho_xe, double rate, double s) {
  if (!(s > 0.0 && s <= 1.0)) Fail(ErrorCode::kInvalidArgument, "equivocation_rate: s must lie in (0,1]");
  return std::max(0.0, rate - renyi_conditional_entropy(rho_xe, 1.0 + s));
}

ExponentValue renyi_security_exponent(const CQState& rho_xe, double rate, double s,
                                      const ExponentOptions& opt) {
  if (!(s > 0.0 && s <= 1.0)) {
    Fail(ErrorCode::kInvalidArgument, "renyi_security_exponent: s must lie in (0,1]");
  }
  const ConditionalRenyiProfile profile(rho_xe);
  const double rc = r_hat(profile, 1.0, opt);
  const Optimum o = maximize_concave([&](double t) { return profile.phi(t) - t * rate; }, s, 1.0,
                                     opt.search_tol);
  ExponentValue v;
  v.valid = rate >= rc - opt.rate_tol;
  if (o.value <= 0.0) {
    v.value = 0.0;
    v.maximizer_s = 0.0;
    v.regime = Regime::kZero;
  } else {
    v.value = o.value;
    v.maximizer_s = o.s;
    v.regime = Regime::kCritical;
  }
  return v;
}

ExponentCurve exponent_curve(const CQState& rho_xe, double r_min, double r_max, int count,
                             CurveMode mode, double renyi_s, const ExponentOptions& opt,
                             int threads) {
  if (count < 1) Fail(ErrorCode::kInvalidArgument, "exponent_curve: count must be positive");
  if (count > 1 && !(r_min < r_max)) {
    Fail(ErrorCode::kInvalidArgument, "exponent_curve: grid minimum must be below maximum");
  }
  if (mode == CurveMode::kRenyi && !(renyi_s > 0.0 && renyi_s <= 1.0)) {
    Fail(ErrorCode::kInvalidArgument, "exponent_curve: Renyi s must lie in (0,1]");
  }
  const ConditionalRenyiProfile profile(rho_xe);
  ExponentCurve curve;
  curve.mode = mode;
  curve.renyi_s = renyi_s;
  curve.options = opt;
  curve.h = profile.entropy();
  curve.h_min = profile.min_entropy();
  curve.h_2 = profile.h_alpha(2.0);
  curve.r_critical = r_hat(profile, 1.0, opt);
  curve.points.resize(static_cast<std::size_t>(count));
  parallel_for(curve.points.size(), threads, [&](std::size_t i) {
    CurvePoint& p = curve.points[i];
    p.rate = count == 1 ? r_min : r_min + (r_max - r_min) * static_cast<double>(i) / (count - 1);
    if (mode == CurveMode::kUpper || mode == CurveMode::kBoth) {
      p.upper = pa_upper_exponent(profile, curve.r_critical, p.rate, opt);
    }
    if (mode == CurveMode::kLower || mode == CurveMode::kBoth) {
      p.lower = pa_lower_exponent(profile, curve.r_critical, p.rate, opt);
    }
    if (mode == CurveMode::kRenyi) p.renyi = renyi_security_exponent(rho_xe, p.rate, renyi_s, opt);
  });
  return curve;
}

}  // namespace qpa
