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

// Scalar exponent functions of privacy amplification and of smoothing the
// max-relative entropy. Each one is a one-dimensional optimisation over the
// Rényi parameter s of an objective that is concave in s, so golden-section
// search on a bounded interval is exact up to its bracket width.

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qpa/cq_state.hpp"
#include "qpa/measures.hpp"
#include "qpa/operator.hpp"

namespace qpa {

struct ExponentOptions {
  double s_max = 64.0;
  // Rate comparisons against H, H_min, D, D_max and R_critical.
  double rate_tol = 1e-9;
  // Central-difference base step for R̂(s).
  double fd_step = 1e-4;
  // Golden-section bracket width.
  double search_tol = 1e-11;
};

// The four cases of the sup over s ≥ 0 of s(H_{1+s} − R), in order of
// decreasing rate; reused with the analogous meaning for (ρ, σ) exponents.
enum class Regime {
  kZero = 1,         // optimum at s = 0, value 0
  kCritical = 2,     // optimum at s* ∈ (0, 1]
  kSubcritical = 3,  // optimum at s* ∈ (1, ∞)
  kDivergent = 4,    // the supremum is +∞ (or the infimum −∞)
};

const char* regime_name(Regime r);

struct ExponentValue {
  double value = 0.0;  // bits per copy; ±∞ where the optimum is unbounded
  std::optional<double> maximizer_s;
  Regime regime = Regime::kZero;
  // The optimum sits past s_max; value is the sup over [0, s_max].
  bool capped = false;
  // The rate is within rate_tol of the divergence threshold.
  bool boundary = false;
  // Sup over [0, s_max] reported alongside an infinite value.
  std::optional<double> capped_value;
  // For the Rényi security exponent: whether R ≥ R_critical.
  bool valid = true;

  // Exponent under the purified-distance measure.
  double purified() const { return value / 2.0; }
  bool is_infinite() const { return value == kInf || value == -kInf; }
};

struct Optimum {
  double s = 0.0;
  double value = 0.0;
};

// Maximises a concave f on [lo, hi]; among equal values the smallest s wins.
Optimum maximize_concave(const std::function<double(double)>& f, double lo, double hi,
                         double tol = 1e-11);

// φ(s) = s·H_{1+s}(X|E) = −log₂ Q_{1+s}(ρ_XE ‖ 1_X ⊗ ρ_E), concave with φ(0) = 0.
class ConditionalRenyiProfile {
 public:
  explicit ConditionalRenyiProfile(const CQState& rho_xe);

  double phi(double s) const;
  double h_alpha(double alpha) const;  // H_α(X|E)
  double entropy() const { return h_; }
  double min_entropy() const { return hmin_; }

 private:
  std::vector<HermitianOperator> blocks_;
  SpectralDecomposition rho_e_;
  double h_ = 0.0;
  double hmin_ = 0.0;
};

// ψ(s) = s·D_{1+s}(ρ‖σ) = log₂ Q_{1+s}(ρ‖σ), convex with ψ(0) = 0.
class DivergenceProfile {
 public:
  DivergenceProfile(const StateDescriptor& rho, const HermitianOperator& sigma);

  double psi(double s) const;
  double relative_entropy() const { return d_; }
  double d_max() const { return dmax_; }

 private:
  HermitianOperator rho_;
  SpectralDecomposition sigma_;
  double d_ = 0.0;
  double dmax_ = 0.0;
};

// ½ sup_{s≥0} s(r − D_{1+s}(ρ‖σ)).
ExponentValue smoothing_exponent(const StateDescriptor& rho, const HermitianOperator& sigma,
                                 double r, const ExponentOptions& opt = {});

// E_u(R) = sup_{s≥0} s(H_{1+s}(X|E) − R), relative-entropy measure.
ExponentValue pa_upper_exponent(const CQState& rho_xe, double rate,
                                const ExponentOptions& opt = {});
ExponentValue pa_upper_exponent(const ConditionalRenyiProfile& profile, double r_critical,
                                double rate, const ExponentOptions& opt = {});

// E_l(R) = max_{0≤s≤1} s(H_{1+s}(X|E) − R).
ExponentValue pa_lower_exponent(const CQState& rho_xe, double rate,
                                const ExponentOptions& opt = {});
ExponentValue pa_lower_exponent(const ConditionalRenyiProfile& profile, double r_critical,
                                double rate, const ExponentOptions& opt = {});

// R̂(s) = d/ds s·H_{1+s}(X|E): central difference plus one Richardson step.
double r_hat(const CQState& rho_xe, double s, const ExponentOptions& opt = {});
double r_hat(const ConditionalRenyiProfile& profile, double s, const ExponentOptions& opt = {});
double r_critical(const CQState& rho_xe, const ExponentOptions& opt = {});

// inf_{s≥0} s(D_{1+s}(ρ‖σ) − a); −∞ for a ≥ D_max.
ExponentValue mo_rate(const StateDescriptor& rho, const HermitianOperator& sigma, double a,
                      const ExponentOptions& opt = {});

// |R − H_{1+s}(X|E)|⁺ for s ∈ (0, 1].
double equivocation_rate(const CQState& rho_xe, double rate, double s);

// |sup_{t∈[s,1]} t(H_{1+t}(X|E) − R)|⁺ for s ∈ (0, 1]; valid iff R ≥ R_critical.
ExponentValue renyi_security_exponent(const CQState& rho_xe, double rate, double s,
                                      const ExponentOptions& opt = {});

enum class CurveMode { kUpper, kLower, kBoth, kRenyi };

struct CurvePoint {
  double rate = 0.0;
  std::optional<ExponentValue> upper;
  std::optional<ExponentValue> lower;
  std::optional<ExponentValue> renyi;
};

struct ExponentCurve {
  CurveMode mode = CurveMode::kBoth;
  double renyi_s = 1.0;
  std::vector<CurvePoint> points;
  double h = 0.0;           // H(X|E)
  double h_min = 0.0;       // H_min(X|E)
  double h_2 = 0.0;         // H_2(X|E)
  double r_critical = 0.0;
  ExponentOptions options;
};

// Samples the requested exponents on `count` equally spaced rates in
// [r_min, r_max]; points are evaluated independently and assembled by index.
ExponentCurve exponent_curve(const CQState& rho_xe, double r_min, double r_max, int count,
                             CurveMode mode, double renyi_s = 1.0,
                             const ExponentOptions& opt = {}, int threads = 1);

}  // namespace qpa
