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

// The smoothing quantity ε(ρ‖σ, λ): the smallest purified distance from ρ to
// a subnormalized ρ̃ with ρ̃ ≤ 2^λ σ. Exact by water-filling when ρ and σ
// commute; otherwise bracketed by a positive-part converse and a pinching
// construction.

#pragma once

#include <optional>
#include <vector>

#include "qpa/cq_state.hpp"
#include "qpa/operator.hpp"

namespace qpa {

// One point of the joint spectrum of a commuting pair: ρ-eigenvalue 2^log2_p,
// σ-eigenvalue 2^log2_q, carrying ρ-mass `weight`.
struct SpectrumAtom {
  double log2_p = 0.0;
  double log2_q = 0.0;
  double weight = 0.0;

  // log ρ-eigenvalue minus log σ-eigenvalue; +∞ off supp(σ).
  double log_ratio() const { return log2_p - log2_q; }
};

inline constexpr double kAtomMergeTol = 1e-12;
inline constexpr std::size_t kAtomCap = 10'000'000;

class SpectrumDistribution {
 public:
  SpectrumDistribution() = default;
  // Sorts and merges atoms whose coordinates agree within kAtomMergeTol.
  explicit SpectrumDistribution(std::vector<SpectrumAtom> atoms);

  const std::vector<SpectrumAtom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  double total_weight() const;

 private:
  std::vector<SpectrumAtom> atoms_;
};

// Joint spectrum of commuting ρ and σ; rejects pairs with ‖[ρ,σ]‖_max > tol.
SpectrumDistribution joint_spectrum(const HermitianOperator& rho, const HermitianOperator& sigma,
                                    double commute_tol = 1e-10);
// Joint spectrum of ρ_XE against 1_X ⊗ ρ_E; requires [ρ^x, ρ_E] = 0 for all x.
SpectrumDistribution joint_spectrum(const CQState& rho_xe, double commute_tol = 1e-10);

// n-fold product spectrum by type-class enumeration.
SpectrumDistribution iid_spectrum(const SpectrumDistribution& base, int n,
                                  std::size_t atom_cap = kAtomCap);

// tr(ρ − c·σ)_+ for a commuting pair given by its joint spectrum, c = 2^log2_c.
double positive_part_trace(const SpectrumDistribution& spec, double log2_c);

struct SmoothingSolution {
  double epsilon = 0.0;
  double fidelity = 1.0;
  // Water level: p̃ = min(t·p, 2^λ q); +∞ when all caps fit in unit mass.
  double level = 1.0;
  double mass = 1.0;  // Σ p̃
  std::vector<double> p_tilde;  // filled by the vector form only
};

// Exact ε(p‖q, λ) for a probability vector p and nonnegative q.
SmoothingSolution classical_smoothing_oracle(const std::vector<double>& p,
                                             const std::vector<double>& q, double lambda);
// Same on a joint spectrum (p_tilde left empty).
SmoothingSolution classical_smoothing_oracle(const SpectrumDistribution& spec, double lambda);

struct SmoothingWitness {
  StateDescriptor rho_tilde;
  double achieved = 0.0;  // P(ρ, ρ̃)
  double mass = 0.0;      // tr ρQ
  // min eigenvalue of 2^λ σ − ρ̃
  double feasibility_gap = 0.0;
};

// ρ̃ = QρQ with Q built blockwise on the eigenspaces of σ so that
// E_σ(ρ) ≤ (2^λ / v(σ)) σ on the range of Q.
SmoothingWitness pinched_smoothing_witness(const StateDescriptor& rho,
                                           const HermitianOperator& sigma, double lambda,
                                           double cluster_tol = kClusterTol);

// min(1, √(2 v^s 2^{s(D_{1+s}(ρ‖σ) − λ)})).
double achievability_bound(const StateDescriptor& rho, const HermitianOperator& sigma,
                           double lambda, double s, double cluster_tol = kClusterTol);
// The same bound from its ingredients, all in bits: ψ = s·D_{1+s}, log2_v = log v.
double achievability_bound_log2(double psi, double log2_v, double lambda, double s);

// With Q = {ρ > t·2^λ σ} and p = tr ρQ: √(p(1 − 2/√t) − p²/t) clamped to [0,1].
// At t = 9 this is √(p/3 − p²/9).
double converse_bound(const StateDescriptor& rho, const HermitianOperator& sigma,
                      double lambda, double t = 9.0);
double converse_bound_from_mass(double p, double t);
// p = tr ρQ on a joint spectrum.
double converse_mass(const SpectrumDistribution& spec, double lambda, double t);

struct CertificateOptions {
  double t = 9.0;
  double s_max = 64.0;
  double search_tol = 1e-11;
  double cluster_tol = kClusterTol;
  // Largest dim^n for which dense tensor powers are formed.
  std::size_t dense_budget = 256;
};

struct SmoothingCertificate {
  int n = 1;
  double lambda = 0.0;
  double lower = 0.0;
  double upper = 1.0;
  double upper_s = 0.0;  // minimizing s of the achievability bound
  double log2_v = 0.0;   // log v(σ^{⊗n})
  bool commuting = false;
  bool converse_available = true;
  std::optional<double> exact;
  // Purified distance achieved by the pinched witness.
  std::optional<double> witness_value;
  std::optional<StateDescriptor> witness;
};

// Two-sided certificate on ε(ρ^{⊗n} ‖ σ^{⊗n}, n·r).
SmoothingCertificate iid_smoothing_certificate(const StateDescriptor& rho,
                                               const HermitianOperator& sigma, double r, int n,
                                               const CertificateOptions& opt = {});

// H^ε_min(X|E) = −D^ε_max(ρ_XE ‖ 1_X ⊗ ρ_E) for states commuting with their
// reference, to λ-resolution `resolution`.
double smooth_min_entropy(const CQState& rho_xe, double eps, double resolution = 1e-6);
// ε(ρ_XE ‖ 1_X ⊗ ρ_E, λ) for the same class of states.
double smoothing_epsilon(const CQState& rho_xe, double lambda);

}  // namespace qpa
