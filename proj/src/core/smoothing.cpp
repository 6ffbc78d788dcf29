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

#include "qpa/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qpa/error.hpp"
#include "qpa/exponents.hpp"
#include "qpa/measures.hpp"

namespace qpa {

namespace {

bool close_coord(double a, double b) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::abs(a - b) <= kAtomMergeTol;
}

// ε from 1 − F without cancellation near F = 1.
double epsilon_from_gap(double gap) {
  gap = std::clamp(gap, 0.0, 1.0);
  return std::sqrt(gap * (2.0 - gap));
}

void append_block_spectrum(const HermitianOperator& a, const SpectralDecomposition& sigma,
                           double sigma_cut, double a_cut, std::vector<SpectrumAtom>& out) {
  for (std::size_t c = 0; c < sigma.distinct_count(); ++c) {
    const Matrix u = sigma.cluster_basis(c);
    const Matrix b = u.adjoint() * a.matrix() * u;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(b, Eigen::EigenvaluesOnly);
    const double mu = sigma.cluster_value(c);
    const double log2_q = mu > sigma_cut ? std::log2(mu) : -kInf;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
      const double w = solver.eigenvalues()(i);
      if (w > a_cut) out.push_back({std::log2(w), log2_q, w});
    }
  }
}

}  // namespace

SpectrumDistribution::SpectrumDistribution(std::vector<SpectrumAtom> atoms) {
  std::sort(atoms.begin(), atoms.end(), [](const SpectrumAtom& x, const SpectrumAtom& y) {
    return x.log2_p != y.log2_p ? x.log2_p < y.log2_p : x.log2_q < y.log2_q;
  });
  for (const auto& a : atoms) {
    if (!(a.weight > 0.0)) continue;
    bool merged = false;
    // Atoms within tolerance sit in a short run with nearby log2_p.
    for (auto it = atoms_.rbegin(); it != atoms_.rend(); ++it) {
      if (!close_coord(it->log2_p, a.log2_p)) break;
      if (close_coord(it->log2_q, a.log2_q)) {
        it->weight += a.weight;
        merged = true;
        break;
      }
    }
    if (!merged) atoms_.push_back(a);
  }
}

double SpectrumDistribution::total_weight() const {
  double w = 0.0;
  for (const auto& a : atoms_) w += a.weight;
  return w;
}

SpectrumDistribution joint_spectrum(const HermitianOperator& rho, const HermitianOperator& sigma,
                                    double commute_tol) {
  if (rho.dim() != sigma.dim()) Fail(ErrorCode::kDimensionMismatch, "joint_spectrum: dimension mismatch");
  if (commutator_norm(rho, sigma) > commute_tol) {
    Fail(ErrorCode::kNonCommuting,
         "joint_spectrum: operators do not commute; use the certificate path");
  }
  const SpectralDecomposition s = eig(sigma);
  std::vector<SpectrumAtom> atoms;
  append_block_spectrum(rho, s, kSupportCut * s.lambda_max(), kSupportCut * max_eigenvalue(rho),
                        atoms);
  return SpectrumDistribution(std::move(atoms));
}

SpectrumDistribution joint_spectrum(const CQState& rho_xe, double commute_tol) {
  if (!rho_xe.commutes_with_reference(commute_tol)) {
    Fail(ErrorCode::kNonCommuting,
         "conditional states do not commute with the E marginal; use the certificate path");
  }
  const SpectralDecomposition s = eig(rho_xe.marginal_e());
  std::vector<SpectrumAtom> atoms;
  for (std::size_t x = 0; x < rho_xe.size(); ++x) {
    if (rho_xe.probs()[x] <= 0.0) continue;
    append_block_spectrum(rho_xe.block(x), s, kSupportCut * s.lambda_max(),
                          kSupportCut * rho_xe.probs()[x], atoms);
  }
  return SpectrumDistribution(std::move(atoms));
}

SpectrumDistribution iid_spectrum(const SpectrumDistribution& base, int n, std::size_t atom_cap) {
  if (n < 1) Fail(ErrorCode::kInvalidArgument, "iid_spectrum: n must be positive");
  if (n == 1) return base;
  const auto& b = base.atoms();
  const std::size_t k = b.size();
  if (k == 0) return base;
  // C(n + k − 1, k − 1) type classes.
  const double types = std::exp(std::lgamma(n + k) - std::lgamma(n + 1.0) - std::lgamma(static_cast<double>(k)));
  if (types > static_cast<double>(atom_cap)) {
    Fail(ErrorCode::kBudgetExceeded, "iid_spectrum: type count " + std::to_string(types) +
                                         " exceeds the atom cap");
  }
  std::vector<double> log2_w(k);
  for (std::size_t j = 0; j < k; ++j) log2_w[j] = std::log2(b[j].weight);
  const double log2_nfact = std::lgamma(n + 1.0) / std::log(2.0);

  std::vector<SpectrumAtom> out;
  // Depth-first over compositions of n into k parts.
  auto rec = [&](auto&& self, std::size_t j, int left, double lp, double lq, double lw) -> void {
    if (j + 1 == k) {
      const double m = left;
      const double q = left == 0 ? lq : lq + m * b[j].log2_q;
      out.push_back({lp + m * b[j].log2_p, q,
                     std::exp2(lw + m * log2_w[j] - std::lgamma(m + 1.0) / std::log(2.0))});
      return;
    }
    for (int c = 0; c <= left; ++c) {
      const double m = c;
      const double q = c == 0 ? lq : lq + m * b[j].log2_q;
      self(self, j + 1, left - c, lp + m * b[j].log2_p, q,
           lw + m * log2_w[j] - std::lgamma(m + 1.0) / std::log(2.0));
    }
  };
  rec(rec, 0, n, 0.0, 0.0, log2_nfact);
  return SpectrumDistribution(std::move(out));
}

double positive_part_trace(const SpectrumDistribution& spec, double log2_c) {
  double sum = 0.0;
  for (const auto& a : spec.atoms()) {
    const double gap = log2_c - a.log_ratio();
    if (gap < 0.0) sum += a.weight * (1.0 - std::exp2(gap));
  }
  return sum;
}

namespace {

struct LevelAtom {
  double cap_ratio;  // 2^{λ − ℓ}: the cap on p̃/p
  double weight;
};

SmoothingSolution water_fill(std::vector<LevelAtom> atoms, std::vector<double>* ratio_out) {
  double total_w = 0.0;
  double total_caps = 0.0;
  for (const auto& a : atoms) {
    total_w += a.weight;
    total_caps += a.weight * a.cap_ratio;
  }
  SmoothingSolution sol;
  if (total_caps <= 1.0) {
    sol.level = kInf;
  } else {
    std::vector<LevelAtom> sorted = atoms;
    std::sort(sorted.begin(), sorted.end(),
              [](const LevelAtom& x, const LevelAtom& y) { return x.cap_ratio < y.cap_ratio; });
    // Mass as a function of the level is S_k + t·W_k between consecutive caps.
    double below = 0.0;
    double above = total_w;
    sol.level = kInf;
    double top_cap = 0.0;
    for (const auto& a : sorted) {
      if (a.weight <= 0.0) continue;
      top_cap = a.cap_ratio;
      const double t = (1.0 - below) / above;
      if (t <= a.cap_ratio) {
        sol.level = t;
        break;
      }
      below += a.weight * a.cap_ratio;
      above -= a.weight;
    }
    // Rounding can leave total_caps a hair above 1 with no crossing found;
    // the level then sits at the largest cap.
    if (sol.level == kInf && top_cap > 0.0 && below >= 1.0 - 1e-12) sol.level = top_cap;
    if (sol.level == kInf) Fail(ErrorCode::kNotConverged, "water-filling level not found");
  }
  double f = 0.0;
  double mass = 0.0;
  double sq = 0.0;
  const double root_level = std::sqrt(sol.level);
  if (ratio_out) ratio_out->clear();
  for (const auto& a : atoms) {
    const double m = std::min(root_level, std::sqrt(a.cap_ratio));
    f += a.weight * m;
    mass += a.weight * m * m;
    sq += a.weight * (1.0 - m) * (1.0 - m);
    if (ratio_out) ratio_out->push_back(m * m);
  }
  const double expected = std::min(1.0, total_caps);
  if (std::abs(mass - expected) > 1e-9) {
    Fail(ErrorCode::kNotConverged, "water-filling normalization residual exceeds 1e-9");
  }
  sol.fidelity = std::min(1.0, f);
  sol.mass = mass;
  sol.epsilon = epsilon_from_gap(0.5 * sq + 0.5 * ((1.0 - mass) + (1.0 - total_w)));
  return sol;
}

double cap_ratio(double lambda, double log_ratio) {
  if (log_ratio == kInf) return 0.0;
  return std::exp2(std::min(lambda - log_ratio, 1000.0));
}

}  // namespace

SmoothingSolution classical_smoothing_oracle(const std::vector<double>& p,
                                             const std::vector<double>& q, double lambda) {
  if (p.size() != q.size()) Fail(ErrorCode::kDimensionMismatch, "smoothing oracle: p and q differ in length");
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 0.0 || q[i] < 0.0) Fail(ErrorCode::kInvalidArgument, "smoothing oracle: negative entry");
    total += p[i];
  }
  if (std::abs(total - 1.0) > 1e-9) Fail(ErrorCode::kInvalidArgument, "smoothing oracle: p is not normalized");
  std::vector<LevelAtom> atoms;
  std::vector<std::size_t> index;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    const double lr = q[i] > 0.0 ? std::log2(p[i]) - std::log2(q[i]) : kInf;
    atoms.push_back({cap_ratio(lambda, lr), p[i]});
    index.push_back(i);
  }
  std::vector<double> ratio;
  SmoothingSolution sol = water_fill(std::move(atoms), &ratio);
  sol.p_tilde.assign(p.size(), 0.0);
  for (std::size_t k = 0; k < index.size(); ++k) {
    const std::size_t i = index[k];
    // Capped coordinates are set to the cap itself, not p·(cap/p).
    const double cap = std::exp2(lambda) * q[i];
    sol.p_tilde[i] = std::min(p[i] * ratio[k], cap);
  }
  return sol;
}

SmoothingSolution classical_smoothing_oracle(const SpectrumDistribution& spec, double lambda) {
  std::vector<LevelAtom> atoms;
  atoms.reserve(spec.size());
  for (const auto& a : spec.atoms()) atoms.push_back({cap_ratio(lambda, a.log_ratio()), a.weight});
  return water_fill(std::move(atoms), nullptr);
}

SmoothingWitness pinched_smoothing_witness(const StateDescriptor& rho,
                                           const HermitianOperator& sigma, double lambda,
                                           double cluster_tol) {
  if (rho.dim() != sigma.dim()) Fail(ErrorCode::kDimensionMismatch, "witness: dimension mismatch");
  const SpectralDecomposition s = eig(sigma, cluster_tol);
  const double v = static_cast<double>(s.distinct_count());
  const double sigma_cut = kSupportCut * s.lambda_max();
  const double rho_scale = max_eigenvalue(rho.op());
  const std::size_t d = rho.dim();
  Matrix q = Matrix::Zero(d, d);
  for (std::size_t c = 0; c < s.distinct_count(); ++c) {
    const Matrix u = s.cluster_basis(c);
    const Matrix b = u.adjoint() * rho.op().matrix() * u;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(b);
    const double mu = s.cluster_value(c) > sigma_cut ? s.cluster_value(c) : 0.0;
    const double threshold = std::exp2(lambda) / v * mu + 1e-13 * rho_scale;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
      if (solver.eigenvalues()(i) <= threshold) {
        const Eigen::VectorXcd w = u * solver.eigenvectors().col(i);
        q += w * w.adjoint();
      }
    }
  }
  const Matrix tilde = q * rho.op().matrix() * q;
  HermitianOperator rho_tilde(tilde);
  const double mass = std::clamp(rho_tilde.trace(), 0.0, 1.0);
  const double gap = min_eigenvalue(std::exp2(lambda) * sigma - rho_tilde);
  return SmoothingWitness{StateDescriptor(rho_tilde, StateKind::kSubnormalized),
                          std::sqrt((1.0 - mass) * (1.0 + mass)), mass, gap};
}

double achievability_bound_log2(double psi, double log2_v, double lambda, double s) {
  if (!(s >= 0.0)) Fail(ErrorCode::kInvalidArgument, "achievability bound: s must be nonnegative");
  if (psi == kInf) return 1.0;
  const double e = 0.5 * (1.0 + s * log2_v + psi - s * lambda);
  return e >= 0.0 ? 1.0 : std::exp2(e);
}

double achievability_bound(const StateDescriptor& rho, const HermitianOperator& sigma,
                           double lambda, double s, double cluster_tol) {
  if (!(s >= 0.0)) Fail(ErrorCode::kInvalidArgument, "achievability bound: s must be nonnegative");
  if (s == 0.0) return 1.0;
  const DivergenceResult d = sandwiched_renyi(rho, sigma, 1.0 + s);
  const double log2_v = std::log2(static_cast<double>(eig(sigma, cluster_tol).distinct_count()));
  return achievability_bound_log2(d.is_infinite() ? kInf : s * d.value, log2_v, lambda, s);
}

double converse_bound_from_mass(double p, double t) {
  if (!(t > 0.0)) Fail(ErrorCode::kInvalidArgument, "converse bound: t must be positive");
  const double v = p * (1.0 - 2.0 / std::sqrt(t)) - p * p / t;
  return std::clamp(std::sqrt(std::max(0.0, v)), 0.0, 1.0);
}

double converse_bound(const StateDescriptor& rho, const HermitianOperator& sigma, double lambda,
                      double t) {
  if (!(t > 0.0)) Fail(ErrorCode::kInvalidArgument, "converse bound: t must be positive");
  if (rho.dim() != sigma.dim()) Fail(ErrorCode::kDimensionMismatch, "converse bound: dimension mismatch");
  const HermitianOperator x = rho.op() - (t * std::exp2(lambda)) * sigma;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(x.matrix());
  const double cut = 1e-12 * std::max(1.0, x.max_abs());
  double p = 0.0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    if (solver.eigenvalues()(i) > cut) {
      const Eigen::VectorXcd w = solver.eigenvectors().col(i);
      p += (w.adjoint() * rho.op().matrix() * w)(0, 0).real();
    }
  }
  return converse_bound_from_mass(std::clamp(p, 0.0, 1.0), t);
}

double converse_mass(const SpectrumDistribution& spec, double lambda, double t) {
  const double threshold = lambda + std::log2(t) + 1e-12;
  double p = 0.0;
  for (const auto& a : spec.atoms()) {
    if (a.log_ratio() > threshold) p += a.weight;
  }
  return std::clamp(p, 0.0, 1.0);
}

SmoothingCertificate iid_smoothing_certificate(const StateDescriptor& rho,
                                               const HermitianOperator& sigma, double r, int n,
                                               const CertificateOptions& opt) {
  if (n < 1) Fail(ErrorCode::kInvalidArgument, "certificate: n must be positive");
  if (rho.dim() != sigma.dim()) Fail(ErrorCode::kDimensionMismatch, "certificate: dimension mismatch");
  if (rho.kind() != StateKind::kNormalized) {
    Fail(ErrorCode::kInvalidArgument, "certificate: rho must be normalized");
  }
  SmoothingCertificate cert;
  cert.n = n;
  cert.lambda = n * r;
  cert.commuting = commutator_norm(rho.op(), sigma) <= 1e-10;
  cert.log2_v = std::log2(static_cast<double>(distinct_eigenvalue_count_iid(sigma, n, opt.cluster_tol)));

  // Upper: the achievability bound is log-convex in s.
  const SpectralDecomposition s_dec = eig(sigma, opt.cluster_tol);
  const bool supported = block::support_violation(rho.op(), s_dec) <= kSupportViolationTol;
  if (supported) {
    auto neg_log = [&](double s) {
      if (s == 0.0) return -0.5;
      const double psi = n * block::log2_q(rho.op(), s_dec, 1.0 + s);
      return -0.5 * (1.0 + s * cert.log2_v + psi - s * cert.lambda);
    };
    const Optimum o = maximize_concave(neg_log, 0.0, opt.s_max, opt.search_tol);
    cert.upper_s = o.s;
    cert.upper = std::min(1.0, std::exp2(-o.value));
  }

  const double dim_n = std::pow(static_cast<double>(rho.dim()), n);
  if (cert.commuting) {
    const SpectrumDistribution spec = iid_spectrum(joint_spectrum(rho.op(), sigma), n);
    cert.exact = classical_smoothing_oracle(spec, cert.lambda).epsilon;
    cert.lower = converse_bound_from_mass(converse_mass(spec, cert.lambda, opt.t), opt.t);
    // Pinched witness mass on the joint spectrum: ℓ ≤ λ − log v.
    double mass = 0.0;
    for (const auto& a : spec.atoms()) {
      if (a.log_ratio() <= cert.lambda - cert.log2_v + 1e-12) mass += a.weight;
    }
    mass = std::clamp(mass, 0.0, 1.0);
    cert.witness_value = std::sqrt((1.0 - mass) * (1.0 + mass));
  }
  if (dim_n <= static_cast<double>(opt.dense_budget)) {
    const HermitianOperator rho_n = tensor_power(rho.op(), n, opt.dense_budget);
    const HermitianOperator sigma_n = tensor_power(sigma, n, opt.dense_budget);
    const StateDescriptor rho_state(rho_n);
    if (!cert.commuting) cert.lower = converse_bound(rho_state, sigma_n, cert.lambda, opt.t);
    SmoothingWitness w = pinched_smoothing_witness(rho_state, sigma_n, cert.lambda, opt.cluster_tol);
    cert.witness_value = w.achieved;
    cert.witness = w.rho_tilde;
  } else if (!cert.commuting) {
    cert.converse_available = false;
    cert.lower = 0.0;
  }
  return cert;
}

double smoothing_epsilon(const CQState& rho_xe, double lambda) {
  return classical_smoothing_oracle(joint_spectrum(rho_xe), lambda).epsilon;
}

double smooth_min_entropy(const CQState& rho_xe, double eps, double resolution) {
  if (!(eps > 0.0 && eps < 1.0)) Fail(ErrorCode::kInvalidArgument, "smooth min-entropy: eps must lie in (0,1)");
  const SpectrumDistribution spec = joint_spectrum(rho_xe);
  double hi = -kInf;
  for (const auto& a : spec.atoms()) hi = std::max(hi, a.log_ratio());
  auto eps_at = [&](double lambda) { return classical_smoothing_oracle(spec, lambda).epsilon; };
  double lo = hi - 1.0;
  for (int i = 0; i < 200 && eps_at(lo) <= eps; ++i) lo -= 2.0 * (hi - lo);
  while (hi - lo > resolution) {
    const double mid = 0.5 * (lo + hi);
    if (eps_at(mid) <= eps) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return -hi;
}

}  // namespace qpa
