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

#include "qpa/measures.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qpa/error.hpp"

namespace qpa {

namespace block {

namespace {

// Singular values below this fraction of the largest are treated as zero;
// fractional powers would otherwise amplify eigensolver noise.
constexpr double kSingularCut = 1e-13;

HermitianOperator sqrt_psd(const HermitianOperator& a) { return mat_power(a, 0.5); }

}  // namespace

double log2_sum_exp2(const std::vector<double>& v) {
  double m = -kInf;
  for (double x : v) m = std::max(m, x);
  if (m == -kInf || m == kInf) return m;
  double s = 0.0;
  for (double x : v) {
    if (x != -kInf) s += std::exp2(x - m);
  }
  return m + std::log2(s);
}

double fidelity_term(const HermitianOperator& a, const HermitianOperator& b) {
  const Matrix n = sqrt_psd(a).matrix() * sqrt_psd(b).matrix();
  Eigen::JacobiSVD<Matrix> svd(n);
  return svd.singularValues().sum();
}

double bures_squared(const HermitianOperator& a, const HermitianOperator& b) {
  const Matrix sa = sqrt_psd(a).matrix();
  const Matrix sb = sqrt_psd(b).matrix();
  const Matrix n = sa * sb;
  Eigen::JacobiSVD<Matrix> svd(n, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Matrix v = svd.matrixV() * svd.matrixU().adjoint();
  return (sa - sb * v).squaredNorm();
}

double trace_norm(const HermitianOperator& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().sum();
}

double support_violation(const HermitianOperator& a, const SpectralDecomposition& sigma) {
  const double lmax = sigma.lambda_max();
  const double cut = kSupportCut * lmax;
  const Matrix off = sigma.apply([&](double x) { return (lmax > 0.0 && x > cut) ? 0.0 : 1.0; });
  return std::max(0.0, (a.matrix().array() * off.array().conjugate()).sum().real());
}

double relative_entropy_term(const HermitianOperator& a, const SpectralDecomposition& sigma) {
  const SpectralDecomposition da = eig(a);
  const double acut = kSupportCut * std::max(0.0, da.lambda_max());
  double self = 0.0;
  for (Eigen::Index i = 0; i < da.eigenvalues.size(); ++i) {
    const double l = da.eigenvalues(i);
    if (l > acut) self += l * std::log2(l);
  }
  const double scut = kSupportCut * sigma.lambda_max();
  const HermitianOperator log_sigma(
      sigma.apply([&](double x) { return x > scut ? std::log2(x) : 0.0; }));
  return self - a.trace_product(log_sigma);
}

double log2_q_with_power(const HermitianOperator& a, const HermitianOperator& sigma_gamma,
                         double alpha) {
  std::vector<double> terms;
  if (alpha > 1.0) {
    const Matrix m = sigma_gamma.matrix() * a.matrix() * sigma_gamma.matrix();
    Eigen::SelfAdjointEigenSolver<Matrix> solver((m + m.adjoint()) * 0.5, Eigen::EigenvaluesOnly);
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
      const double mu = solver.eigenvalues()(i);
      if (mu > 0.0) terms.push_back(alpha * std::log2(mu));
    }
  } else {
    const Matrix x = sqrt_psd(a).matrix() * sigma_gamma.matrix();
    Eigen::JacobiSVD<Matrix> svd(x);
    const auto& sv = svd.singularValues();
    const double cut = sv.size() ? kSingularCut * sv(0) : 0.0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      if (sv(i) > cut) terms.push_back(2.0 * alpha * std::log2(sv(i)));
    }
  }
  return log2_sum_exp2(terms);
}

double log2_q(const HermitianOperator& a, const SpectralDecomposition& sigma, double alpha) {
  const double gamma = (1.0 - alpha) / (2.0 * alpha);
  return log2_q_with_power(a, mat_power(sigma, gamma), alpha);
}

double log2_max_ratio(const HermitianOperator& a, const SpectralDecomposition& sigma) {
  const HermitianOperator inv_sqrt = mat_power(sigma, -0.5);
  const Matrix m = inv_sqrt.matrix() * a.matrix() * inv_sqrt.matrix();
  Eigen::SelfAdjointEigenSolver<Matrix> solver((m + m.adjoint()) * 0.5, Eigen::EigenvaluesOnly);
  const double top = solver.eigenvalues()(solver.eigenvalues().size() - 1);
  return top > 0.0 ? std::log2(top) : -kInf;
}

}  // namespace block

namespace {

void require_same_dim(const HermitianOperator& a, const HermitianOperator& b, const char* what) {
  if (a.dim() != b.dim()) {
    std::ostringstream msg;
    msg << what << ": dimension mismatch (" << a.dim() << " vs " << b.dim() << ")";
    Fail(ErrorCode::kDimensionMismatch, msg.str());
  }
}

void require_psd(const HermitianOperator& sigma, const char* what) {
  if (!is_psd(sigma)) {
    Fail(ErrorCode::kInvalidArgument, std::string(what) + ": sigma is not positive semidefinite");
  }
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0)) Fail(ErrorCode::kInvalidArgument, "Renyi order must be positive");
  if (std::abs(alpha - 1.0) < kAlphaOneGuard) {
    Fail(ErrorCode::kInvalidArgument,
         "Renyi order too close to 1; use relative_entropy for the alpha = 1 case");
  }
}

}  // namespace

double fidelity(const StateDescriptor& rho, const StateDescriptor& sigma) {
  require_same_dim(rho.op(), sigma.op(), "fidelity");
  const double slack = std::sqrt(std::max(0.0, 1.0 - rho.trace()) * std::max(0.0, 1.0 - sigma.trace()));
  return std::clamp(block::fidelity_term(rho.op(), sigma.op()) + slack, 0.0, 1.0);
}

double purified_distance(const StateDescriptor& rho, const StateDescriptor& sigma) {
  require_same_dim(rho.op(), sigma.op(), "purified_distance");
  // 1 − F = ½[B²(ρ,σ) + (√(1−tr ρ) − √(1−tr σ))²]
  const double gap = std::sqrt(std::max(0.0, 1.0 - rho.trace())) -
                     std::sqrt(std::max(0.0, 1.0 - sigma.trace()));
  const double one_minus_f =
      std::clamp(0.5 * (block::bures_squared(rho.op(), sigma.op()) + gap * gap), 0.0, 1.0);
  return std::sqrt(std::clamp(one_minus_f * (2.0 - one_minus_f), 0.0, 1.0));
}

double trace_distance(const StateDescriptor& rho, const StateDescriptor& sigma) {
  require_same_dim(rho.op(), sigma.op(), "trace_distance");
  const double d = 0.5 * (block::trace_norm(rho.op() - sigma.op()) +
                          std::abs(rho.trace() - sigma.trace()));
  return std::clamp(d, 0.0, 1.0);
}

DivergenceResult relative_entropy(const StateDescriptor& rho, const HermitianOperator& sigma) {
  require_same_dim(rho.op(), sigma, "relative_entropy");
  require_psd(sigma, "relative_entropy");
  const SpectralDecomposition sd = eig(sigma);
  DivergenceResult r;
  r.support_violation = block::support_violation(rho.op(), sd);
  r.value = r.support_violation > kSupportViolationTol ? kInf
                                                        : block::relative_entropy_term(rho.op(), sd);
  return r;
}

double log2_q_alpha(const StateDescriptor& rho, const HermitianOperator& sigma, double alpha) {
  if (!(alpha > 0.0)) Fail(ErrorCode::kInvalidArgument, "Renyi order must be positive");
  require_same_dim(rho.op(), sigma, "log2_q_alpha");
  require_psd(sigma, "log2_q_alpha");
  const SpectralDecomposition sd = eig(sigma);
  if (alpha > 1.0 && block::support_violation(rho.op(), sd) > kSupportViolationTol) return kInf;
  return block::log2_q(rho.op(), sd, alpha);
}

DivergenceResult sandwiched_renyi(const StateDescriptor& rho, const HermitianOperator& sigma,
                                  double alpha) {
  check_alpha(alpha);
  require_same_dim(rho.op(), sigma, "sandwiched_renyi");
  require_psd(sigma, "sandwiched_renyi");
  const SpectralDecomposition sd = eig(sigma);
  DivergenceResult r;
  r.alpha = alpha;
  r.support_violation = block::support_violation(rho.op(), sd);
  if (alpha > 1.0) {
    if (r.support_violation > kSupportViolationTol) {
      r.value = kInf;
      return r;
    }
  } else if (rho.op().trace_product(sigma) <= 1e-14 * sd.lambda_max()) {
    // tr ρσ = 0: orthogonal supports.
    r.value = kInf;
    return r;
  }
  const double lq = block::log2_q(rho.op(), sd, alpha);
  r.value = lq == -kInf ? kInf : lq / (alpha - 1.0);
  return r;
}

DivergenceResult d_max(const StateDescriptor& rho, const HermitianOperator& sigma) {
  require_same_dim(rho.op(), sigma, "d_max");
  require_psd(sigma, "d_max");
  const SpectralDecomposition sd = eig(sigma);
  DivergenceResult r;
  r.support_violation = block::support_violation(rho.op(), sd);
  r.value = r.support_violation > kSupportViolationTol ? kInf : block::log2_max_ratio(rho.op(), sd);
  return r;
}

double renyi_limit_gap(const StateDescriptor& rho, const HermitianOperator& sigma, double delta) {
  const double d = relative_entropy(rho, sigma).value;
  const double lo = sandwiched_renyi(rho, sigma, 1.0 - delta).value;
  const double hi = sandwiched_renyi(rho, sigma, 1.0 + delta).value;
  if (d == kInf) return (lo == kInf || hi == kInf) ? 0.0 : kInf;
  return std::max(std::abs(lo - d), std::abs(hi - d));
}

double renyi_conditional_entropy(const CQState& rho_xe, double alpha) {
  if (!(alpha > 0.0)) Fail(ErrorCode::kInvalidArgument, "Renyi order must be positive");
  const SpectralDecomposition e = eig(rho_xe.marginal_e());
  if (alpha == 1.0) {
    double d = 0.0;
    for (std::size_t x = 0; x < rho_xe.size(); ++x) {
      if (rho_xe.probs()[x] > 0.0) d += block::relative_entropy_term(rho_xe.block(x), e);
    }
    return -d;
  }
  if (alpha == kInf) {
    double top = -kInf;
    for (std::size_t x = 0; x < rho_xe.size(); ++x) {
      if (rho_xe.probs()[x] > 0.0) top = std::max(top, block::log2_max_ratio(rho_xe.block(x), e));
    }
    return -top;
  }
  const HermitianOperator sg = mat_power(e, (1.0 - alpha) / (2.0 * alpha));
  std::vector<double> terms;
  for (std::size_t x = 0; x < rho_xe.size(); ++x) {
    if (rho_xe.probs()[x] > 0.0) terms.push_back(block::log2_q_with_power(rho_xe.block(x), sg, alpha));
  }
  return -block::log2_sum_exp2(terms) / (alpha - 1.0);
}

double conditional_entropy(const CQState& rho_xe) { return renyi_conditional_entropy(rho_xe, 1.0); }

double conditional_min_entropy(const CQState& rho_xe) {
  return renyi_conditional_entropy(rho_xe, kInf);
}

HermitianOperator partial_trace_first(const HermitianOperator& rho_ab, std::size_t dim_a,
                                      std::size_t dim_b) {
  if (rho_ab.dim() != dim_a * dim_b) {
    Fail(ErrorCode::kDimensionMismatch, "partial trace: dim_a * dim_b does not match the state");
  }
  const auto da = static_cast<Eigen::Index>(dim_a);
  const auto db = static_cast<Eigen::Index>(dim_b);
  Matrix out = Matrix::Zero(db, db);
  for (Eigen::Index i = 0; i < da; ++i) out += rho_ab.matrix().block(i * db, i * db, db, db);
  return HermitianOperator(out);
}

double renyi_conditional_entropy(const StateDescriptor& rho_ab, std::size_t dim_a,
                                 std::size_t dim_b, double alpha) {
  if (!(alpha > 0.0)) Fail(ErrorCode::kInvalidArgument, "Renyi order must be positive");
  const HermitianOperator ref =
      kron(HermitianOperator::Identity(dim_a), partial_trace_first(rho_ab.op(), dim_a, dim_b));
  if (alpha == 1.0) return -relative_entropy(rho_ab, ref).value;
  if (alpha == kInf) return -d_max(rho_ab, ref).value;
  return -sandwiched_renyi(rho_ab, ref, alpha).value;
}

}  // namespace qpa
