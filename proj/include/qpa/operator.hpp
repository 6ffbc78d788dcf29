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

// Dense Hermitian linear algebra: spectral decomposition, matrix functions
// restricted to the support, Kronecker powers, pinching and positive parts.
//
// All arithmetic is double precision. Tolerances are explicit parameters with
// the defaults below; anything that depends on the number of distinct
// eigenvalues takes the clustering tolerance as an argument so callers can
// record it next to the result.

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qpa {

using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kClusterTol = 1e-9;
inline constexpr double kSupportCut = 1e-12;
inline constexpr std::size_t kTensorBudget = 4096;

class HermitianOperator {
 public:
  // Rejects ‖A − A†‖_max > 1e-10·(1 + ‖A‖_max); below that the entries are
  // replaced by (A + A†)/2.
  explicit HermitianOperator(const Matrix& m);

  static HermitianOperator Diagonal(std::span<const double> diag);
  static HermitianOperator Diagonal(std::initializer_list<double> diag);
  static HermitianOperator Identity(std::size_t dim);
  static HermitianOperator Zero(std::size_t dim);

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  double trace() const { return m_.trace().real(); }
  double max_abs() const { return m_.cwiseAbs().maxCoeff(); }

  // Expectation tr(A·B) for another Hermitian operator; real by Hermiticity.
  double trace_product(const HermitianOperator& other) const;

  friend HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b);
  friend HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b);
  friend HermitianOperator operator*(double c, const HermitianOperator& a);

 private:
  struct Trusted {};
  HermitianOperator(Matrix m, Trusted);

  Matrix m_;
};

struct SpectralDecomposition {
  RealVector eigenvalues;  // descending
  Matrix eigenvectors;     // columns, same order as eigenvalues
  std::vector<std::vector<std::size_t>> clusters;
  double cluster_tol = kClusterTol;

  std::size_t dim() const { return static_cast<std::size_t>(eigenvalues.size()); }
  // v(A): the number of distinct eigenvalues at cluster_tol.
  std::size_t distinct_count() const { return clusters.size(); }
  double cluster_value(std::size_t c) const;
  // Orthonormal basis (columns) of the c-th eigenspace.
  Matrix cluster_basis(std::size_t c) const;
  Matrix cluster_projector(std::size_t c) const;
  double lambda_max() const { return eigenvalues.size() ? eigenvalues(0) : 0.0; }

  // Σ_i f(λ_i)|v_i⟩⟨v_i|.
  Matrix apply(const std::function<double(double)>& f) const;
  Matrix reconstruct() const;
};

SpectralDecomposition eig(const HermitianOperator& a, double cluster_tol = kClusterTol);

// Σ_{λ_i > cut·λ_max} λ_i^t P_i. Zero eigenvalues map to zero for every t.
HermitianOperator mat_power(const HermitianOperator& a, double t,
                            double support_cut = kSupportCut);
HermitianOperator mat_power(const SpectralDecomposition& d, double t,
                            double support_cut = kSupportCut);

// Projector onto the eigenvectors with λ_i > cut·λ_max.
HermitianOperator support_projector(const HermitianOperator& a,
                                    double support_cut = kSupportCut);

// E_σ(X) = Σ_i P_i X P_i over the spectral projections of sigma.
HermitianOperator pinching(const HermitianOperator& x, const HermitianOperator& sigma,
                           double cluster_tol = kClusterTol);

// tr A_+ = Σ_{λ_i > 0} λ_i.
double positive_part_trace(const HermitianOperator& a);

// The spectral projection {A > 0}.
HermitianOperator positive_projector(const HermitianOperator& a);

double min_eigenvalue(const HermitianOperator& a);
double max_eigenvalue(const HermitianOperator& a);
bool is_psd(const HermitianOperator& a, double tol = kPsdTol);

// ‖AB − BA‖_max.
double commutator_norm(const HermitianOperator& a, const HermitianOperator& b);

HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b);
HermitianOperator tensor_power(const HermitianOperator& a, int n,
                               std::size_t budget = kTensorBudget);

// v(σ^{⊗n}) from the clustered spectrum of sigma by enumerating type classes.
std::size_t distinct_eigenvalue_count_iid(const HermitianOperator& sigma, int n,
                                          double cluster_tol = kClusterTol);

enum class StateKind { kNormalized, kSubnormalized };

// A positive semidefinite operator with trace 1 (normalized) or at most 1.
class StateDescriptor {
 public:
  StateDescriptor(HermitianOperator op, StateKind kind = StateKind::kNormalized);

  const HermitianOperator& op() const { return op_; }
  StateKind kind() const { return kind_; }
  std::size_t dim() const { return op_.dim(); }
  double trace() const { return op_.trace(); }

 private:
  HermitianOperator op_;
  StateKind kind_;
};

}  // namespace qpa
