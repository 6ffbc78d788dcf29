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

#include "qpa/operator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qpa/error.hpp"

namespace qpa {

namespace {

double scale_of(double lambda_max) { return std::max(1.0, std::abs(lambda_max)); }

}  // namespace

HermitianOperator::HermitianOperator(const Matrix& m) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    Fail(ErrorCode::kInvalidArgument, "operator must be a non-empty square matrix");
  }
  const double defect = (m - m.adjoint()).cwiseAbs().maxCoeff();
  const double size = m.cwiseAbs().maxCoeff();
  if (!std::isfinite(size) || defect > kHermitianTol * (1.0 + size)) {
    std::ostringstream msg;
    msg << "matrix is not Hermitian: max |A - A^dagger| = " << defect;
    Fail(ErrorCode::kInvalidArgument, msg.str());
  }
  m_ = (m + m.adjoint()) * 0.5;
}

HermitianOperator::HermitianOperator(Matrix m, Trusted) : m_(std::move(m)) {
  m_ = (m_ + m_.adjoint()).eval() * 0.5;
}

HermitianOperator HermitianOperator::Diagonal(std::span<const double> diag) {
  if (diag.empty()) Fail(ErrorCode::kInvalidArgument, "empty diagonal");
  Matrix m = Matrix::Zero(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return HermitianOperator(std::move(m), Trusted{});
}

HermitianOperator HermitianOperator::Diagonal(std::initializer_list<double> diag) {
  return Diagonal(std::span<const double>(diag.begin(), diag.size()));
}

HermitianOperator HermitianOperator::Identity(std::size_t dim) {
  if (dim == 0) Fail(ErrorCode::kInvalidArgument, "dimension must be positive");
  return HermitianOperator(Matrix::Identity(dim, dim), Trusted{});
}

HermitianOperator HermitianOperator::Zero(std::size_t dim) {
  if (dim == 0) Fail(ErrorCode::kInvalidArgument, "dimension must be positive");
  return HermitianOperator(Matrix::Zero(dim, dim), Trusted{});
}

double HermitianOperator::trace_product(const HermitianOperator& other) const {
  if (other.dim() != dim()) Fail(ErrorCode::kDimensionMismatch, "trace_product: dimension mismatch");
  // tr(AB) = Σ_ij A_ij B_ji = Σ_ij A_ij conj(B_ij) for Hermitian B.
  return (m_.array() * other.m_.array().conjugate()).sum().real();
}

HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() != b.dim()) Fail(ErrorCode::kDimensionMismatch, "operator sum: dimension mismatch");
  return HermitianOperator(a.m_ + b.m_, HermitianOperator::Trusted{});
}

HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() != b.dim()) Fail(ErrorCode::kDimensionMismatch, "operator difference: dimension mismatch");
  return HermitianOperator(a.m_ - b.m_, HermitianOperator::Trusted{});
}

HermitianOperator operator*(double c, const HermitianOperator& a) {
  return HermitianOperator(a.m_ * c, HermitianOperator::Trusted{});
}

double SpectralDecomposition::cluster_value(std::size_t c) const {
  double sum = 0.0;
  for (std::size_t i : clusters.at(c)) sum += eigenvalues(static_cast<Eigen::Index>(i));
  return sum / static_cast<double>(clusters[c].size());
}

Matrix SpectralDecomposition::cluster_basis(std::size_t c) const {
  const auto& idx = clusters.at(c);
  Matrix basis(eigenvectors.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) {
    basis.col(static_cast<Eigen::Index>(k)) = eigenvectors.col(static_cast<Eigen::Index>(idx[k]));
  }
  return basis;
}

Matrix SpectralDecomposition::cluster_projector(std::size_t c) const {
  Matrix basis = cluster_basis(c);
  return basis * basis.adjoint();
}

Matrix SpectralDecomposition::apply(const std::function<double(double)>& f) const {
  RealVector mapped(eigenvalues.size());
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) mapped(i) = f(eigenvalues(i));
  return eigenvectors * mapped.cast<std::complex<double>>().asDiagonal() * eigenvectors.adjoint();
}

Matrix SpectralDecomposition::reconstruct() const {
  return apply([](double x) { return x; });
}

SpectralDecomposition eig(const HermitianOperator& a, double cluster_tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix());
  if (solver.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "eigensolver did not converge (dim " << a.dim() << ", max |entry| " << a.max_abs()
        << ", Frobenius norm " << a.matrix().norm() << ")";
    Fail(ErrorCode::kNotConverged, msg.str());
  }
  const Eigen::Index n = a.matrix().rows();
  SpectralDecomposition d;
  d.cluster_tol = cluster_tol;
  d.eigenvalues = solver.eigenvalues().reverse();
  d.eigenvectors = solver.eigenvectors().rowwise().reverse();

  const double gap = cluster_tol * scale_of(d.eigenvalues(0));
  d.clusters.push_back({0});
  for (Eigen::Index i = 1; i < n; ++i) {
    if (d.eigenvalues(i - 1) - d.eigenvalues(i) <= gap) {
      d.clusters.back().push_back(static_cast<std::size_t>(i));
    } else {
      d.clusters.push_back({static_cast<std::size_t>(i)});
    }
  }
  return d;
}

HermitianOperator mat_power(const SpectralDecomposition& d, double t, double support_cut) {
  const double lmax = d.lambda_max();
  if (lmax <= 0.0) {
    if (t < 0.0) Fail(ErrorCode::kInvalidArgument, "zero operator has no negative power");
    return HermitianOperator::Zero(d.dim());
  }
  const double cut = support_cut * lmax;
  return HermitianOperator(d.apply([&](double x) { return x > cut ? std::pow(x, t) : 0.0; }));
}

HermitianOperator mat_power(const HermitianOperator& a, double t, double support_cut) {
  if (!(support_cut > 0.0 && support_cut < 1.0)) {
    Fail(ErrorCode::kInvalidArgument, "support_cut must lie in (0,1)");
  }
  return mat_power(eig(a), t, support_cut);
}

HermitianOperator support_projector(const HermitianOperator& a, double support_cut) {
  return mat_power(a, 0.0, support_cut);
}

HermitianOperator pinching(const HermitianOperator& x, const HermitianOperator& sigma,
                           double cluster_tol) {
  if (x.dim() != sigma.dim()) Fail(ErrorCode::kDimensionMismatch, "pinching: dimension mismatch");
  const SpectralDecomposition d = eig(sigma, cluster_tol);
  Matrix out = Matrix::Zero(x.dim(), x.dim());
  for (std::size_t c = 0; c < d.distinct_count(); ++c) {
    const Matrix p = d.cluster_projector(c);
    out += p * x.matrix() * p;
  }
  return HermitianOperator(out);
}

double positive_part_trace(const HermitianOperator& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix(), Eigen::EigenvaluesOnly);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    sum += std::max(0.0, solver.eigenvalues()(i));
  }
  return sum;
}

HermitianOperator positive_projector(const HermitianOperator& a) {
  return HermitianOperator(eig(a).apply([](double x) { return x > 0.0 ? 1.0 : 0.0; }));
}

double min_eigenvalue(const HermitianOperator& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

double max_eigenvalue(const HermitianOperator& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(solver.eigenvalues().size() - 1);
}

bool is_psd(const HermitianOperator& a, double tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix(), Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return ev(0) >= -tol * scale_of(ev(ev.size() - 1));
}

double commutator_norm(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() != b.dim()) Fail(ErrorCode::kDimensionMismatch, "commutator: dimension mismatch");
  return (a.matrix() * b.matrix() - b.matrix() * a.matrix()).cwiseAbs().maxCoeff();
}

HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b) {
  const Eigen::Index da = a.matrix().rows();
  const Eigen::Index db = b.matrix().rows();
  Matrix out(da * db, da * db);
  for (Eigen::Index i = 0; i < da; ++i) {
    for (Eigen::Index j = 0; j < da; ++j) {
      out.block(i * db, j * db, db, db) = a.matrix()(i, j) * b.matrix();
    }
  }
  return HermitianOperator(out);
}

HermitianOperator tensor_power(const HermitianOperator& a, int n, std::size_t budget) {
  if (n < 1) Fail(ErrorCode::kInvalidArgument, "tensor_power: n must be positive");
  double total = 1.0;
  for (int k = 0; k < n; ++k) total *= static_cast<double>(a.dim());
  if (total > static_cast<double>(budget)) {
    std::ostringstream msg;
    msg << "tensor power dimension " << total << " exceeds budget " << budget
        << "; use the SpectrumDistribution fast path for i.i.d. quantities";
    Fail(ErrorCode::kBudgetExceeded, msg.str());
  }
  HermitianOperator out = a;
  for (int k = 1; k < n; ++k) out = kron(out, a);
  return out;
}

namespace {

void enumerate_compositions(int remaining, std::size_t slot, std::vector<int>& counts,
                            const std::vector<double>& log_values, std::vector<double>& out) {
  if (slot + 1 == counts.size()) {
    counts[slot] = remaining;
    double s = 0.0;
    for (std::size_t j = 0; j < counts.size(); ++j) s += counts[j] * log_values[j];
    out.push_back(s);
    return;
  }
  for (int c = remaining; c >= 0; --c) {
    counts[slot] = c;
    enumerate_compositions(remaining - c, slot + 1, counts, log_values, out);
  }
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

std::size_t distinct_eigenvalue_count_iid(const HermitianOperator& sigma, int n,
                                          double cluster_tol) {
  if (n < 1) Fail(ErrorCode::kInvalidArgument, "distinct_eigenvalue_count_iid: n must be positive");
  const SpectralDecomposition d = eig(sigma, cluster_tol);
  const double zero_band = cluster_tol * scale_of(d.lambda_max());
  std::vector<double> log_values;
  bool has_zero = false;
  for (std::size_t c = 0; c < d.distinct_count(); ++c) {
    const double v = d.cluster_value(c);
    if (std::abs(v) <= zero_band) {
      has_zero = true;
    } else {
      log_values.push_back(std::log(std::abs(v)));
    }
  }
  if (log_values.empty()) return 1;

  const int k = static_cast<int>(log_values.size());
  if (binomial(n + k - 1, k - 1) > 1e7) {
    Fail(ErrorCode::kBudgetExceeded, "distinct_eigenvalue_count_iid: too many type classes");
  }
  std::vector<double> products;
  std::vector<int> counts(log_values.size(), 0);
  enumerate_compositions(n, 0, counts, log_values, products);
  std::sort(products.begin(), products.end());
  std::size_t distinct = 1;
  for (std::size_t i = 1; i < products.size(); ++i) {
    if (products[i] - products[i - 1] > cluster_tol) ++distinct;
  }
  return distinct + (has_zero ? 1 : 0);
}

StateDescriptor::StateDescriptor(HermitianOperator op, StateKind kind)
    : op_(std::move(op)), kind_(kind) {
  if (!is_psd(op_)) {
    std::ostringstream msg;
    msg << "state is not positive semidefinite (min eigenvalue " << min_eigenvalue(op_) << ")";
    Fail(ErrorCode::kInvalidArgument, msg.str());
  }
  const double tr = op_.trace();
  if (kind_ == StateKind::kNormalized && std::abs(tr - 1.0) > 1e-9) {
    std::ostringstream msg;
    msg << "normalized state has trace " << tr;
    Fail(ErrorCode::kInvalidArgument, msg.str());
  }
  if (kind_ == StateKind::kSubnormalized && tr > 1.0 + 1e-9) {
    std::ostringstream msg;
    msg << "subnormalized state has trace " << tr << " > 1";
    Fail(ErrorCode::kInvalidArgument, msg.str());
  }
}

}  // namespace qpa
