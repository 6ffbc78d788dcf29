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

#include "qpa/cq_state.hpp"

#include <cmath>
#include <sstream>

#include "qpa/error.hpp"

namespace qpa {

namespace {

std::vector<std::string> default_labels(std::size_t n) {
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(std::to_string(i));
  return out;
}

}  // namespace

CQState::CQState(std::vector<std::string> symbols, std::vector<double> probs,
                 std::vector<HermitianOperator> conditionals)
    : symbols_(std::move(symbols)), probs_(std::move(probs)), conditionals_(std::move(conditionals)) {
  if (symbols_.empty()) symbols_ = default_labels(probs_.size());
  if (probs_.empty()) Fail(ErrorCode::kInvalidArgument, "CQ state needs at least one symbol");
  if (symbols_.size() != probs_.size() || conditionals_.size() != probs_.size()) {
    Fail(ErrorCode::kDimensionMismatch, "CQ state: symbols, probs and conditionals differ in length");
  }
  double total = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0)) Fail(ErrorCode::kInvalidArgument, "CQ state: negative probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    std::ostringstream msg;
    msg << "CQ state: probabilities sum to " << total;
    Fail(ErrorCode::kInvalidArgument, msg.str());
  }
  const std::size_t d = conditionals_.front().dim();
  for (std::size_t x = 0; x < conditionals_.size(); ++x) {
    if (conditionals_[x].dim() != d) {
      Fail(ErrorCode::kDimensionMismatch, "CQ state: conditional states differ in dimension");
    }
    try {
      StateDescriptor check(conditionals_[x]);
    } catch (const Error& e) {
      Fail(e.code(), "CQ state: conditional for symbol '" + symbols_[x] + "': " + e.what());
    }
  }
}

CQState::CQState(std::vector<double> probs, std::vector<HermitianOperator> conditionals)
    : CQState({}, std::move(probs), std::move(conditionals)) {}

CQState CQState::Classical(std::vector<double> probs) {
  return Product(std::move(probs), HermitianOperator::Identity(1));
}

CQState CQState::Product(std::vector<double> probs, const HermitianOperator& rho_e) {
  std::vector<HermitianOperator> cond(probs.size(), rho_e);
  return CQState(std::move(probs), std::move(cond));
}

HermitianOperator CQState::marginal_e() const {
  Matrix m = Matrix::Zero(dim_e(), dim_e());
  for (std::size_t x = 0; x < size(); ++x) m += probs_[x] * conditionals_[x].matrix();
  return HermitianOperator(m);
}

HermitianOperator CQState::to_dense() const {
  const auto d = static_cast<Eigen::Index>(dim_e());
  Matrix m = Matrix::Zero(d * size(), d * size());
  for (std::size_t x = 0; x < size(); ++x) {
    const auto o = static_cast<Eigen::Index>(x) * d;
    m.block(o, o, d, d) = probs_[x] * conditionals_[x].matrix();
  }
  return HermitianOperator(m);
}

HermitianOperator CQState::reference() const {
  return kron(HermitianOperator::Identity(size()), marginal_e());
}

CQState CQState::tensor_power(int n, std::size_t e_dim_budget) const {
  if (n < 1) Fail(ErrorCode::kInvalidArgument, "tensor_power: n must be positive");
  double e_dim = 1.0;
  double x_size = 1.0;
  for (int k = 0; k < n; ++k) {
    e_dim *= static_cast<double>(dim_e());
    x_size *= static_cast<double>(size());
  }
  if (e_dim > static_cast<double>(e_dim_budget)) {
    std::ostringstream msg;
    msg << "dim(E)^n = " << e_dim << " exceeds the side-information budget " << e_dim_budget;
    Fail(ErrorCode::kBudgetExceeded, msg.str());
  }
  if (x_size > 1e6) Fail(ErrorCode::kBudgetExceeded, "|X|^n exceeds 10^6 symbols");

  std::vector<std::string> sym = symbols_;
  std::vector<double> p = probs_;
  std::vector<HermitianOperator> cond = conditionals_;
  for (int k = 1; k < n; ++k) {
    std::vector<std::string> nsym;
    std::vector<double> np;
    std::vector<HermitianOperator> ncond;
    for (std::size_t a = 0; a < sym.size(); ++a) {
      for (std::size_t b = 0; b < size(); ++b) {
        nsym.push_back(sym[a] + "," + symbols_[b]);
        np.push_back(p[a] * probs_[b]);
        ncond.push_back(is_classical() ? cond[a] : kron(cond[a], conditionals_[b]));
      }
    }
    sym = std::move(nsym);
    p = std::move(np);
    cond = std::move(ncond);
  }
  return CQState(std::move(sym), std::move(p), std::move(cond));
}

bool CQState::commutes_with_reference(double tol) const {
  const HermitianOperator rho_e = marginal_e();
  for (const auto& c : conditionals_) {
    if (commutator_norm(c, rho_e) > tol) return false;
  }
  return true;
}

}  // namespace qpa
