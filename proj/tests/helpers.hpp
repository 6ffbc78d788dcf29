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

// Small builders shared by the unit tests.

#pragma once

#include <complex>
#include <initializer_list>
#include <vector>

#include "qpa/operator.hpp"

namespace qpa::test {

inline HermitianOperator diag(std::initializer_list<double> d) { return HermitianOperator::Diagonal(d); }

inline StateDescriptor state(std::initializer_list<double> d) { return StateDescriptor(diag(d)); }

inline StateDescriptor state(const HermitianOperator& op) { return StateDescriptor(op); }

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

inline HermitianOperator conjugate(const Matrix& u, const HermitianOperator& a) {
  Matrix m = u * a.matrix() * u.adjoint();
  return HermitianOperator((m + m.adjoint()) * 0.5);
}

}  // namespace qpa::test
