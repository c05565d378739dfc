// Copyright 2026 The dhsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Dense complex linear algebra shared by the state-vector oracle, the dense
// descriptor backend and the reconstruction outputs.
//
// Basis ordering: qubit k (1-based) is bit k-1 of a basis index, so qubit 1
// is the least significant bit. Every dense object in the project uses this.

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <string>

namespace dh {

using Complex = std::complex<double>;

template <typename Scalar>
using ComplexMatrix =
    Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using ComplexVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

using Matrix = ComplexMatrix<double>;
using Vector = ComplexVector<double>;

inline constexpr int kDefaultDenseQubits = 10;

/// Dense cap in qubits; `DH_DENSE_BUDGET` overrides the default of 10.
int dense_budget_from_env();

/// Throws BudgetError when a 2^n x 2^n object over `n` qubits is not allowed.
void check_dense_budget(int n, int budget, const std::string& what);

/// 2x2 matrix of sigma_m, m in {0,1,2,3} = {I,X,Y,Z}.
Eigen::Matrix2cd pauli_matrix(int m);

template <typename Derived>
bool is_unitary(const Eigen::MatrixBase<Derived>& m, double tol = 1e-10) {
  if (m.rows() != m.cols()) return false;
  const auto eye = Derived::PlainObject::Identity(m.rows(), m.cols());
  return ((m.adjoint() * m).eval() - eye).cwiseAbs().maxCoeff() <= tol;
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m, double tol = 1e-10) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

/// Half the trace norm of the Hermitian part of (a - b).
template <typename DerivedA, typename DerivedB>
double trace_distance(const Eigen::MatrixBase<DerivedA>& a,
                      const Eigen::MatrixBase<DerivedB>& b) {
  using Plain = typename DerivedA::PlainObject;
  Plain diff = a - b;
  Plain herm = (diff + diff.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Plain> solver(herm, Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

/// Hermitian, unit trace and positive semidefinite, each to `tol`.
template <typename Derived>
bool is_density_matrix(const Eigen::MatrixBase<Derived>& m, double tol = 1e-10) {
  using Plain = typename Derived::PlainObject;
  if (!is_hermitian(m, tol)) return false;
  if (std::abs(m.trace() - typename Derived::Scalar(1.0)) > tol) return false;
  Plain herm = (m + m.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Plain> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff() >= -tol;
}

}  // namespace dh
