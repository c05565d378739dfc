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

// Reference helpers for tests, built from textbook matrices and explicit
// Kronecker products.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dhsim/circuit.hpp"

namespace dh::testing {

using Cx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Mat sigma(char letter) {
  Mat m(2, 2);
  switch (letter) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, Cx(0, -1), Cx(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("bad letter");
  }
  return m;
}

// Text lists qubit 1 first and qubit 1 is the least significant bit, so the
// Kronecker product runs from the last letter to the first.
inline Mat pauli_dense(const std::string& text) {
  Mat out = Mat::Identity(1, 1);
  for (char c : text) out = kron(sigma(c), out);
  return out;
}

inline Mat textbook_gate(GateKind kind, double a = 0.0) {
  const Cx i(0, 1);
  const double c = std::cos(a / 2), s = std::sin(a / 2);
  Mat m;
  switch (kind) {
    case GateKind::H: m = Mat(2, 2); m << 1, 1, 1, -1; return m / std::sqrt(2.0);
    case GateKind::X: return sigma('X');
    case GateKind::Y: return sigma('Y');
    case GateKind::Z: return sigma('Z');
    case GateKind::S: m = Mat(2, 2); m << 1, 0, 0, i; return m;
    case GateKind::PHASE: m = Mat(2, 2); m << 1, 0, 0, std::exp(i * a); return m;
    case GateKind::RX: m = Mat(2, 2); m << c, -i * s, -i * s, c; return m;
    case GateKind::RY: m = Mat(2, 2); m << c, -s, s, c; return m;
    case GateKind::RZ: m = Mat(2, 2); m << std::exp(-i * a / 2.0), 0, 0, std::exp(i * a / 2.0); return m;
    case GateKind::CNOT: {
      // control = first listed qubit = low local bit
      const Mat p0 = (sigma('I') + sigma('Z')) / 2.0, p1 = (sigma('I') - sigma('Z')) / 2.0;
      return kron(sigma('I'), p0) + kron(sigma('X'), p1);
    }
    case GateKind::CZ: m = Mat::Identity(4, 4); m(3, 3) = -1; return m;
    default: throw std::invalid_argument("no textbook matrix");
  }
}

// Full 2^n operator for a 1- or 2-qubit gate, built with Kronecker products
// and, for two-qubit gates, a SWAP network when the qubits are not adjacent.
inline Mat embed(int n, const std::vector<int>& qubits, const Mat& g) {
  if (qubits.size() == 1) {
    Mat out = Mat::Identity(1, 1);
    for (int q = n; q >= 1; --q) out = kron(out, q == qubits[0] ? g : sigma('I'));
    return out;
  }
  // Permutation matrix moving qubit a to position 1 and b to position 2.
  const int a = qubits[0], b = qubits[1];
  const std::size_t dim = std::size_t{1} << n;
  Mat perm = Mat::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  std::vector<int> order;  // order[k] = original qubit sitting at position k+1
  order.push_back(a);
  order.push_back(b);
  for (int q = 1; q <= n; ++q)
    if (q != a && q != b) order.push_back(q);
  for (std::size_t src = 0; src < dim; ++src) {
    std::size_t dst = 0;
    for (int k = 0; k < n; ++k)
      if ((src >> (order[static_cast<std::size_t>(k)] - 1)) & 1U) dst |= std::size_t{1} << k;
    perm(static_cast<Eigen::Index>(dst), static_cast<Eigen::Index>(src)) = 1;
  }
  const Mat local = n > 2 ? kron(Mat::Identity(Eigen::Index{1} << (n - 2), Eigen::Index{1} << (n - 2)), g) : g;
  return perm.adjoint() * local * perm;
}

inline Mat circuit_unitary(const BoundCircuit& c) {
  const Eigen::Index dim = Eigen::Index{1} << c.n;
  Mat u = Mat::Identity(dim, dim);
  for (const auto& g : c.gates) u = embed(c.n, g.qubits, g.matrix) * u;
  return u;
}

inline Vec basis_zero(int n) {
  Vec v = Vec::Zero(Eigen::Index{1} << n);
  v(0) = 1;
  return v;
}

inline Mat reference_density(const BoundCircuit& c) {
  const Vec psi = circuit_unitary(c) * basis_zero(c.n);
  return psi * psi.adjoint();
}

// Reduced state by explicit summation over the traced indices.
inline Mat reference_reduced(const Mat& rho, int n, const std::vector<int>& keep) {
  const std::size_t k = keep.size();
  Mat out = Mat::Zero(Eigen::Index{1} << k, Eigen::Index{1} << k);
  for (std::size_t r = 0; r < (std::size_t{1} << n); ++r)
    for (std::size_t c = 0; c < (std::size_t{1} << n); ++c) {
      bool same_rest = true;
      for (int q = 1; q <= n; ++q) {
        if (std::find(keep.begin(), keep.end(), q) != keep.end()) continue;
        if (((r >> (q - 1)) & 1U) != ((c >> (q - 1)) & 1U)) same_rest = false;
      }
      if (!same_rest) continue;
      std::size_t lr = 0, lc = 0;
      for (std::size_t j = 0; j < k; ++j) {
        lr |= ((r >> (keep[j] - 1)) & 1U) << j;
        lc |= ((c >> (keep[j] - 1)) & 1U) << j;
      }
      out(static_cast<Eigen::Index>(lr), static_cast<Eigen::Index>(lc)) +=
          rho(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  return out;
}

inline double reference_trace_distance(const Mat& a, const Mat& b) {
  Eigen::SelfAdjointEigenSolver<Mat> es(a - b);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

inline const std::vector<GateKind>& standard_gate_set() {
  static const std::vector<GateKind> set{GateKind::H,    GateKind::S,  GateKind::X,  GateKind::Y,
                                         GateKind::Z,    GateKind::CNOT, GateKind::CZ, GateKind::RY,
                                         GateKind::RZ,   GateKind::PHASE};
  return set;
}

inline const std::vector<GateKind>& clifford_gate_set() {
  static const std::vector<GateKind> set{GateKind::H, GateKind::S, GateKind::X, GateKind::Y,
                                         GateKind::Z, GateKind::CNOT, GateKind::CZ};
  return set;
}

// Random circuit with concrete angles. When `symbols` is non-empty, about
// half the rotations use a random symbol with a random coefficient.
inline Circuit random_circuit(std::mt19937_64& rng, int n, int depth, const std::vector<GateKind>& gates,
                              const std::vector<std::string>& symbols = {}) {
  Circuit c(n);
  for (const auto& s : symbols) c.declare(s);
  std::uniform_int_distribution<int> pick_gate(0, static_cast<int>(gates.size()) - 1);
  std::uniform_int_distribution<int> pick_qubit(1, n);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  std::bernoulli_distribution use_symbol(0.5);
  for (int k = 0; k < depth; ++k) {
    GateKind kind = gates[static_cast<std::size_t>(pick_gate(rng))];
    if (n == 1 && arity(kind) == 2) kind = GateKind::H;
    const int q = pick_qubit(rng);
    if (arity(kind) == 2) {
      int r = pick_qubit(rng);
      while (r == q) r = pick_qubit(rng);
      c.add(Gate::fixed(kind, {q, r}));
    } else if (is_parametric(kind)) {
      if (!symbols.empty() && use_symbol(rng)) {
        std::uniform_int_distribution<std::size_t> pick_sym(0, symbols.size() - 1);
        c.add(Gate::rotation(kind, q, Angle::of(symbols[pick_sym(rng)], std::round(angle(rng) * 4) / 4)));
      } else {
        c.add(Gate::rotation(kind, q, Angle::fixed(angle(rng))));
      }
    } else {
      c.add(Gate::fixed(kind, {q}));
    }
  }
  return c;
}

}  // namespace dh::testing
