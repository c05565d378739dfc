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

// Heisenberg-picture descriptors.
//
// Qubit i carries the triple q_i(t) = (q_ix, q_iy, q_iz) with
// q_im(t) = U(t)^dagger (I x ... x sigma_m on i x ... x I) U(t), stored as
// Pauli sums over all n qubits. A gate g applied at step t updates the
// descriptors of its support by substitution: if g^dagger sigma g = sum_P c_P P
// for a local string P, then q(t) = sum_P c_P prod_j q_{j,P_j}(t-1). This is
// U(t)^dagger sigma U(t) with U(t) = g U(t-1), by the homomorphism property
// of conjugation. Descriptors of qubits outside the support are unchanged.

#include <json.hpp>

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "dhsim/circuit.hpp"
#include "dhsim/pauli.hpp"

namespace dh {

enum class Backend {
  pauli,  // substitution through rewrite tables
  dense,  // 2^n x 2^n conjugation, decomposed back into Pauli sums
};

struct EngineOptions {
  std::size_t max_terms = kDefaultMaxTerms;
  int dense_budget = kDefaultDenseQubits;
};

struct Descriptor {
  int qubit;
  std::array<PauliSum, 3> components;  // x, y, z

  /// m in {1, 2, 3} = {x, y, z}.
  const PauliSum& component(int m) const { return components.at(static_cast<std::size_t>(m - 1)); }
};

/// Images g^dagger P g of every non-identity local string P on a 1- or
/// 2-qubit gate, expressed over local strings. Coefficients within 1e-12 of
/// 0, +-1, +-1/2 or +-1/sqrt(2) are snapped to those values.
class RewriteTable {
 public:
  /// Throws std::invalid_argument unless `gate` is a 2x2 or 4x4 unitary to
  /// 1e-10.
  static RewriteTable build(const Matrix& gate);

  int arity() const noexcept { return arity_; }
  /// Image of a local string (size == arity()).
  const PauliSum& image(const PauliString& local) const;

 private:
  int arity_ = 1;
  std::vector<PauliSum> images_;  // indexed by x | z << arity
};

inline RewriteTable build_rewrite_table(const BoundGate& gate) {
  return RewriteTable::build(gate.matrix);
}

/// An immutable snapshot of the network's descriptors after `step` gates.
class NetworkState {
 public:
  int size() const noexcept { return n_; }
  std::size_t step() const noexcept { return history_.size(); }
  Backend backend() const noexcept { return backend_; }
  const std::vector<Descriptor>& descriptors() const noexcept { return descriptors_; }
  const Descriptor& descriptor(int qubit) const { return descriptors_.at(static_cast<std::size_t>(qubit - 1)); }
  /// q_{qubit,m}; m = 0 is the identity.
  const PauliSum& component(int qubit, int m) const;
  const std::vector<BoundGate>& history() const noexcept { return history_; }

 private:
  friend NetworkState init_network(int n, Backend backend, const EngineOptions& options);
  friend NetworkState apply_gate(const NetworkState& state, const BoundGate& gate,
                                 const EngineOptions& options);
  friend NetworkState gauge_conjugate(const NetworkState& state, const BoundGate& v,
                                      const EngineOptions& options);

  NetworkState(int n, Backend backend);

  int n_;
  Backend backend_;
  PauliSum identity_;
  std::vector<Descriptor> descriptors_;
  std::vector<BoundGate> history_;
  Matrix unitary_;  // dense backend only
};

/// Descriptors at step 0: q_im = sigma_m on qubit i. Throws BudgetError when
/// n exceeds the backend's maximum (64 for pauli, the dense budget for dense).
NetworkState init_network(int n, Backend backend = Backend::pauli, const EngineOptions& options = {});
NetworkState apply_gate(const NetworkState& state, const BoundGate& gate, const EngineOptions& options = {});
NetworkState evolve(const BoundCircuit& circuit, Backend backend = Backend::pauli,
                    const EngineOptions& options = {});

/// Conjugates every descriptor component by V (given as a bound gate):
/// q -> V^dagger q V. Equivalent to running V before the recorded history.
/// The step count and history are unchanged.
NetworkState gauge_conjugate(const NetworkState& state, const BoundGate& v, const EngineOptions& options = {});

/// U^dagger A U for an observable A written over the step-0 operators.
PauliSum evolve_observable(const NetworkState& state, const PauliSum& observable,
                           const EngineOptions& options = {});

/// prod_i 2^(-1/2) q_{i,m_i}(t), i.e. U^dagger Gamma_j U for the multi-index
/// m (size n, entries 0..3).
PauliSum gamma_product(const NetworkState& state, std::span<const int> multi_index,
                       const EngineOptions& options = {});

/// Largest deviation from the Pauli algebra over all descriptors, in the
/// coefficient 2-norm: q_x q_y - i q_z (and cyclic), q_m^2 - I, and
/// commutators between components of different qubits.
double algebra_residual(const NetworkState& state);

nlohmann::json to_json(const NetworkState& state);

}  // namespace dh
