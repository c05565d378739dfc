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

// Schrodinger-picture reference simulator. Gates act on amplitudes directly.

#include <json.hpp>

#include <span>
#include <string>
#include <vector>

#include "dhsim/circuit.hpp"
#include "dhsim/dense.hpp"

namespace dh {

struct StateVector {
  int n = 1;
  Vector amplitudes;

  /// |0...0> on `n` qubits.
  static StateVector zero(int n);
};

/// A state on `qubits` (sorted, 1-based); qubits[0] is the low local bit.
struct DensityMatrix {
  std::vector<int> qubits;
  Matrix entries;
};

void apply_gate(StateVector& state, const BoundGate& gate);

/// Runs the circuit from |0...0>.
StateVector evolve_state(const BoundCircuit& circuit, int dense_budget = kDefaultDenseQubits);
/// Runs the circuit from `initial`.
StateVector evolve_state(const BoundCircuit& circuit, const StateVector& initial,
                         int dense_budget = kDefaultDenseQubits);

DensityMatrix density(const StateVector& state);
/// Traces out everything except `keep`, which must be a nonempty subset of
/// rho.qubits.
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep);
/// Reduced state of a pure state, computed from amplitudes without forming
/// the global density matrix.
DensityMatrix reduced_state(const StateVector& state, std::span<const int> keep);

/// Born-rule probabilities of computational-basis outcomes on `qubits`,
/// indexed by local basis index (qubits[0] is the low bit).
std::vector<double> measurement_distribution(const StateVector& state, std::span<const int> qubits);

/// Outcome label for a local index: character k is the bit of qubits[k].
std::string outcome_label(std::size_t index, std::size_t width);

nlohmann::json matrix_json(const Matrix& m);
nlohmann::json to_json(const StateVector& state);
nlohmann::json to_json(const DensityMatrix& rho);

}  // namespace dh
