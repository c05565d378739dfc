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

// Statistics from descriptors plus a fixed initial state.
//
// With rho_0 the initial state, the global state at step t is
//   rho(t) = 2^-n sum_m < prod_i q_{i,m_i}(t) >_rho0 prod_i sigma^i_{m_i}
// and the state of a subset S keeps only selections supported on S, with
// normalization 2^-|S|.

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dhsim/descriptor.hpp"
#include "dhsim/oracle.hpp"

namespace dh {

class InitialState {
 public:
  /// |0...0>.
  static InitialState standard(int n);
  /// Any normalized pure state (norm 1 to 1e-12).
  static InitialState custom(StateVector state);

  int size() const noexcept { return n_; }
  bool is_standard() const noexcept { return !vector_.has_value(); }
  /// The state vector; materialized as |0...0> for the standard state.
  StateVector vector() const;

 private:
  explicit InitialState(int n) : n_(n) {}
  int n_;
  std::optional<StateVector> vector_;
};

/// qubit -> m in {0, 1, 2, 3}; 0 (or absence) selects the identity.
using ComponentSelection = std::map<int, int>;

/// < rho0 | prod_i q_{i,m_i}(t) | rho0 >. Throws InvariantError if the value
/// is not real to 1e-8 (the factors commute and are Hermitian).
double expectation_of_product(const NetworkState& state, const ComponentSelection& selection,
                              const InitialState& initial, const EngineOptions& options = {});

/// Expectations of every selection supported on `subset`, keyed by strings
/// over all n qubits ("ZZI").
std::map<std::string, double> expectation_table(const NetworkState& state, std::span<const int> subset,
                                                const InitialState& initial,
                                                const EngineOptions& options = {});

DensityMatrix global_density(const NetworkState& state, const InitialState& initial,
                             const EngineOptions& options = {});
DensityMatrix reduced_density(const NetworkState& state, std::span<const int> subset,
                              const InitialState& initial, const EngineOptions& options = {});

/// A0 + sum_m A_m < q_{i,m}(t) > for the single-qubit observable
/// A0 I + A1 X + A2 Y + A3 Z on `qubit`.
double local_expectation(const NetworkState& state, int qubit, const std::array<double, 4>& coefficients,
                         const InitialState& initial, const EngineOptions& options = {});

/// Re-expresses the descriptors against a different but statistically
/// equivalent history: every component becomes V^dagger q V, where
/// V = v_k ... v_1 is given as a gate sequence and must map |0...0> to a
/// phase times itself. Throws std::invalid_argument otherwise.
NetworkState gauge_transform(const NetworkState& state, const BoundCircuit& v,
                             const EngineOptions& options = {});

}  // namespace dh
