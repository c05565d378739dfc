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

// Gate networks with symbolic parameters.
//
// Qubits are numbered from 1. Gates are applied in sequence order: gates
// g_1, g_2, ..., g_k give the network unitary U = g_k ... g_2 g_1.
//
// Two-qubit gate matrices are written in the local basis |a b> with the first
// listed qubit as the low bit, matching the global ordering in dense.hpp.
// CNOT lists control then target.

#include <json.hpp>

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dhsim/dense.hpp"

namespace dh {

enum class GateKind { H, X, Y, Z, S, PHASE, RX, RY, RZ, CNOT, CZ, U1, U2 };

std::string_view gate_name(GateKind kind);
std::optional<GateKind> gate_kind_from_name(std::string_view name);
bool is_parametric(GateKind kind);
int arity(GateKind kind);

/// Symbol -> real value. Rotation angles are in radians.
using ParameterBinding = std::map<std::string, double>;

/// The angle of a parametric gate: `coefficient * symbol`, or `constant` when
/// no symbol is attached.
struct Angle {
  std::optional<std::string> symbol;
  double coefficient = 1.0;
  double constant = 0.0;

  static Angle of(std::string symbol, double coefficient = 1.0) {
    return Angle{std::move(symbol), coefficient, 0.0};
  }
  static Angle fixed(double value) { return Angle{std::nullopt, 1.0, value}; }

  double evaluate(const ParameterBinding& binding) const;
  std::string to_string() const;

  friend bool operator==(const Angle&, const Angle&) = default;
};

struct Gate {
  GateKind kind;
  std::vector<int> qubits;
  std::optional<Angle> angle;  // parametric kinds only
  Matrix matrix;               // U1 / U2 only

  static Gate fixed(GateKind kind, std::vector<int> qubits);
  static Gate rotation(GateKind kind, int qubit, Angle angle);
  static Gate custom(std::vector<int> qubits, Matrix matrix);

  const std::string* symbol() const {
    return angle && angle->symbol ? &*angle->symbol : nullptr;
  }
};

bool operator==(const Gate& a, const Gate& b);

/// Matrix of a non-custom gate kind at the given angle.
Matrix gate_matrix(GateKind kind, double angle = 0.0);

class Circuit {
 public:
  explicit Circuit(int n);

  /// Declares a symbol. Redeclaring is a no-op.
  Circuit& declare(const std::string& symbol);
  /// Appends a gate after checking qubit ranges, arity, declared symbols and
  /// unitarity of custom matrices. Throws std::invalid_argument.
  Circuit& add(Gate gate);
  /// Names the current length as a checkpoint (e.g. "after-bell").
  Circuit& mark(const std::string& name);

  int size() const noexcept { return n_; }
  const std::vector<Gate>& gates() const noexcept { return gates_; }
  const std::vector<std::string>& params() const noexcept { return params_; }
  const std::map<std::string, std::size_t>& checkpoints() const noexcept {
    return checkpoints_;
  }
  bool declares(std::string_view symbol) const;

  /// Resolves "final", a checkpoint name, or a decimal step count.
  std::size_t resolve_step(std::string_view at) const;
  /// The first `steps` gates with the same qubit count and declarations.
  Circuit prefix(std::size_t steps) const;

  friend bool operator==(const Circuit&, const Circuit&) = default;

 private:
  int n_;
  std::vector<Gate> gates_;
  std::vector<std::string> params_;
  std::map<std::string, std::size_t> checkpoints_;
};

struct BoundGate {
  GateKind kind;
  std::vector<int> qubits;
  Matrix matrix;
};

struct BoundCircuit {
  int n = 1;
  std::vector<BoundGate> gates;
};

/// Replaces every symbolic angle with its value. Throws BindingError for a
/// missing symbol, a symbol the circuit does not declare, or a non-finite
/// value.
BoundCircuit bind(const Circuit& circuit, const ParameterBinding& binding);

// Text format (`.dh`), one statement per line, `#` starts a comment:
//   qubits <n>
//   param <sym>
//   mark <name>
//   <GATE> <q> [<q2>]                   H X Y Z S CNOT CZ
//   <GATE>(<angle>) <q>                 PHASE RX RY RZ; angle is `sym`,
//                                       `-sym`, `<c>*sym` or a number
//   U1 <q> = <re> <im> ...              row-major 2x2
//   U2 <q> <q2> = <re> <im> ...         row-major 4x4
Circuit parse(std::string_view text);
std::string serialize(const Circuit& circuit);

nlohmann::json to_json(const Circuit& circuit);
Circuit circuit_from_json(const nlohmann::json& j);

// Protocol circuits. Each sets checkpoints used by the audit tooling.

/// Entangled pair on 2,3; measurement of 2 at angle theta recorded in 1, of 3
/// at angle phi recorded in 4. A measurement at angle a on q recorded in r is
/// RY(-a) q, CNOT q r, RY(a) q.
Circuit build_bell_experiment();
/// (b1, b2) -> I, X, Z, Y on qubit 1 for 00, 10, 01, 11.
Circuit build_superdense(int b1, int b2);
/// |chi> = RY(theta)|0> on 1, resource pair on 4,5, Bell measurement of 1,4
/// recorded in 2 (phase bit) and 3 (parity bit), corrections on 5.
Circuit build_teleportation();
/// As build_teleportation with resource cos(alpha)|00> + sin(alpha)|11>.
Circuit build_partial_teleportation();
/// U1 = RY(u1) on j=2, then U2 = CNOT 2 1 on (i=1, j=2).
Circuit build_contiguity_interaction_after();
/// U'1 = CNOT 2 1 on (i=1, j=2), then U'2 = RY(u2) on j=2.
Circuit build_contiguity_interaction_before();

/// Circuit for a builtin name: bell, superdense, teleport, partial-teleport,
/// contiguity-a, contiguity-b. Superdense uses `bits` ("00".."11").
Circuit builtin_circuit(std::string_view name, std::string_view bits = "00");

}  // namespace dh
