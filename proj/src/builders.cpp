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

#include <stdexcept>
#include <string>

#include "dhsim/circuit.hpp"

namespace dh {
namespace {

// Unitary record of the spin component at `angle` (x-z plane) of `system`
// into `record`; no collapse.
void measure_at_angle(Circuit& c, const std::string& angle, int system, int record) {
  c.add(Gate::rotation(GateKind::RY, system, Angle::of(angle, -1.0)));
  c.add(Gate::fixed(GateKind::CNOT, {system, record}));
  c.add(Gate::rotation(GateKind::RY, system, Angle::of(angle)));
}

// Bell-basis measurement of (1, 4) recorded in 2 (phase bit) and 3 (parity
// bit), then Bob's corrections on 5.
void bell_measure_and_correct(Circuit& c) {
  c.add(Gate::fixed(GateKind::CNOT, {1, 4}));
  c.add(Gate::fixed(GateKind::H, {1}));
  c.add(Gate::fixed(GateKind::CNOT, {1, 2}));
  c.add(Gate::fixed(GateKind::CNOT, {4, 3}));
  c.mark("after-bell");
  c.add(Gate::fixed(GateKind::CZ, {2, 5}));
  c.add(Gate::fixed(GateKind::CNOT, {3, 5}));
}

}  // namespace

Circuit build_bell_experiment() {
  Circuit c(4);
  c.declare("theta").declare("phi");
  c.add(Gate::fixed(GateKind::H, {2}));
  c.add(Gate::fixed(GateKind::CNOT, {2, 3}));
  c.mark("prepared");
  measure_at_angle(c, "theta", 2, 1);
  c.mark("after-theta");
  measure_at_angle(c, "phi", 3, 4);
  return c;
}

Circuit build_superdense(int b1, int b2) {
  if ((b1 != 0 && b1 != 1) || (b2 != 0 && b2 != 1)) {
    throw std::invalid_argument("superdense bits must be 0 or 1");
  }
  Circuit c(2);
  c.add(Gate::fixed(GateKind::H, {1}));
  c.add(Gate::fixed(GateKind::CNOT, {1, 2}));
  c.mark("shared");
  if (b1 == 1 && b2 == 1) {
    c.add(Gate::fixed(GateKind::Y, {1}));
  } else if (b1 == 1) {
    c.add(Gate::fixed(GateKind::X, {1}));
  } else if (b2 == 1) {
    c.add(Gate::fixed(GateKind::Z, {1}));
  }
  c.mark("encoded");
  c.add(Gate::fixed(GateKind::CNOT, {1, 2}));
  c.add(Gate::fixed(GateKind::H, {1}));
  return c;
}

Circuit build_teleportation() {
  Circuit c(5);
  c.declare("theta");
  c.add(Gate::rotation(GateKind::RY, 1, Angle::of("theta")));
  c.add(Gate::fixed(GateKind::H, {4}));
  c.add(Gate::fixed(GateKind::CNOT, {4, 5}));
  c.mark("prepared");
  bell_measure_and_correct(c);
  return c;
}

Circuit build_partial_teleportation() {
  Circuit c(5);
  c.declare("theta").declare("alpha");
  c.add(Gate::rotation(GateKind::RY, 1, Angle::of("theta")));
  c.add(Gate::rotation(GateKind::RY, 4, Angle::of("alpha", 2.0)));
  c.add(Gate::fixed(GateKind::CNOT, {4, 5}));
  c.mark("prepared");
  bell_measure_and_correct(c);
  return c;
}

Circuit build_contiguity_interaction_after() {
  Circuit c(2);
  c.declare("u1");
  c.add(Gate::rotation(GateKind::RY, 2, Angle::of("u1")));
  c.mark("before-interaction");
  c.add(Gate::fixed(GateKind::CNOT, {2, 1}));
  return c;
}

Circuit build_contiguity_interaction_before() {
  Circuit c(2);
  c.declare("u2");
  c.add(Gate::fixed(GateKind::CNOT, {2, 1}));
  c.mark("after-interaction");
  c.add(Gate::rotation(GateKind::RY, 2, Angle::of("u2")));
  return c;
}

Circuit builtin_circuit(std::string_view name, std::string_view bits) {
  if (name == "bell") return build_bell_experiment();
  if (name == "teleport") return build_teleportation();
  if (name == "partial-teleport") return build_partial_teleportation();
  if (name == "contiguity-a") return build_contiguity_interaction_after();
  if (name == "contiguity-b") return build_contiguity_interaction_before();
  if (name == "superdense") {
    if (bits.size() != 2 || (bits[0] != '0' && bits[0] != '1') || (bits[1] != '0' && bits[1] != '1')) {
      throw std::invalid_argument("superdense bits must be one of 00, 01, 10, 11");
    }
    return build_superdense(bits[0] - '0', bits[1] - '0');
  }
  throw std::invalid_argument("unknown builtin circuit '" + std::string(name) + "'");
}

}  // namespace dh
