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

// Parameter-dependence analysis.
//
// "Depends on theta" is decided numerically: the circuit is evaluated at each
// point of a fixed grid of theta values (other symbols held at a base
// binding) and all pairs are compared.

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dhsim/circuit.hpp"
#include "dhsim/descriptor.hpp"

namespace dh {

inline constexpr std::uint64_t kDefaultSeed = 20050318;

/// `count` points in [0, 2pi) from a fixed-seed mt19937_64 stream.
std::vector<double> default_grid(std::size_t count = 5, std::uint64_t seed = kDefaultSeed);

/// Fills symbols missing from `base` with seeded pseudo-random angles.
ParameterBinding complete_binding(const Circuit& circuit, ParameterBinding base, std::uint64_t seed = kDefaultSeed);

struct DependenceOptions {
  std::vector<double> grid = default_grid();
  double descriptor_tol = 1e-8;
  double trace_tol = 1e-8;
  /// Evaluation prefix: "final", a checkpoint name, or a step count.
  std::string at = "final";
  /// Values for every declared symbol other than the one under test.
  ParameterBinding base;
  /// Worker count for grid evaluations; 0 = hardware concurrency.
  unsigned jobs = 0;
  EngineOptions engine;
};

struct Witness {
  double value_a = 0.0;
  double value_b = 0.0;
  double distance = 0.0;
};

struct Dependence {
  bool depends = false;
  Witness witness;
};

/// max over m of || a_m - b_m || in the Pauli-coefficient 2-norm.
double descriptor_distance(const Descriptor& a, const Descriptor& b);

/// True when the descriptor of `qubit` changes with `parameter`.
Dependence depends_descriptor(const Circuit& circuit, int qubit, const std::string& parameter,
                              const DependenceOptions& options = {});
/// A measurement on `subset` alone would show the parameter: its reduced
/// state changes in trace distance.
Dependence depends_reduced(const Circuit& circuit, std::span<const int> subset, const std::string& parameter,
                           const DependenceOptions& options = {});
/// True when the global state changes with `parameter`.
Dependence depends_global(const Circuit& circuit, const std::string& parameter,
                          const DependenceOptions& options = {});

enum class InformationClass { no_information, def1_only, locally_accessible, locally_inaccessible };

std::string_view to_string(InformationClass c);
InformationClass classify(bool descriptor_depends, bool global_depends, bool reduced_depends);

struct DependenceVerdict {
  std::vector<int> subject;
  std::string parameter;
  std::string at;
  bool descriptor_depends = false;
  bool reduced_depends = false;
  bool global_depends = false;
  InformationClass classification = InformationClass::no_information;
  Witness descriptor_witness;
  Witness reduced_witness;
  Witness global_witness;
};

DependenceVerdict classify_information(const Circuit& circuit, int qubit, const std::string& parameter,
                                       const DependenceOptions& options = {});

/// Gates (0-based positions among the first `step`) that can influence
/// `qubit` at `step`, found by backward reachability through shared qubits.
struct PastCone {
  int qubit = 1;
  std::size_t step = 0;
  std::vector<std::size_t> gates;
};

PastCone past_cone(const Circuit& circuit, int qubit, std::size_t step);
/// Union cone of a qubit set.
std::vector<std::size_t> joint_past_cone(const Circuit& circuit, std::span<const int> qubits, std::size_t step);

struct ContiguityViolation {
  int qubit = 1;
  std::string parameter;
  Witness witness;
};

struct ContiguityReport {
  std::size_t step = 0;
  std::size_t checks = 0;
  std::vector<PastCone> cones;
  std::vector<ContiguityViolation> violations;
};

/// For every qubit and every symbol that only labels gates outside the
/// qubit's past cone, checks that the descriptor does not depend on it.
/// Symbols missing from options.base are filled by complete_binding.
ContiguityReport contiguity_audit(const Circuit& circuit, const DependenceOptions& options = {});

nlohmann::json to_json(const Witness& w);
nlohmann::json to_json(const DependenceVerdict& v);
nlohmann::json to_json(const PastCone& cone);
nlohmann::json to_json(const ContiguityReport& report);

}  // namespace dh
