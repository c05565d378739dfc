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

#include <doctest.h>

#include <numbers>
#include <random>

#include "dhsim/errors.hpp"
#include "dhsim/info_flow.hpp"
#include "support.hpp"

using namespace dh;

TEST_CASE("default grid is a reproducible uniform stream") {
  std::mt19937_64 gen(20050318);
  const auto grid = default_grid();
  REQUIRE(grid.size() == 5);
  for (double v : grid) {
    const double expected = static_cast<double>(gen() >> 11) * 0x1.0p-53 * 2.0 * std::numbers::pi;
    CHECK(v == expected);
    CHECK(v >= 0.0);
    CHECK(v < 2.0 * std::numbers::pi);
  }
  CHECK(default_grid(5, 1) != grid);
  CHECK(default_grid(7).size() == 7);
}

TEST_CASE("complete_binding keeps given values") {
  const Circuit bell = build_bell_experiment();
  const ParameterBinding b = complete_binding(bell, {{"theta", 0.25}});
  CHECK(b.at("theta") == 0.25);
  CHECK(b.contains("phi"));
  CHECK(complete_binding(bell, {}) == complete_binding(bell, {}));
}

TEST_CASE("classification truth table") {
  for (bool g : {false, true})
    for (bool r : {false, true}) CHECK(classify(false, g, r) == InformationClass::no_information);
  CHECK(classify(true, false, false) == InformationClass::def1_only);
  CHECK(classify(true, false, true) == InformationClass::def1_only);
  CHECK(classify(true, true, true) == InformationClass::locally_accessible);
  CHECK(classify(true, true, false) == InformationClass::locally_inaccessible);
  CHECK(to_string(InformationClass::def1_only) == "def1-only");
  CHECK(to_string(InformationClass::locally_inaccessible) == "locally-inaccessible");
}

TEST_CASE("descriptor distance") {
  const NetworkState a = init_network(2);
  const NetworkState b = evolve(bind(parse("qubits 2\nX 1"), {}));
  CHECK(descriptor_distance(a.descriptor(1), a.descriptor(1)) == 0.0);
  CHECK(descriptor_distance(a.descriptor(1), b.descriptor(1)) == doctest::Approx(2.0));
  CHECK(descriptor_distance(a.descriptor(2), b.descriptor(2)) == 0.0);
}

TEST_CASE("distant parameter is invisible to the near record") {
  const Circuit bell = build_bell_experiment();
  DependenceOptions opts;
  opts.base = {{"theta", 0.3}};
  const DependenceVerdict v = classify_information(bell, 1, "phi", opts);
  CHECK(v.classification == InformationClass::no_information);
  CHECK_FALSE(v.descriptor_depends);
  CHECK(v.global_depends);
  opts.base = {{"phi", 0.3}};
  const DependenceVerdict near = classify_information(bell, 1, "theta", opts);
  // One half of an entangled pair: the record alone is uniform for every theta.
  CHECK(near.classification == InformationClass::locally_inaccessible);
  CHECK(near.descriptor_witness.distance > 1e-8);
  CHECK(near.descriptor_witness.value_a != near.descriptor_witness.value_b);
}

TEST_CASE("dependence appears only after the interaction") {
  const Circuit c = build_contiguity_interaction_after();
  DependenceOptions before;
  before.at = "before-interaction";
  CHECK_FALSE(depends_descriptor(c, 1, "u1", before).depends);
  CHECK(depends_descriptor(c, 2, "u1", before).depends);
  CHECK(depends_descriptor(c, 1, "u1").depends);
}

TEST_CASE("a later local unitary factors out of the other descriptor") {
  const Circuit c = build_contiguity_interaction_before();
  const NetworkState mid = evolve(bind(c.prefix(c.resolve_step("after-interaction")), {{"u2", 0.8}}));
  const NetworkState end = evolve(bind(c, {{"u2", 0.8}}));
  CHECK(descriptor_distance(mid.descriptor(1), end.descriptor(1)) < 1e-12);
  CHECK_FALSE(depends_descriptor(c, 1, "u2").depends);
  CHECK(depends_descriptor(c, 2, "u2").depends);
}

TEST_CASE("teleportation verdicts") {
  const Circuit t = build_teleportation();
  DependenceOptions mid;
  mid.at = "after-bell";
  for (int q : {2, 3}) {
    const DependenceVerdict v = classify_information(t, q, "theta", mid);
    CHECK(v.classification == InformationClass::locally_inaccessible);
    CHECK(v.at == "after-bell");
  }
  CHECK(classify_information(t, 5, "theta").classification == InformationClass::locally_accessible);
}

TEST_CASE("gauge parameters are def1-only") {
  Circuit c = parse("qubits 2\nparam alpha\nPHASE(alpha) 1\nH 1\nCNOT 1 2\nRY(0.4) 2");
  CHECK(classify_information(c, 1, "alpha").classification == InformationClass::def1_only);
}

TEST_CASE("grid evaluation does not depend on the worker count") {
  const Circuit bell = build_bell_experiment();
  DependenceOptions one;
  one.jobs = 1;
  DependenceOptions many;
  many.jobs = 4;
  const Dependence a = depends_reduced(bell, std::vector<int>{1, 4}, "theta", one);
  const Dependence b = depends_reduced(bell, std::vector<int>{1, 4}, "theta", many);
  CHECK(a.depends == b.depends);
  CHECK(a.witness.distance == b.witness.distance);
}

TEST_CASE("dependence errors") {
  const Circuit bell = build_bell_experiment();
  CHECK_THROWS_AS(depends_descriptor(bell, 1, "psi"), BindingError);
  DependenceOptions tiny;
  tiny.grid = {0.1};
  CHECK_THROWS_AS(depends_global(bell, "theta", tiny), std::invalid_argument);
  CHECK_THROWS_AS(depends_descriptor(bell, 9, "theta"), std::invalid_argument);
}

TEST_CASE("past cones") {
  const Circuit c = parse("qubits 4\nH 1\nCNOT 1 2\nH 3\nCNOT 2 4\nX 1\nH 3");
  CHECK(past_cone(c, 4, 6).gates == std::vector<std::size_t>{0, 1, 3});
  CHECK(past_cone(c, 3, 6).gates == std::vector<std::size_t>{2, 5});
  CHECK(past_cone(c, 1, 2).gates == std::vector<std::size_t>{0, 1});
  CHECK(past_cone(c, 1, 0).gates.empty());
  CHECK(joint_past_cone(c, std::vector<int>{3, 4}, 6) == std::vector<std::size_t>{0, 1, 2, 3, 5});
  CHECK_THROWS_AS(past_cone(c, 5, 1), std::invalid_argument);
  CHECK_THROWS_AS(past_cone(c, 1, 7), std::invalid_argument);
}

TEST_CASE("contiguity audits of the builders are clean") {
  for (const char* name : {"bell", "superdense", "teleport", "partial-teleport", "contiguity-a", "contiguity-b"}) {
    CAPTURE(name);
    const ContiguityReport r = contiguity_audit(builtin_circuit(name, "01"));
    CHECK(r.violations.empty());
    CHECK(r.cones.size() == static_cast<std::size_t>(builtin_circuit(name, "01").size()));
  }
  const ContiguityReport b = contiguity_audit(build_bell_experiment());
  CHECK(b.checks >= 2);  // phi for qubits 1 and 2, theta for 3 and 4
}

TEST_CASE("verdict json") {
  const auto j = to_json(classify_information(build_bell_experiment(), 1, "phi"));
  CHECK(j["classification"] == "no-information");
  CHECK(j["subject"] == std::vector<int>{1});
}
