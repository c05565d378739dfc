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

#include <random>

#include "dhsim/errors.hpp"
#include "dhsim/oracle.hpp"
#include "support.hpp"

using namespace dh;
using testing::Mat;
using testing::Vec;

TEST_CASE("single gates act as their embedded matrices") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (GateKind k : {GateKind::H, GateKind::Y, GateKind::S, GateKind::RX, GateKind::CNOT, GateKind::CZ}) {
    for (const std::vector<int>& qubits : std::vector<std::vector<int>>{{1}, {3}, {1, 3}, {3, 2}, {4, 1}}) {
      if (static_cast<int>(qubits.size()) != arity(k)) continue;
      StateVector s{4, Vec(16)};
      for (Eigen::Index i = 0; i < 16; ++i) s.amplitudes(i) = Complex(g(rng), g(rng));
      s.amplitudes.normalize();
      const Vec expected = testing::embed(4, qubits, testing::textbook_gate(k, 0.9)) * s.amplitudes;
      dh::apply_gate(s, BoundGate{k, qubits, gate_matrix(k, 0.9)});
      CHECK((s.amplitudes - expected).norm() < 1e-14);
      CHECK(std::abs(s.amplitudes.norm() - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("evolution matches the reference unitary") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + trial % 5;
    const BoundCircuit c = bind(testing::random_circuit(rng, n, 20, testing::standard_gate_set()), {});
    const StateVector s = evolve_state(c);
    CHECK((s.amplitudes - testing::circuit_unitary(c) * testing::basis_zero(n)).norm() < 1e-12);
    CHECK(std::abs(s.amplitudes.norm() - 1.0) < 1e-12);
    CHECK(is_density_matrix(density(s).entries));
  }
}

TEST_CASE("partial trace and reduced state") {
  std::mt19937_64 rng(5);
  const BoundCircuit c = bind(testing::random_circuit(rng, 4, 25, testing::standard_gate_set()), {});
  const StateVector s = evolve_state(c);
  const DensityMatrix rho = density(s);
  for (const std::vector<int>& keep : std::vector<std::vector<int>>{{1}, {3}, {2, 4}, {1, 2, 4}, {1, 2, 3, 4}}) {
    const Mat expected = testing::reference_reduced(rho.entries, 4, keep);
    const DensityMatrix traced = partial_trace(rho, keep);
    CHECK(traced.qubits == keep);
    CHECK((traced.entries - expected).norm() < 1e-12);
    CHECK((reduced_state(s, keep).entries - expected).norm() < 1e-12);
    CHECK(is_density_matrix(traced.entries));
  }
  CHECK_THROWS_AS(partial_trace(rho, std::vector<int>{}), std::invalid_argument);
  CHECK_THROWS_AS(partial_trace(rho, std::vector<int>{5}), std::invalid_argument);
  CHECK_THROWS_AS(partial_trace(partial_trace(rho, std::vector<int>{1, 2}), std::vector<int>{3}),
                  std::invalid_argument);
}

TEST_CASE("measurement distributions") {
  CHECK(measurement_distribution(StateVector::zero(3), std::vector<int>{1, 2, 3}) ==
        std::vector<double>{1, 0, 0, 0, 0, 0, 0, 0});
  const BoundCircuit bell = bind(parse("qubits 2\nH 1\nCNOT 1 2"), {});
  const StateVector s = evolve_state(bell);
  const auto single = measurement_distribution(s, std::vector<int>{2});
  CHECK(single[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(single[1] == doctest::Approx(0.5).epsilon(1e-14));
  const auto both = measurement_distribution(s, std::vector<int>{1, 2});
  CHECK(both[0] == doctest::Approx(0.5));
  CHECK(both[3] == doctest::Approx(0.5));
  // Qubit order in the request decides the bit order of the index.
  const StateVector x2 = evolve_state(bind(parse("qubits 2\nX 2"), {}));
  CHECK(measurement_distribution(x2, std::vector<int>{1, 2})[2] == 1.0);
  CHECK(measurement_distribution(x2, std::vector<int>{2, 1})[1] == 1.0);
  CHECK(outcome_label(2, 2) == "01");
  CHECK(outcome_label(1, 3) == "100");
}

TEST_CASE("superdense outcomes are point masses") {
  for (int b1 = 0; b1 < 2; ++b1)
    for (int b2 = 0; b2 < 2; ++b2) {
      const auto p = measurement_distribution(evolve_state(bind(build_superdense(b1, b2), {})), std::vector<int>{1, 2});
      CHECK(*std::max_element(p.begin(), p.end()) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("dense budget applies to the oracle") {
  const BoundCircuit c{12, {}};
  CHECK_THROWS_AS(evolve_state(c, 10), BudgetError);
  CHECK_NOTHROW(evolve_state(c, 12));
}

TEST_CASE("custom initial state") {
  const BoundCircuit c = bind(parse("qubits 2\nCNOT 1 2"), {});
  StateVector init{2, Vec::Zero(4)};
  init.amplitudes(1) = 1;  // qubit 1 set
  CHECK(evolve_state(c, init).amplitudes(3) == Complex(1.0));
  CHECK_THROWS_AS(evolve_state(c, StateVector::zero(3)), std::invalid_argument);
}

TEST_CASE("json output") {
  const auto j = to_json(StateVector::zero(1));
  CHECK(j["n"] == 1);
  CHECK(j["amplitudes"][0][0] == 1.0);
  const auto r = to_json(density(StateVector::zero(1)));
  CHECK(r["qubits"] == std::vector<int>{1});
}
