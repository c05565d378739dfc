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
#include "dhsim/reconstruction.hpp"
#include "support.hpp"

using namespace dh;
using testing::Mat;
using testing::Vec;

namespace {

BoundGate bound(GateKind k, std::vector<int> qubits, double a = 0.0) {
  return BoundGate{k, std::move(qubits), gate_matrix(k, a)};
}

}  // namespace

TEST_CASE("Bell pair expectations") {
  const NetworkState s = evolve(bind(parse("qubits 2\nH 1\nCNOT 1 2"), {}));
  const InitialState init = InitialState::standard(2);
  CHECK(expectation_of_product(s, {{1, 3}, {2, 3}}, init) == doctest::Approx(1.0));
  CHECK(expectation_of_product(s, {{1, 1}, {2, 1}}, init) == doctest::Approx(1.0));
  CHECK(expectation_of_product(s, {{1, 2}, {2, 2}}, init) == doctest::Approx(-1.0));
  CHECK(expectation_of_product(s, {{1, 3}}, init) == doctest::Approx(0.0));
  CHECK(expectation_of_product(s, {}, init) == 1.0);
  const auto table = expectation_table(s, std::vector<int>{1, 2}, init);
  CHECK(table.size() == 16);
  CHECK(table.at("ZZ") == doctest::Approx(1.0));
  CHECK(table.at("II") == 1.0);
  CHECK_THROWS_AS(expectation_of_product(s, {{3, 1}}, init), std::invalid_argument);
  CHECK_THROWS_AS(expectation_of_product(s, {{1, 4}}, init), std::invalid_argument);
}

TEST_CASE("global density equals the reference on random circuits") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + trial % 5;
    const BoundCircuit c = bind(testing::random_circuit(rng, n, 20, testing::standard_gate_set()), {});
    const DensityMatrix rho = global_density(evolve(c), InitialState::standard(n));
    CHECK(testing::reference_trace_distance(rho.entries, testing::reference_density(c)) < 1e-10);
    CHECK(is_density_matrix(rho.entries));
  }
}

TEST_CASE("reduced densities equal the reference with both contraction methods") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + trial % 3;
    const BoundCircuit c = bind(testing::random_circuit(rng, n, 25, testing::standard_gate_set()), {});
    const NetworkState s = evolve(c);
    const Mat rho = testing::reference_density(c);
    for (const std::vector<int>& subset : std::vector<std::vector<int>>{{1}, {n}, {1, n}, {2, 3}}) {
      const Mat expected = testing::reference_reduced(rho, n, subset);
      const Mat by_vector = reduced_density(s, subset, InitialState::standard(n)).entries;
      const Mat by_strings = reduced_density(s, subset, InitialState::standard(n), {kDefaultMaxTerms, 2}).entries;
      CHECK(testing::reference_trace_distance(by_vector, expected) < 1e-10);
      CHECK(testing::reference_trace_distance(by_strings, expected) < 1e-10);
    }
  }
}

TEST_CASE("reduced density qubit order is sorted") {
  const NetworkState s = evolve(bind(parse("qubits 3\nX 3"), {}));
  const DensityMatrix rho = reduced_density(s, std::vector<int>{3, 1}, InitialState::standard(3));
  CHECK(rho.qubits == std::vector<int>{1, 3});
  CHECK(rho.entries(2, 2).real() == doctest::Approx(1.0));
  CHECK_THROWS_AS(reduced_density(s, std::vector<int>{1, 1}, InitialState::standard(3)), std::invalid_argument);
  CHECK_THROWS_AS(reduced_density(s, std::vector<int>{}, InitialState::standard(3)), std::invalid_argument);
}

TEST_CASE("custom initial states") {
  std::mt19937_64 rng(10);
  std::normal_distribution<double> g;
  const int n = 3;
  const BoundCircuit c = bind(testing::random_circuit(rng, n, 20, testing::standard_gate_set()), {});
  Vec psi0(8);
  for (Eigen::Index k = 0; k < 8; ++k) psi0(k) = Complex(g(rng), g(rng));
  psi0.normalize();
  const InitialState init = InitialState::custom(StateVector{n, psi0});
  const Vec psi = testing::circuit_unitary(c) * psi0;
  const Mat expected = psi * psi.adjoint();
  const NetworkState s = evolve(c);
  CHECK(testing::reference_trace_distance(global_density(s, init).entries, expected) < 1e-10);
  CHECK(testing::reference_trace_distance(reduced_density(s, std::vector<int>{2}, init).entries,
                                          testing::reference_reduced(expected, n, {2})) < 1e-10);
  CHECK_THROWS_AS(InitialState::custom(StateVector{1, Vec::Ones(2)}), std::invalid_argument);
  CHECK_THROWS_AS(reduced_density(s, std::vector<int>{1}, init, {kDefaultMaxTerms, 2}), BudgetError);
  CHECK_THROWS_AS(global_density(s, InitialState::standard(2)), std::invalid_argument);
}

TEST_CASE("local expectations") {
  const NetworkState s = evolve(bind(parse("qubits 1\nH 1"), {}));
  const InitialState init = InitialState::standard(1);
  CHECK(local_expectation(s, 1, {0, 1, 0, 0}, init) == doctest::Approx(1.0));
  CHECK(local_expectation(s, 1, {0.5, 0, 0, 1}, init) == doctest::Approx(0.5));
}

TEST_CASE("dense-backend states reconstruct the same densities") {
  std::mt19937_64 rng(12);
  const BoundCircuit c = bind(testing::random_circuit(rng, 4, 20, testing::standard_gate_set()), {});
  const Mat a = global_density(evolve(c, Backend::pauli), InitialState::standard(4)).entries;
  const Mat b = global_density(evolve(c, Backend::dense), InitialState::standard(4)).entries;
  CHECK(testing::reference_trace_distance(a, b) < 1e-12);
}

TEST_CASE("gauge transforms leave statistics alone") {
  std::mt19937_64 rng(14);
  const int n = 3;
  const BoundCircuit c = bind(testing::random_circuit(rng, n, 20, testing::standard_gate_set()), {});
  const NetworkState s = evolve(c);
  const Mat rho = global_density(s, InitialState::standard(n)).entries;
  const BoundCircuit v{n, {bound(GateKind::PHASE, {2}, 0.9), bound(GateKind::CZ, {1, 3}), bound(GateKind::RZ, {1}, 0.4)}};
  const NetworkState gauged = gauge_transform(s, v);
  CHECK(testing::reference_trace_distance(global_density(gauged, InitialState::standard(n)).entries, rho) < 1e-10);
  const BoundCircuit bad{n, {bound(GateKind::H, {1})}};
  CHECK_THROWS_AS(gauge_transform(s, bad), std::invalid_argument);
  CHECK_THROWS_AS(gauge_transform(s, BoundCircuit{2, {}}), std::invalid_argument);
}

TEST_CASE("equal marginals do not imply equal descriptors") {
  const NetworkState s = evolve(bind(parse("qubits 4\nH 1\nCNOT 1 2\nH 3\nCNOT 3 4\nS 3\nCZ 3 4"), {}));
  const InitialState init = InitialState::standard(4);
  const Mat r1 = reduced_density(s, std::vector<int>{1}, init).entries;
  const Mat r3 = reduced_density(s, std::vector<int>{3}, init).entries;
  CHECK(testing::reference_trace_distance(r1, Mat::Identity(2, 2) / 2.0) < 1e-10);
  CHECK(testing::reference_trace_distance(r1, r3) < 1e-10);
  CHECK(coefficient_norm(s.component(1, 3) - s.component(3, 3)) > 0.1);
}
