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

#include "dhsim/descriptor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "dhsim/errors.hpp"

namespace dh {
namespace {

double snap(double v) {
  static constexpr double kTargets[] = {0.0, 1.0, -1.0, 0.5, -0.5,
                                        std::numbers::sqrt2 / 2.0, -std::numbers::sqrt2 / 2.0};
  for (double t : kTargets) {
    if (std::abs(v - t) <= 1e-12) return t;
  }
  return v;
}

PauliSum snapped(const PauliSum& s) {
  std::vector<PauliSum::Term> terms;
  terms.reserve(s.term_count());
  for (const auto& [p, c] : s.terms()) terms.emplace_back(p, Complex(snap(c.real()), snap(c.imag())));
  return PauliSum::from_terms(s.size(), std::move(terms));
}

std::size_t local_index(const PauliString& local) {
  return local.x_bits() | (local.z_bits() << local.size());
}

// Full 2^n x 2^n matrix of a gate on its support.
Matrix embed(const BoundGate& gate, int n) {
  const auto dim = Eigen::Index{1} << n;
  std::uint64_t support = 0;
  for (int q : gate.qubits) support |= std::uint64_t{1} << (q - 1);
  auto local = [&](std::uint64_t b) {
    std::uint64_t out = 0;
    for (std::size_t k = 0; k < gate.qubits.size(); ++k) {
      if ((b >> (gate.qubits[k] - 1)) & 1U) out |= std::uint64_t{1} << k;
    }
    return static_cast<Eigen::Index>(out);
  };
  Matrix out = Matrix::Zero(dim, dim);
  for (std::uint64_t r = 0; r < static_cast<std::uint64_t>(dim); ++r) {
    for (std::uint64_t c = 0; c < static_cast<std::uint64_t>(dim); ++c) {
      if ((r & ~support) != (c & ~support)) continue;
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = gate.matrix(local(r), local(c));
    }
  }
  return out;
}

void check_gate(const BoundGate& gate, int n) {
  const std::size_t k = gate.qubits.size();
  if (k < 1 || k > 2) throw std::invalid_argument("gates act on one or two qubits");
  for (int q : gate.qubits) {
    if (q < 1 || q > n) throw std::invalid_argument("gate qubit " + std::to_string(q) + " out of range");
  }
  if (k == 2 && gate.qubits[0] == gate.qubits[1]) throw std::invalid_argument("duplicate gate qubit");
}

// q_{qubit,m} for every descriptor, recomputed from the accumulated unitary.
std::vector<Descriptor> dense_descriptors(const Matrix& u, int n) {
  std::vector<Descriptor> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int q = 1; q <= n; ++q) {
    Descriptor d{q, {PauliSum(n), PauliSum(n), PauliSum(n)}};
    for (int m = 1; m <= 3; ++m) {
      const Matrix sigma = to_dense(PauliSum(PauliString::single(n, q, static_cast<PauliLetter>(m))), n);
      d.components[static_cast<std::size_t>(m - 1)] = decompose(u.adjoint() * sigma * u);
    }
    out.push_back(std::move(d));
  }
  return out;
}

// v^dagger s v by rewriting each string's letters on v's support.
PauliSum conjugate_terms(const PauliSum& s, const BoundGate& v, const RewriteTable& table,
                         std::size_t max_terms) {
  const int k = static_cast<int>(v.qubits.size());
  std::vector<PauliSum::Term> out;
  for (const auto& [p, c] : s.terms()) {
    PauliString local(k);
    for (int pos = 0; pos < k; ++pos) local = local.with_letter(pos + 1, p.letter(v.qubits[static_cast<std::size_t>(pos)]));
    if (local.is_identity()) {
      out.emplace_back(p, c);
      continue;
    }
    for (const auto& [image, ci] : table.image(local).terms()) {
      PauliString replaced = p;
      for (int pos = 0; pos < k; ++pos) {
        replaced = replaced.with_letter(v.qubits[static_cast<std::size_t>(pos)], image.letter(pos + 1));
      }
      out.emplace_back(replaced, c * ci);
    }
  }
  return PauliSum::from_terms(s.size(), std::move(out), max_terms);
}

}  // namespace

RewriteTable RewriteTable::build(const Matrix& gate) {
  if (!((gate.rows() == 2 && gate.cols() == 2) || (gate.rows() == 4 && gate.cols() == 4))) {
    throw std::invalid_argument("rewrite tables need a 2x2 or 4x4 gate matrix");
  }
  if (!is_unitary(gate, 1e-10)) throw std::invalid_argument("gate matrix is not unitary");
  RewriteTable table;
  table.arity_ = gate.rows() == 2 ? 1 : 2;
  const std::size_t count = std::size_t{1} << (2 * table.arity_);
  table.images_.assign(count, PauliSum(table.arity_));
  const std::uint64_t mask = (std::uint64_t{1} << table.arity_) - 1;
  for (std::size_t index = 1; index < count; ++index) {
    const PauliString local(table.arity_, index & mask, (index >> table.arity_) & mask);
    const Matrix sigma = to_dense(PauliSum(local), table.arity_);
    table.images_[index] = snapped(decompose(gate.adjoint() * sigma * gate));
  }
  return table;
}

const PauliSum& RewriteTable::image(const PauliString& local) const {
  if (local.size() != arity_) throw std::invalid_argument("local string size does not match gate arity");
  return images_[local_index(local)];
}

NetworkState::NetworkState(int n, Backend backend) : n_(n), backend_(backend), identity_(PauliSum::identity(n)) {}

const PauliSum& NetworkState::component(int qubit, int m) const {
  if (m < 0 || m > 3) throw std::invalid_argument("component index must be in 0..3");
  if (m == 0) return identity_;
  return descriptor(qubit).component(m);
}

NetworkState init_network(int n, Backend backend, const EngineOptions& options) {
  if (n < 1) throw std::invalid_argument("a network needs at least one qubit");
  if (n > kMaxQubits) {
    throw BudgetError("network of " + std::to_string(n) + " qubits exceeds the maximum of " +
                      std::to_string(kMaxQubits));
  }
  if (backend == Backend::dense) check_dense_budget(n, options.dense_budget, "dense descriptor backend");
  NetworkState state(n, backend);
  state.descriptors_.reserve(static_cast<std::size_t>(n));
  for (int q = 1; q <= n; ++q) {
    state.descriptors_.push_back(Descriptor{q,
                                            {PauliSum(PauliString::single(n, q, PauliLetter::X)),
                                             PauliSum(PauliString::single(n, q, PauliLetter::Y)),
                                             PauliSum(PauliString::single(n, q, PauliLetter::Z))}});
  }
  if (backend == Backend::dense) state.unitary_ = Matrix::Identity(Eigen::Index{1} << n, Eigen::Index{1} << n);
  return state;
}

NetworkState apply_gate(const NetworkState& state, const BoundGate& gate, const EngineOptions& options) {
  check_gate(gate, state.n_);
  NetworkState next = state;
  next.history_.push_back(gate);
  if (state.backend_ == Backend::dense) {
    if (!is_unitary(gate.matrix, 1e-10)) throw std::invalid_argument("gate matrix is not unitary");
    next.unitary_ = embed(gate, state.n_) * state.unitary_;
    next.descriptors_ = dense_descriptors(next.unitary_, state.n_);
    return next;
  }
  const RewriteTable table = build_rewrite_table(gate);
  const int k = table.arity();
  for (int pos = 0; pos < k; ++pos) {
    const int qubit = gate.qubits[static_cast<std::size_t>(pos)];
    for (int m = 1; m <= 3; ++m) {
      const auto sigma = PauliString::single(k, pos + 1, static_cast<PauliLetter>(m));
      PauliSum updated(state.n_);
      for (const auto& [image, c] : table.image(sigma).terms()) {
        const int la = static_cast<int>(image.letter(1));
        PauliSum product = state.component(gate.qubits[0], la);
        if (k == 2) {
          const int lb = static_cast<int>(image.letter(2));
          if (la == 0) {
            product = state.component(gate.qubits[1], lb);
          } else if (lb != 0) {
            product = sum_mul(product, state.component(gate.qubits[1], lb), options.max_terms);
          }
        }
        updated = sum_add(updated, sum_scale(product, c), options.max_terms);
      }
      next.descriptors_[static_cast<std::size_t>(qubit - 1)].components[static_cast<std::size_t>(m - 1)] =
          std::move(updated);
    }
  }
  return next;
}

NetworkState evolve(const BoundCircuit& circuit, Backend backend, const EngineOptions& options) {
  NetworkState state = init_network(circuit.n, backend, options);
  for (const auto& gate : circuit.gates) state = apply_gate(state, gate, options);
  return state;
}

NetworkState gauge_conjugate(const NetworkState& state, const BoundGate& v, const EngineOptions& options) {
  check_gate(v, state.n_);
  NetworkState next = state;
  if (state.backend_ == Backend::dense) {
    next.unitary_ = state.unitary_ * embed(v, state.n_);
    next.descriptors_ = dense_descriptors(next.unitary_, state.n_);
    return next;
  }
  const RewriteTable table = build_rewrite_table(v);
  for (auto& d : next.descriptors_) {
    for (auto& component : d.components) component = conjugate_terms(component, v, table, options.max_terms);
  }
  return next;
}

PauliSum evolve_observable(const NetworkState& state, const PauliSum& observable, const EngineOptions& options) {
  if (observable.size() != state.size()) throw std::invalid_argument("observable size does not match network");
  PauliSum out(state.size());
  for (const auto& [p, c] : observable.terms()) {
    PauliSum product = PauliSum::identity(state.size());
    for (int q = 1; q <= state.size(); ++q) {
      const int m = static_cast<int>(p.letter(q));
      if (m != 0) product = sum_mul(product, state.component(q, m), options.max_terms);
    }
    out = sum_add(out, sum_scale(product, c), options.max_terms);
  }
  return out;
}

PauliSum gamma_product(const NetworkState& state, std::span<const int> multi_index, const EngineOptions& options) {
  if (static_cast<int>(multi_index.size()) != state.size()) {
    throw std::invalid_argument("multi-index must have one entry per qubit");
  }
  PauliSum product = PauliSum::identity(state.size());
  for (int q = 1; q <= state.size(); ++q) {
    const int m = multi_index[static_cast<std::size_t>(q - 1)];
    if (m < 0 || m > 3) throw std::invalid_argument("multi-index entries must be in 0..3");
    if (m != 0) product = sum_mul(product, state.component(q, m), options.max_terms);
  }
  return sum_scale(product, std::pow(2.0, -0.5 * state.size()));
}

double algebra_residual(const NetworkState& state) {
  const Complex i(0.0, 1.0);
  const PauliSum identity = PauliSum::identity(state.size());
  double worst = 0.0;
  for (const auto& d : state.descriptors()) {
    for (int m = 1; m <= 3; ++m) {
      const PauliSum& a = d.component(m);
      const PauliSum& b = d.component(m % 3 + 1);
      const PauliSum& c = d.component((m + 1) % 3 + 1);
      worst = std::max(worst, coefficient_norm(sum_mul(a, b) - i * c));
      worst = std::max(worst, coefficient_norm(sum_mul(a, a) - identity));
    }
  }
  for (const auto& di : state.descriptors()) {
    for (const auto& dj : state.descriptors()) {
      if (dj.qubit <= di.qubit) continue;
      for (const auto& a : di.components) {
        for (const auto& b : dj.components) worst = std::max(worst, coefficient_norm(commutator(a, b)));
      }
    }
  }
  return worst;
}

nlohmann::json to_json(const NetworkState& state) {
  nlohmann::json history = nlohmann::json::array();
  for (const auto& g : state.history()) history.push_back({{"gate", gate_name(g.kind)}, {"qubits", g.qubits}});
  nlohmann::json descriptors = nlohmann::json::array();
  for (const auto& d : state.descriptors()) {
    descriptors.push_back({{"qubit", d.qubit},
                           {"x", to_json(d.components[0])},
                           {"y", to_json(d.components[1])},
                           {"z", to_json(d.components[2])}});
  }
  return {{"n", state.size()},
          {"step", state.step()},
          {"backend", state.backend() == Backend::pauli ? "pauli" : "dense"},
          {"history", std::move(history)},
          {"descriptors", std::move(descriptors)}};
}

}  // namespace dh
