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

#include "dhsim/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "dhsim/errors.hpp"

namespace dh {
namespace {

std::vector<int> sorted_subset(std::span<const int> subset, int n) {
  if (subset.empty()) throw std::invalid_argument("qubit subset must be nonempty");
  std::vector<int> out(subset.begin(), subset.end());
  std::sort(out.begin(), out.end());
  if (std::adjacent_find(out.begin(), out.end()) != out.end()) {
    throw std::invalid_argument("qubit subset has duplicates");
  }
  if (out.front() < 1 || out.back() > n) throw std::invalid_argument("qubit subset out of range");
  return out;
}

// <0| a b |0>. Only pairs with equal X planes reach |0>; terms are sorted by
// (x, z), so the partners of a string form one contiguous run of `b`.
Complex contract_standard(const PauliSum& a, const PauliSum& b) {
  const auto terms = b.terms();
  Complex acc{};
  for (const auto& [p, cp] : a.terms()) {
    const PauliString lo(p.size(), p.x_bits(), 0);
    auto it = std::lower_bound(terms.begin(), terms.end(), lo,
                               [](const PauliSum::Term& t, const PauliString& s) { return t.first < s; });
    for (; it != terms.end() && it->first.x_bits() == p.x_bits(); ++it) {
      const auto [phase, r] = mul_strings(p, it->first);
      acc += cp * it->second * phase.value();
    }
  }
  return acc;
}

void check_initial(const NetworkState& state, const InitialState& initial) {
  if (state.size() != initial.size()) throw std::invalid_argument("initial state size does not match network");
}

// Expectations of all 4^k selections on `qubits` (sorted), indexed by
// sum_j m_j 4^j.
std::vector<Complex> selection_expectations(const NetworkState& state, const std::vector<int>& qubits,
                                            const InitialState& initial, const EngineOptions& options) {
  const int k = static_cast<int>(qubits.size());
  if (k > 30) throw BudgetError("selection sums over more than 30 qubits are not supported");
  std::vector<Complex> out(std::size_t{1} << (2 * k));
  std::vector<std::size_t> stride(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) stride[static_cast<std::size_t>(j)] = std::size_t{1} << (2 * j);

  if (state.size() <= options.dense_budget) {
    // Products act on |psi0> right to left; qubits later in the order are
    // applied first so that prefixes of the recursion are shared.
    const Vector psi = initial.vector().amplitudes;
    std::function<void(int, const Vector&, std::size_t)> descend = [&](int d, const Vector& v, std::size_t index) {
      const int qubit = qubits[static_cast<std::size_t>(d)];
      for (int m = 0; m < 4; ++m) {
        const std::size_t next = index + static_cast<std::size_t>(m) * stride[static_cast<std::size_t>(d)];
        if (m == 0) {
          if (d == 0) {
            out[next] = psi.dot(v);
          } else {
            descend(d - 1, v, next);
          }
          continue;
        }
        const Vector w = dh::apply(state.component(qubit, m), v);
        if (d == 0) {
          out[next] = psi.dot(w);
        } else {
          descend(d - 1, w, next);
        }
      }
    };
    descend(k - 1, psi, 0);
    return out;
  }

  if (!initial.is_standard()) {
    throw BudgetError("a custom initial state needs n <= dense budget (" + std::to_string(options.dense_budget) + ")");
  }
  std::function<void(int, const PauliSum&, std::size_t)> descend = [&](int d, const PauliSum& prefix,
                                                                        std::size_t index) {
    const int qubit = qubits[static_cast<std::size_t>(d)];
    for (int m = 0; m < 4; ++m) {
      const std::size_t next = index + static_cast<std::size_t>(m) * stride[static_cast<std::size_t>(d)];
      if (d == k - 1) {
        out[next] = m == 0 ? standard_expectation(prefix) : contract_standard(prefix, state.component(qubit, m));
      } else if (m == 0) {
        descend(d + 1, prefix, next);
      } else {
        descend(d + 1, sum_mul(prefix, state.component(qubit, m), options.max_terms), next);
      }
    }
  };
  descend(0, PauliSum::identity(state.size()), 0);
  return out;
}

double real_or_throw(Complex value) {
  if (std::abs(value.imag()) > 1e-8) {
    throw InvariantError("expectation of a product of descriptor components is not real (imag " +
                         std::to_string(value.imag()) + ")");
  }
  return value.real();
}

}  // namespace

InitialState InitialState::standard(int n) {
  if (n < 1) throw std::invalid_argument("initial state needs at least one qubit");
  return InitialState(n);
}

InitialState InitialState::custom(StateVector state) {
  if (state.amplitudes.size() != (Eigen::Index{1} << state.n)) {
    throw std::invalid_argument("state vector length does not match 2^n");
  }
  if (std::abs(state.amplitudes.norm() - 1.0) > 1e-12) throw std::invalid_argument("initial state is not normalized");
  InitialState out(state.n);
  out.vector_ = std::move(state);
  return out;
}

StateVector InitialState::vector() const { return vector_ ? *vector_ : StateVector::zero(n_); }

double expectation_of_product(const NetworkState& state, const ComponentSelection& selection,
                              const InitialState& initial, const EngineOptions& options) {
  check_initial(state, initial);
  std::vector<const PauliSum*> factors;
  for (const auto& [qubit, m] : selection) {
    if (qubit < 1 || qubit > state.size()) throw std::invalid_argument("selection qubit out of range");
    if (m < 0 || m > 3) throw std::invalid_argument("selection component must be in 0..3");
    if (m != 0) factors.push_back(&state.component(qubit, m));
  }
  if (!initial.is_standard()) {
    check_dense_budget(state.size(), options.dense_budget, "expectation against a custom initial state");
    const Vector psi = initial.vector().amplitudes;
    Vector v = psi;
    for (auto it = factors.rbegin(); it != factors.rend(); ++it) v = dh::apply(**it, v);
    return real_or_throw(psi.dot(v));
  }
  if (factors.empty()) return 1.0;
  PauliSum prefix = PauliSum::identity(state.size());
  for (std::size_t j = 0; j + 1 < factors.size(); ++j) prefix = sum_mul(prefix, *factors[j], options.max_terms);
  return real_or_throw(contract_standard(prefix, *factors.back()));
}

std::map<std::string, double> expectation_table(const NetworkState& state, std::span<const int> subset,
                                                const InitialState& initial, const EngineOptions& options) {
  check_initial(state, initial);
  const std::vector<int> qubits = sorted_subset(subset, state.size());
  const std::vector<Complex> values = selection_expectations(state, qubits, initial, options);
  std::map<std::string, double> table;
  for (std::size_t index = 0; index < values.size(); ++index) {
    std::string key(static_cast<std::size_t>(state.size()), 'I');
    for (std::size_t j = 0; j < qubits.size(); ++j) {
      key[static_cast<std::size_t>(qubits[j] - 1)] = to_char(static_cast<PauliLetter>((index >> (2 * j)) & 3U));
    }
    table.emplace(std::move(key), real_or_throw(values[index]));
  }
  return table;
}

DensityMatrix reduced_density(const NetworkState& state, std::span<const int> subset, const InitialState& initial,
                              const EngineOptions& options) {
  check_initial(state, initial);
  const std::vector<int> qubits = sorted_subset(subset, state.size());
  const int k = static_cast<int>(qubits.size());
  check_dense_budget(k, options.dense_budget, "reduced density matrix");
  const std::vector<Complex> values = selection_expectations(state, qubits, initial, options);
  std::vector<PauliSum::Term> terms;
  terms.reserve(values.size());
  const double norm = std::ldexp(1.0, -k);
  for (std::size_t index = 0; index < values.size(); ++index) {
    PauliString local(k);
    for (int j = 0; j < k; ++j) local = local.with_letter(j + 1, static_cast<PauliLetter>((index >> (2 * j)) & 3U));
    terms.emplace_back(local, values[index] * norm);
  }
  const PauliSum rho = PauliSum::from_terms(k, std::move(terms), std::numeric_limits<std::size_t>::max());
  return DensityMatrix{qubits, to_dense(rho, options.dense_budget)};
}

DensityMatrix global_density(const NetworkState& state, const InitialState& initial, const EngineOptions& options) {
  check_dense_budget(state.size(), options.dense_budget, "global density matrix");
  std::vector<int> all(static_cast<std::size_t>(state.size()));
  for (int q = 1; q <= state.size(); ++q) all[static_cast<std::size_t>(q - 1)] = q;
  return reduced_density(state, all, initial, options);
}

double local_expectation(const NetworkState& state, int qubit, const std::array<double, 4>& coefficients,
                         const InitialState& initial, const EngineOptions& options) {
  double acc = coefficients[0];
  for (int m = 1; m <= 3; ++m) {
    if (coefficients[static_cast<std::size_t>(m)] == 0.0) continue;
    acc += coefficients[static_cast<std::size_t>(m)] * expectation_of_product(state, {{qubit, m}}, initial, options);
  }
  return acc;
}

NetworkState gauge_transform(const NetworkState& state, const BoundCircuit& v, const EngineOptions& options) {
  if (v.n != state.size()) throw std::invalid_argument("gauge unitary size does not match network");
  // V|0...0> is a phase times |0...0> iff <Z_i> = 1 in V|0...0> for every i.
  const NetworkState probe = evolve(v, Backend::pauli, options);
  for (int q = 1; q <= v.n; ++q) {
    const Complex z = standard_expectation(probe.component(q, 3));
    if (std::abs(z - 1.0) > 1e-10) {
      throw std::invalid_argument("gauge unitary does not stabilize the standard state (qubit " + std::to_string(q) +
                                  ")");
    }
  }
  NetworkState out = state;
  for (auto it = v.gates.rbegin(); it != v.gates.rend(); ++it) out = gauge_conjugate(out, *it, options);
  return out;
}

}  // namespace dh
