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

#include "dhsim/oracle.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>

#include "dhsim/errors.hpp"

namespace dh {
namespace {

// Sorted, duplicate-free, within 1..n.
std::vector<int> checked_subset(std::span<const int> qubits, int n) {
  if (qubits.empty()) throw std::invalid_argument("qubit subset must be nonempty");
  std::vector<int> out(qubits.begin(), qubits.end());
  std::sort(out.begin(), out.end());
  if (std::adjacent_find(out.begin(), out.end()) != out.end()) {
    throw std::invalid_argument("qubit subset has duplicates");
  }
  if (out.front() < 1 || out.back() > n) throw std::invalid_argument("qubit subset out of range");
  return out;
}

// Scatters the bits of `local` onto the global bit positions `positions`.
std::uint64_t scatter(std::uint64_t local, std::span<const int> positions) {
  std::uint64_t out = 0;
  for (std::size_t k = 0; k < positions.size(); ++k) {
    if ((local >> k) & 1U) out |= std::uint64_t{1} << positions[k];
  }
  return out;
}

}  // namespace

StateVector StateVector::zero(int n) {
  if (n < 1 || n > 30) throw std::invalid_argument("state vector qubit count out of range");
  StateVector s{n, Vector::Zero(Eigen::Index{1} << n)};
  s.amplitudes[0] = 1.0;
  return s;
}

void apply_gate(StateVector& state, const BoundGate& gate) {
  auto& v = state.amplitudes;
  const auto dim = static_cast<std::uint64_t>(v.size());
  const Matrix& m = gate.matrix;
  if (gate.qubits.size() == 1) {
    const std::uint64_t bit = std::uint64_t{1} << (gate.qubits[0] - 1);
    for (std::uint64_t k = 0; k < dim; ++k) {
      if (k & bit) continue;
      const auto i0 = static_cast<Eigen::Index>(k);
      const auto i1 = static_cast<Eigen::Index>(k | bit);
      const Complex a0 = v[i0];
      const Complex a1 = v[i1];
      v[i0] = m(0, 0) * a0 + m(0, 1) * a1;
      v[i1] = m(1, 0) * a0 + m(1, 1) * a1;
    }
    return;
  }
  const std::uint64_t lo = std::uint64_t{1} << (gate.qubits[0] - 1);
  const std::uint64_t hi = std::uint64_t{1} << (gate.qubits[1] - 1);
  for (std::uint64_t k = 0; k < dim; ++k) {
    if (k & (lo | hi)) continue;
    const Eigen::Index idx[4] = {static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k | lo),
                                 static_cast<Eigen::Index>(k | hi), static_cast<Eigen::Index>(k | lo | hi)};
    Complex in[4];
    for (int r = 0; r < 4; ++r) in[r] = v[idx[r]];
    for (int r = 0; r < 4; ++r) {
      Complex acc{};
      for (int c = 0; c < 4; ++c) acc += m(r, c) * in[c];
      v[idx[r]] = acc;
    }
  }
}

StateVector evolve_state(const BoundCircuit& circuit, int dense_budget) {
  check_dense_budget(circuit.n, dense_budget, "state-vector simulation");
  return evolve_state(circuit, StateVector::zero(circuit.n), dense_budget);
}

StateVector evolve_state(const BoundCircuit& circuit, const StateVector& initial, int dense_budget) {
  check_dense_budget(circuit.n, dense_budget, "state-vector simulation");
  if (initial.n != circuit.n) throw std::invalid_argument("initial state size does not match circuit");
  StateVector state = initial;
  for (const auto& gate : circuit.gates) apply_gate(state, gate);
  return state;
}

DensityMatrix density(const StateVector& state) {
  std::vector<int> all(static_cast<std::size_t>(state.n));
  for (int q = 1; q <= state.n; ++q) all[static_cast<std::size_t>(q - 1)] = q;
  return DensityMatrix{std::move(all), state.amplitudes * state.amplitudes.adjoint()};
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep) {
  const int width = static_cast<int>(rho.qubits.size());
  std::vector<int> kept = checked_subset(keep, rho.qubits.back());
  std::vector<int> kept_pos, traced_pos;
  for (int local = 0; local < width; ++local) {
    const bool is_kept = std::binary_search(kept.begin(), kept.end(), rho.qubits[static_cast<std::size_t>(local)]);
    (is_kept ? kept_pos : traced_pos).push_back(local);
  }
  if (kept_pos.size() != kept.size()) throw std::invalid_argument("partial_trace: keep is not a subset of the state's qubits");
  const std::uint64_t kdim = std::uint64_t{1} << kept_pos.size();
  const std::uint64_t tdim = std::uint64_t{1} << traced_pos.size();
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(kdim), static_cast<Eigen::Index>(kdim));
  for (std::uint64_t i = 0; i < kdim; ++i) {
    const std::uint64_t gi = scatter(i, kept_pos);
    for (std::uint64_t j = 0; j < kdim; ++j) {
      const std::uint64_t gj = scatter(j, kept_pos);
      Complex acc{};
      for (std::uint64_t t = 0; t < tdim; ++t) {
        const std::uint64_t gt = scatter(t, traced_pos);
        acc += rho.entries(static_cast<Eigen::Index>(gi | gt), static_cast<Eigen::Index>(gj | gt));
      }
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = acc;
    }
  }
  return DensityMatrix{std::move(kept), std::move(out)};
}

DensityMatrix reduced_state(const StateVector& state, std::span<const int> keep) {
  std::vector<int> kept = checked_subset(keep, state.n);
  std::vector<int> kept_pos, traced_pos;
  for (int q = 1; q <= state.n; ++q) {
    (std::binary_search(kept.begin(), kept.end(), q) ? kept_pos : traced_pos).push_back(q - 1);
  }
  const std::uint64_t kdim = std::uint64_t{1} << kept_pos.size();
  const std::uint64_t tdim = std::uint64_t{1} << traced_pos.size();
  // Amplitudes as a kdim x tdim matrix A; the reduced state is A A^dagger.
  Matrix a(static_cast<Eigen::Index>(kdim), static_cast<Eigen::Index>(tdim));
  for (std::uint64_t t = 0; t < tdim; ++t) {
    const std::uint64_t gt = scatter(t, traced_pos);
    for (std::uint64_t i = 0; i < kdim; ++i) {
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t)) =
          state.amplitudes[static_cast<Eigen::Index>(scatter(i, kept_pos) | gt)];
    }
  }
  return DensityMatrix{std::move(kept), a * a.adjoint()};
}

std::vector<double> measurement_distribution(const StateVector& state, std::span<const int> qubits) {
  if (qubits.empty()) throw std::invalid_argument("measurement subset must be nonempty");
  for (int q : qubits) {
    if (q < 1 || q > state.n) throw std::invalid_argument("measurement qubit out of range");
  }
  std::vector<double> probs(std::size_t{1} << qubits.size(), 0.0);
  const auto dim = static_cast<std::uint64_t>(state.amplitudes.size());
  for (std::uint64_t b = 0; b < dim; ++b) {
    std::size_t local = 0;
    for (std::size_t k = 0; k < qubits.size(); ++k) {
      if ((b >> (qubits[k] - 1)) & 1U) local |= std::size_t{1} << k;
    }
    probs[local] += std::norm(state.amplitudes[static_cast<Eigen::Index>(b)]);
  }
  return probs;
}

std::string outcome_label(std::size_t index, std::size_t width) {
  std::string out(width, '0');
  for (std::size_t k = 0; k < width; ++k) {
    if ((index >> k) & 1U) out[k] = '1';
  }
  return out;
}

nlohmann::json matrix_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json to_json(const StateVector& state) {
  nlohmann::json amps = nlohmann::json::array();
  for (Eigen::Index k = 0; k < state.amplitudes.size(); ++k) {
    amps.push_back({state.amplitudes[k].real(), state.amplitudes[k].imag()});
  }
  return {{"n", state.n}, {"amplitudes", std::move(amps)}};
}

nlohmann::json to_json(const DensityMatrix& rho) {
  return {{"qubits", rho.qubits}, {"entries", matrix_json(rho.entries)}};
}

}  // namespace dh
