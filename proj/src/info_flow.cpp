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

#include "dhsim/info_flow.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <thread>

#include "dhsim/errors.hpp"
#include "dhsim/reconstruction.hpp"

namespace dh {
namespace {

double uniform_angle(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53 * 2.0 * std::numbers::pi;
}

// Evaluates fn(0..count-1) on up to `jobs` threads; results keep index order.
template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t count, unsigned jobs, Fn fn) {
  const unsigned workers =
      std::min<unsigned>(static_cast<unsigned>(count), jobs ? jobs : std::max(1U, std::thread::hardware_concurrency()));
  std::vector<std::optional<T>> slots(count);
  if (workers <= 1) {
    for (std::size_t k = 0; k < count; ++k) slots[k].emplace(fn(k));
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t k = next++; k < count; k = next++) {
          try {
            slots[k].emplace(fn(k));
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);
  }
  std::vector<T> out;
  out.reserve(count);
  for (auto& slot : slots) out.push_back(std::move(*slot));
  return out;
}

void check_parameter(const Circuit& circuit, const std::string& parameter) {
  if (!circuit.declares(parameter)) throw BindingError("undeclared parameter " + parameter);
}

// Descriptor states at the evaluation prefix, one per grid point.
std::vector<NetworkState> grid_states(const Circuit& circuit, const std::string& parameter,
                                      const DependenceOptions& options) {
  check_parameter(circuit, parameter);
  if (options.grid.size() < 2) throw std::invalid_argument("dependence grids need at least two points");
  const Circuit prefix = circuit.prefix(circuit.resolve_step(options.at));
  const ParameterBinding base = complete_binding(circuit, options.base);
  return parallel_map<NetworkState>(options.grid.size(), options.jobs, [&](std::size_t k) {
    ParameterBinding binding = base;
    binding[parameter] = options.grid[k];
    return evolve(dh::bind(prefix, binding), Backend::pauli, options.engine);
  });
}

// Largest pairwise distance among grid evaluations.
template <typename T, typename Distance>
Dependence max_pairwise(const std::vector<T>& values, const std::vector<double>& grid, double tol, Distance distance) {
  Dependence out;
  out.witness.value_a = grid[0];
  out.witness.value_b = grid[1];
  out.witness.distance = -1.0;
  for (std::size_t a = 0; a < values.size(); ++a) {
    for (std::size_t b = a + 1; b < values.size(); ++b) {
      const double d = distance(values[a], values[b]);
      if (d > out.witness.distance) out.witness = Witness{grid[a], grid[b], d};
    }
  }
  out.depends = out.witness.distance > tol;
  return out;
}

Dependence descriptor_dependence(const std::vector<NetworkState>& states, int qubit, const DependenceOptions& options) {
  std::vector<Descriptor> descriptors;
  descriptors.reserve(states.size());
  for (const auto& s : states) descriptors.push_back(s.descriptor(qubit));
  return max_pairwise(descriptors, options.grid, options.descriptor_tol, descriptor_distance);
}

Dependence reduced_dependence(const std::vector<NetworkState>& states, std::span<const int> subset,
                              const DependenceOptions& options) {
  std::vector<Matrix> rhos = parallel_map<Matrix>(states.size(), options.jobs, [&](std::size_t k) {
    return reduced_density(states[k], subset, InitialState::standard(states[k].size()), options.engine).entries;
  });
  return max_pairwise(rhos, options.grid, options.trace_tol,
                      [](const Matrix& a, const Matrix& b) { return trace_distance(a, b); });
}

std::vector<int> all_qubits(int n) {
  std::vector<int> out(static_cast<std::size_t>(n));
  for (int q = 1; q <= n; ++q) out[static_cast<std::size_t>(q - 1)] = q;
  return out;
}

}  // namespace

std::vector<double> default_grid(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<double> grid(count);
  for (auto& v : grid) v = uniform_angle(gen);
  return grid;
}

ParameterBinding complete_binding(const Circuit& circuit, ParameterBinding base, std::uint64_t seed) {
  std::mt19937_64 gen(seed ^ 0x5DEECE66DULL);
  for (const auto& symbol : circuit.params()) {
    const double value = uniform_angle(gen);
    base.try_emplace(symbol, value);
  }
  return base;
}

double descriptor_distance(const Descriptor& a, const Descriptor& b) {
  double worst = 0.0;
  for (std::size_t m = 0; m < 3; ++m) {
    worst = std::max(worst, coefficient_norm(a.components[m] - b.components[m]));
  }
  return worst;
}

Dependence depends_descriptor(const Circuit& circuit, int qubit, const std::string& parameter,
                              const DependenceOptions& options) {
  if (qubit < 1 || qubit > circuit.size()) throw std::invalid_argument("qubit out of range");
  return descriptor_dependence(grid_states(circuit, parameter, options), qubit, options);
}

Dependence depends_reduced(const Circuit& circuit, std::span<const int> subset, const std::string& parameter,
                           const DependenceOptions& options) {
  return reduced_dependence(grid_states(circuit, parameter, options), subset, options);
}

Dependence depends_global(const Circuit& circuit, const std::string& parameter, const DependenceOptions& options) {
  return depends_reduced(circuit, all_qubits(circuit.size()), parameter, options);
}

std::string_view to_string(InformationClass c) {
  switch (c) {
    case InformationClass::no_information: return "no-information";
    case InformationClass::def1_only: return "def1-only";
    case InformationClass::locally_accessible: return "locally-accessible";
    case InformationClass::locally_inaccessible: return "locally-inaccessible";
  }
  return "?";
}

InformationClass classify(bool descriptor_depends, bool global_depends, bool reduced_depends) {
  if (!descriptor_depends) return InformationClass::no_information;
  if (!global_depends) return InformationClass::def1_only;
  return reduced_depends ? InformationClass::locally_accessible : InformationClass::locally_inaccessible;
}

DependenceVerdict classify_information(const Circuit& circuit, int qubit, const std::string& parameter,
                                       const DependenceOptions& options) {
  if (qubit < 1 || qubit > circuit.size()) throw std::invalid_argument("qubit out of range");
  const auto states = grid_states(circuit, parameter, options);
  const std::vector<int> subject{qubit};
  DependenceVerdict v;
  v.subject = subject;
  v.parameter = parameter;
  v.at = options.at;
  const Dependence descriptor = descriptor_dependence(states, qubit, options);
  const Dependence reduced = reduced_dependence(states, subject, options);
  const Dependence global = reduced_dependence(states, all_qubits(circuit.size()), options);
  v.descriptor_depends = descriptor.depends;
  v.reduced_depends = reduced.depends;
  v.global_depends = global.depends;
  v.descriptor_witness = descriptor.witness;
  v.reduced_witness = reduced.witness;
  v.global_witness = global.witness;
  v.classification = classify(v.descriptor_depends, v.global_depends, v.reduced_depends);
  return v;
}

PastCone past_cone(const Circuit& circuit, int qubit, std::size_t step) {
  const int q[] = {qubit};
  return PastCone{qubit, step, joint_past_cone(circuit, q, step)};
}

std::vector<std::size_t> joint_past_cone(const Circuit& circuit, std::span<const int> qubits, std::size_t step) {
  if (step > circuit.gates().size()) throw std::invalid_argument("step beyond circuit length");
  std::set<int> reached(qubits.begin(), qubits.end());
  for (int q : reached) {
    if (q < 1 || q > circuit.size()) throw std::invalid_argument("qubit out of range");
  }
  std::vector<std::size_t> gates;
  for (std::size_t k = step; k-- > 0;) {
    const auto& g = circuit.gates()[k];
    const bool touches = std::any_of(g.qubits.begin(), g.qubits.end(), [&](int q) { return reached.contains(q); });
    if (!touches) continue;
    gates.push_back(k);
    reached.insert(g.qubits.begin(), g.qubits.end());
  }
  std::reverse(gates.begin(), gates.end());
  return gates;
}

ContiguityReport contiguity_audit(const Circuit& circuit, const DependenceOptions& options) {
  ContiguityReport report;
  report.step = circuit.resolve_step(options.at);
  DependenceOptions opts = options;
  opts.base = complete_binding(circuit, options.base);
  for (int qubit = 1; qubit <= circuit.size(); ++qubit) {
    PastCone cone = past_cone(circuit, qubit, report.step);
    const std::set<std::size_t> in_cone(cone.gates.begin(), cone.gates.end());
    std::set<std::string> inside, outside;
    for (std::size_t pos = 0; pos < report.step; ++pos) {
      if (const std::string* sym = circuit.gates()[pos].symbol()) (in_cone.contains(pos) ? inside : outside).insert(*sym);
    }
    for (const auto& symbol : outside) {
      if (inside.contains(symbol)) continue;
      ++report.checks;
      const Dependence d = depends_descriptor(circuit, qubit, symbol, opts);
      if (d.depends) report.violations.push_back({qubit, symbol, d.witness});
    }
    report.cones.push_back(std::move(cone));
  }
  return report;
}

nlohmann::json to_json(const Witness& w) {
  return {{"a", w.value_a}, {"b", w.value_b}, {"distance", w.distance}};
}

nlohmann::json to_json(const DependenceVerdict& v) {
  return {{"subject", v.subject},
          {"parameter", v.parameter},
          {"at", v.at},
          {"descriptor_depends", v.descriptor_depends},
          {"reduced_depends", v.reduced_depends},
          {"global_depends", v.global_depends},
          {"classification", to_string(v.classification)},
          {"witness",
           {{"descriptor", to_json(v.descriptor_witness)},
            {"reduced", to_json(v.reduced_witness)},
            {"global", to_json(v.global_witness)}}}};
}

nlohmann::json to_json(const PastCone& cone) {
  return {{"qubit", cone.qubit}, {"step", cone.step}, {"gates", cone.gates}};
}

nlohmann::json to_json(const ContiguityReport& report) {
  nlohmann::json cones = nlohmann::json::array();
  for (const auto& c : report.cones) cones.push_back(to_json(c));
  nlohmann::json violations = nlohmann::json::array();
  for (const auto& v : report.violations) {
    violations.push_back({{"qubit", v.qubit}, {"parameter", v.parameter}, {"witness", to_json(v.witness)}});
  }
  return {{"step", report.step}, {"checks", report.checks}, {"cones", std::move(cones)},
          {"violations", std::move(violations)}};
}

}  // namespace dh
