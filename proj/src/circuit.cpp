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

#include "dhsim/circuit.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "dhsim/errors.hpp"

namespace dh {
namespace {

struct KindInfo {
  GateKind kind;
  std::string_view name;
  int arity;
  bool parametric;
};

constexpr KindInfo kKinds[] = {
    {GateKind::H, "H", 1, false},         {GateKind::X, "X", 1, false},
    {GateKind::Y, "Y", 1, false},         {GateKind::Z, "Z", 1, false},
    {GateKind::S, "S", 1, false},         {GateKind::PHASE, "PHASE", 1, true},
    {GateKind::RX, "RX", 1, true},        {GateKind::RY, "RY", 1, true},
    {GateKind::RZ, "RZ", 1, true},        {GateKind::CNOT, "CNOT", 2, false},
    {GateKind::CZ, "CZ", 2, false},       {GateKind::U1, "U1", 1, false},
    {GateKind::U2, "U2", 2, false},
};

const KindInfo& info(GateKind kind) {
  for (const auto& k : kKinds) {
    if (k.kind == kind) return k;
  }
  throw std::invalid_argument("unknown gate kind");
}

std::string format_double(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const nlohmann::json& j) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  Matrix m(rows, rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j.at(static_cast<std::size_t>(r));
    if (static_cast<Eigen::Index>(row.size()) != rows) {
      throw std::invalid_argument("custom gate matrix must be square");
    }
    for (Eigen::Index c = 0; c < rows; ++c) {
      const auto& entry = row.at(static_cast<std::size_t>(c));
      m(r, c) = Complex(entry.at(0).get<double>(), entry.at(1).get<double>());
    }
  }
  return m;
}

}  // namespace

std::string_view gate_name(GateKind kind) { return info(kind).name; }

std::optional<GateKind> gate_kind_from_name(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (upper == "CX") return GateKind::CNOT;
  for (const auto& k : kKinds) {
    if (k.name == upper) return k.kind;
  }
  return std::nullopt;
}

bool is_parametric(GateKind kind) { return info(kind).parametric; }
int arity(GateKind kind) { return info(kind).arity; }

double Angle::evaluate(const ParameterBinding& binding) const {
  if (!symbol) return constant;
  auto it = binding.find(*symbol);
  if (it == binding.end()) throw BindingError("missing binding for symbol " + *symbol);
  return coefficient * it->second;
}

std::string Angle::to_string() const {
  if (!symbol) return format_double(constant);
  if (coefficient == 1.0) return *symbol;
  if (coefficient == -1.0) return "-" + *symbol;
  return format_double(coefficient) + "*" + *symbol;
}

Gate Gate::fixed(GateKind kind, std::vector<int> qubits) {
  return Gate{kind, std::move(qubits), std::nullopt, Matrix()};
}

Gate Gate::rotation(GateKind kind, int qubit, Angle angle) {
  return Gate{kind, {qubit}, std::move(angle), Matrix()};
}

Gate Gate::custom(std::vector<int> qubits, Matrix matrix) {
  const GateKind kind = qubits.size() == 2 ? GateKind::U2 : GateKind::U1;
  return Gate{kind, std::move(qubits), std::nullopt, std::move(matrix)};
}

bool operator==(const Gate& a, const Gate& b) {
  if (a.kind != b.kind || a.qubits != b.qubits || a.angle != b.angle) return false;
  if (a.matrix.rows() != b.matrix.rows() || a.matrix.cols() != b.matrix.cols()) return false;
  return a.matrix.size() == 0 || a.matrix == b.matrix;
}

Matrix gate_matrix(GateKind kind, double angle) {
  const Complex i(0.0, 1.0);
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  Matrix m;
  switch (kind) {
    case GateKind::H:
      m = Matrix(2, 2);
      m << 1.0, 1.0, 1.0, -1.0;
      m /= std::numbers::sqrt2;
      return m;
    case GateKind::X: return pauli_matrix(1);
    case GateKind::Y: return pauli_matrix(2);
    case GateKind::Z: return pauli_matrix(3);
    case GateKind::S:
      m = Matrix(2, 2);
      m << 1.0, 0.0, 0.0, i;
      return m;
    case GateKind::PHASE:
      m = Matrix(2, 2);
      m << 1.0, 0.0, 0.0, std::exp(i * angle);
      return m;
    case GateKind::RX:
      m = Matrix(2, 2);
      m << c, -i * s, -i * s, c;
      return m;
    case GateKind::RY:
      m = Matrix(2, 2);
      m << c, -s, s, c;
      return m;
    case GateKind::RZ:
      m = Matrix(2, 2);
      m << std::exp(-i * angle / 2.0), 0.0, 0.0, std::exp(i * angle / 2.0);
      return m;
    case GateKind::CNOT:
      // Control is the low local bit: |1,0> = index 1 <-> |1,1> = index 3.
      m = Matrix::Zero(4, 4);
      m(0, 0) = 1.0;
      m(2, 2) = 1.0;
      m(3, 1) = 1.0;
      m(1, 3) = 1.0;
      return m;
    case GateKind::CZ:
      m = Matrix::Identity(4, 4);
      m(3, 3) = -1.0;
      return m;
    case GateKind::U1:
    case GateKind::U2:
      break;
  }
  throw std::invalid_argument("custom gates carry their own matrix");
}

Circuit::Circuit(int n) : n_(n) {
  if (n < 1) throw std::invalid_argument("a circuit needs at least one qubit");
}

Circuit& Circuit::declare(const std::string& symbol) {
  if (symbol.empty()) throw std::invalid_argument("empty parameter symbol");
  if (!declares(symbol)) params_.push_back(symbol);
  return *this;
}

bool Circuit::declares(std::string_view symbol) const {
  return std::find(params_.begin(), params_.end(), symbol) != params_.end();
}

Circuit& Circuit::add(Gate gate) {
  const int expected = arity(gate.kind);
  if (static_cast<int>(gate.qubits.size()) != expected) {
    throw std::invalid_argument(std::string(gate_name(gate.kind)) + " acts on " +
                                std::to_string(expected) + " qubit(s)");
  }
  for (int q : gate.qubits) {
    if (q < 1 || q > n_) {
      throw std::invalid_argument("qubit " + std::to_string(q) + " out of range 1.." +
                                  std::to_string(n_));
    }
  }
  if (expected == 2 && gate.qubits[0] == gate.qubits[1]) {
    throw std::invalid_argument("duplicate qubit " + std::to_string(gate.qubits[0]) +
                                " in two-qubit gate");
  }
  if (is_parametric(gate.kind) != gate.angle.has_value()) {
    throw std::invalid_argument(std::string(gate_name(gate.kind)) +
                                (gate.angle ? " takes no angle" : " needs an angle"));
  }
  if (const std::string* sym = gate.symbol(); sym && !declares(*sym)) {
    throw std::invalid_argument("undeclared symbol " + *sym);
  }
  if (gate.kind == GateKind::U1 || gate.kind == GateKind::U2) {
    const Eigen::Index dim = Eigen::Index{1} << expected;
    if (gate.matrix.rows() != dim || gate.matrix.cols() != dim) {
      throw std::invalid_argument("custom gate matrix must be " + std::to_string(dim) + "x" +
                                  std::to_string(dim));
    }
    if (!is_unitary(gate.matrix, 1e-10)) throw std::invalid_argument("custom gate matrix is not unitary");
  } else if (gate.matrix.size() != 0) {
    throw std::invalid_argument("only U1/U2 carry a matrix");
  }
  gates_.push_back(std::move(gate));
  return *this;
}

Circuit& Circuit::mark(const std::string& name) {
  if (name.empty() || name == "final") throw std::invalid_argument("invalid checkpoint name");
  checkpoints_[name] = gates_.size();
  return *this;
}

std::size_t Circuit::resolve_step(std::string_view at) const {
  if (at == "final") return gates_.size();
  if (auto it = checkpoints_.find(std::string(at)); it != checkpoints_.end()) return it->second;
  std::size_t step = 0;
  auto [end, ec] = std::from_chars(at.data(), at.data() + at.size(), step);
  if (ec != std::errc() || end != at.data() + at.size() || step > gates_.size()) {
    throw std::invalid_argument("unknown step '" + std::string(at) +
                                "' (use final, a checkpoint name, or 0.." +
                                std::to_string(gates_.size()) + ")");
  }
  return step;
}

Circuit Circuit::prefix(std::size_t steps) const {
  if (steps > gates_.size()) throw std::invalid_argument("prefix longer than the circuit");
  Circuit out(n_);
  out.params_ = params_;
  const std::size_t keep = steps;
  out.gates_.assign(gates_.begin(), gates_.begin() + static_cast<std::ptrdiff_t>(keep));
  for (const auto& [name, step] : checkpoints_) {
    if (step <= keep) out.checkpoints_[name] = step;
  }
  return out;
}

BoundCircuit bind(const Circuit& circuit, const ParameterBinding& binding) {
  for (const auto& [symbol, value] : binding) {
    if (!circuit.declares(symbol)) throw BindingError("unknown symbol " + symbol);
    if (!std::isfinite(value)) throw BindingError("non-finite value for symbol " + symbol);
  }
  for (const auto& symbol : circuit.params()) {
    if (!binding.contains(symbol)) throw BindingError("missing binding for symbol " + symbol);
  }
  BoundCircuit out;
  out.n = circuit.size();
  out.gates.reserve(circuit.gates().size());
  for (const auto& gate : circuit.gates()) {
    Matrix m;
    if (gate.kind == GateKind::U1 || gate.kind == GateKind::U2) {
      m = gate.matrix;
    } else {
      m = gate_matrix(gate.kind, gate.angle ? gate.angle->evaluate(binding) : 0.0);
    }
    out.gates.push_back(BoundGate{gate.kind, gate.qubits, std::move(m)});
  }
  return out;
}

nlohmann::json to_json(const Circuit& circuit) {
  nlohmann::json gates = nlohmann::json::array();
  for (const auto& gate : circuit.gates()) {
    nlohmann::json g = {{"gate", gate_name(gate.kind)}, {"qubits", gate.qubits}};
    if (gate.angle) {
      if (gate.angle->symbol) {
        g["param"] = *gate.angle->symbol;
        g["coefficient"] = gate.angle->coefficient;
      } else {
        g["angle"] = gate.angle->constant;
      }
    }
    if (gate.matrix.size() != 0) g["matrix"] = matrix_to_json(gate.matrix);
    gates.push_back(std::move(g));
  }
  nlohmann::json marks = nlohmann::json::object();
  for (const auto& [name, step] : circuit.checkpoints()) marks[name] = step;
  return {{"qubits", circuit.size()},
          {"params", circuit.params()},
          {"gates", std::move(gates)},
          {"marks", std::move(marks)}};
}

Circuit circuit_from_json(const nlohmann::json& j) {
  Circuit out(j.at("qubits").get<int>());
  for (const auto& p : j.at("params")) out.declare(p.get<std::string>());
  // Marks are interleaved with gates by step.
  std::multimap<std::size_t, std::string> marks;
  if (j.contains("marks")) {
    for (const auto& [name, step] : j.at("marks").items()) marks.emplace(step.get<std::size_t>(), name);
  }
  std::size_t step = 0;
  auto flush_marks = [&] {
    auto [lo, hi] = marks.equal_range(step);
    for (auto it = lo; it != hi; ++it) out.mark(it->second);
  };
  for (const auto& g : j.at("gates")) {
    flush_marks();
    const auto name = g.at("gate").get<std::string>();
    const auto kind = gate_kind_from_name(name);
    if (!kind) throw std::invalid_argument("unknown gate " + name);
    auto qubits = g.at("qubits").get<std::vector<int>>();
    if (*kind == GateKind::U1 || *kind == GateKind::U2) {
      out.add(Gate{*kind, std::move(qubits), std::nullopt, matrix_from_json(g.at("matrix"))});
    } else if (is_parametric(*kind)) {
      Angle angle = g.contains("param")
                        ? Angle::of(g.at("param").get<std::string>(), g.value("coefficient", 1.0))
                        : Angle::fixed(g.at("angle").get<double>());
      out.add(Gate{*kind, std::move(qubits), std::move(angle), Matrix()});
    } else {
      out.add(Gate::fixed(*kind, std::move(qubits)));
    }
    ++step;
  }
  flush_marks();
  return out;
}

}  // namespace dh
