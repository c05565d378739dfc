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

#include "dhsim/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include "dhsim/circuit.hpp"
#include "dhsim/descriptor.hpp"
#include "dhsim/errors.hpp"
#include "dhsim/info_flow.hpp"
#include "dhsim/oracle.hpp"
#include "dhsim/reconstruction.hpp"

namespace dh {
namespace {

using nlohmann::json;

struct RunConfig {
  std::string circuit_path;
  std::string builtin;
  std::string bits = "00";
  std::vector<std::string> binds;
  std::string backend = "pauli";
  std::string format = "table";
  std::vector<std::string> subsets;
  std::string measure;
  bool dump_descriptors = false;
  std::string at = "final";
  double tol = 1e-8;
  double descriptor_tol = 1e-8;
  double trace_tol = 1e-8;
  std::uint64_t seed = kDefaultSeed;
  unsigned jobs = 0;
  std::string param;
  int qubit = 0;
  std::size_t grid_points = 5;
};

struct Loaded {
  Circuit circuit;
  std::string name;
};

Loaded load_circuit(const RunConfig& cfg) {
  if (!cfg.circuit_path.empty() && !cfg.builtin.empty()) {
    throw std::invalid_argument("use either --circuit or --builtin, not both");
  }
  if (!cfg.builtin.empty()) return {builtin_circuit(cfg.builtin, cfg.bits), cfg.builtin};
  if (cfg.circuit_path.empty()) throw std::invalid_argument("one of --circuit or --builtin is required");
  std::ifstream in(cfg.circuit_path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read " + cfg.circuit_path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return {parse(buffer.str()), cfg.circuit_path};
}

ParameterBinding parse_bindings(const std::vector<std::string>& binds) {
  ParameterBinding out;
  for (const auto& b : binds) {
    const auto eq = b.find('=');
    if (eq == std::string::npos || eq == 0) throw BindingError("--bind expects symbol=value, got '" + b + "'");
    const std::string value = b.substr(eq + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != value.size()) throw BindingError("invalid value in --bind " + b);
    out[b.substr(0, eq)] = v;
  }
  return out;
}

std::vector<int> parse_qubit_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int q = 0;
    try {
      q = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw std::invalid_argument("invalid qubit list '" + text + "'");
    out.push_back(q);
  }
  if (out.empty()) throw std::invalid_argument("empty qubit list");
  return out;
}

Backend parse_backend(const std::string& name) {
  if (name == "pauli") return Backend::pauli;
  if (name == "dense") return Backend::dense;
  throw std::invalid_argument("unknown backend '" + name + "'");
}

EngineOptions engine_options() { return EngineOptions{kDefaultMaxTerms, dense_budget_from_env()}; }

// Probabilities of outcomes on `qubits` (label order as given) from a
// reduced density matrix whose qubits are sorted.
json distribution_json(const DensityMatrix& rho, const std::vector<int>& qubits) {
  json probs = json::object();
  const std::size_t width = qubits.size();
  for (std::size_t outcome = 0; outcome < (std::size_t{1} << width); ++outcome) {
    std::size_t sorted_index = 0;
    for (std::size_t k = 0; k < width; ++k) {
      if (!((outcome >> k) & 1U)) continue;
      const auto pos = std::find(rho.qubits.begin(), rho.qubits.end(), qubits[k]) - rho.qubits.begin();
      sorted_index |= std::size_t{1} << pos;
    }
    probs[outcome_label(outcome, width)] = rho.entries(static_cast<Eigen::Index>(sorted_index),
                                                       static_cast<Eigen::Index>(sorted_index)).real();
  }
  return probs;
}

double chi_fidelity(const Matrix& rho, double theta) {
  Vector chi(2);
  chi << std::cos(theta / 2.0), std::sin(theta / 2.0);
  return (chi.adjoint() * rho * chi)(0, 0).real();
}

std::string fmt(double v, int precision = 6) {
  std::ostringstream out;
  out << std::setprecision(precision) << v;
  return out.str();
}

std::string fmt_complex(Complex c) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(6) << std::setw(10) << c.real() << (c.imag() < 0 ? " -" : " +") << std::setw(9)
      << std::abs(c.imag()) << 'i';
  return out.str();
}

std::string qubit_set(const std::vector<int>& qubits) {
  std::string out = "{";
  for (std::size_t k = 0; k < qubits.size(); ++k) out += (k ? "," : "") + std::to_string(qubits[k]);
  return out + "}";
}

void print_matrix(std::ostream& out, const Matrix& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    out << "  [";
    for (Eigen::Index c = 0; c < m.cols(); ++c) out << ' ' << fmt_complex(m(r, c));
    out << " ]\n";
  }
}

int cmd_run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Loaded loaded = load_circuit(cfg);
  const Circuit& circuit = loaded.circuit;
  const std::size_t step = circuit.resolve_step(cfg.at);
  const ParameterBinding binding = parse_bindings(cfg.binds);
  const BoundCircuit bound = dh::bind(circuit.prefix(step), binding);
  const EngineOptions eo = engine_options();
  const NetworkState state = evolve(bound, parse_backend(cfg.backend), eo);
  const InitialState initial = InitialState::standard(circuit.size());

  std::vector<std::vector<int>> subsets;
  for (const auto& s : cfg.subsets) subsets.push_back(parse_qubit_list(s));
  std::vector<int> measure;
  if (!cfg.measure.empty()) {
    measure = parse_qubit_list(cfg.measure);
  } else if (cfg.builtin == "bell") {
    measure = {1, 4};
  } else if (cfg.builtin == "superdense") {
    measure = {1, 2};
  }
  const bool teleport = cfg.builtin == "teleport" || cfg.builtin == "partial-teleport";
  if (teleport && subsets.empty()) subsets.push_back({5});

  json result = {{"command", "run"},     {"circuit", loaded.name}, {"n", circuit.size()},
                 {"step", state.step()}, {"backend", cfg.backend}, {"bindings", binding}};
  json reduced = json::array();
  std::vector<DensityMatrix> rhos;
  for (const auto& s : subsets) {
    rhos.push_back(reduced_density(state, s, initial, eo));
    reduced.push_back(to_json(rhos.back()));
  }
  result["reduced"] = std::move(reduced);

  std::optional<double> fidelity;
  if (teleport) {
    const int five[] = {5};
    fidelity = chi_fidelity(reduced_density(state, five, initial, eo).entries, binding.at("theta"));
    result["fidelity"] = {{"qubit", 5}, {"value", *fidelity}};
  }
  std::optional<DensityMatrix> measured;
  if (!measure.empty()) {
    measured = reduced_density(state, measure, initial, eo);
    result["distribution"] = {{"qubits", measure}, {"probabilities", distribution_json(*measured, measure)}};
  }

  std::optional<double> dual;
  if (circuit.size() <= eo.dense_budget) {
    const Matrix heisenberg = global_density(state, initial, eo).entries;
    const Matrix schrodinger = density(evolve_state(bound, eo.dense_budget)).entries;
    dual = trace_distance(heisenberg, schrodinger);
    result["dual_picture_trace_distance"] = *dual;
  } else {
    result["dual_picture_trace_distance"] = nullptr;
  }
  if (cfg.dump_descriptors) result["descriptors"] = to_json(state);

  if (cfg.format == "json") {
    out << result.dump(2) << '\n';
  } else {
    out << "circuit: " << loaded.name << " (" << circuit.size() << " qubits, " << circuit.gates().size()
        << " gates), step " << state.step() << ", backend " << cfg.backend << '\n';
    if (!binding.empty()) {
      out << "bindings:";
      for (const auto& [k, v] : binding) out << ' ' << k << '=' << fmt(v, 10);
      out << '\n';
    }
    for (const auto& rho : rhos) {
      out << "reduced state of " << qubit_set(rho.qubits) << ":\n";
      print_matrix(out, rho.entries);
    }
    if (fidelity) out << "fidelity of qubit 5 with |chi(theta)>: " << std::fixed << std::setprecision(12) << *fidelity
                      << std::defaultfloat << '\n';
    if (measured) {
      out << "outcome distribution on (";
      for (std::size_t k = 0; k < measure.size(); ++k) out << (k ? "," : "") << measure[k];
      out << "):";
      const json dist = distribution_json(*measured, measure);
      for (const auto& [label, p] : dist.items()) {
        out << "  " << label << ": " << fmt(p.get<double>(), 10);
      }
      out << '\n';
    }
    if (dual) {
      out << "dual-picture trace distance: " << fmt(*dual, 3) << '\n';
    } else {
      out << "dual-picture check skipped (n exceeds dense budget)\n";
    }
    if (cfg.dump_descriptors) out << to_json(state).dump(2) << '\n';
  }
  if (dual && *dual > cfg.tol) {
    err << "error: Heisenberg and Schrodinger pictures disagree (trace distance " << *dual << ")\n";
    return kExitInvariant;
  }
  return kExitOk;
}

DependenceOptions dependence_options(const RunConfig& cfg, const Circuit& circuit) {
  DependenceOptions opts;
  opts.grid = default_grid(cfg.grid_points, cfg.seed);
  opts.descriptor_tol = cfg.descriptor_tol;
  opts.trace_tol = cfg.trace_tol;
  opts.at = cfg.at;
  opts.jobs = cfg.jobs;
  opts.engine = engine_options();
  opts.base = complete_binding(circuit, parse_bindings(cfg.binds), cfg.seed);
  return opts;
}

int cmd_audit(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Loaded loaded = load_circuit(cfg);
  const Circuit& circuit = loaded.circuit;
  if (!circuit.declares(cfg.param)) throw BindingError("undeclared parameter " + cfg.param);
  const DependenceOptions opts = dependence_options(cfg, circuit);
  circuit.resolve_step(cfg.at);

  std::vector<int> qubits;
  if (cfg.qubit != 0) {
    if (cfg.qubit < 1 || cfg.qubit > circuit.size()) throw std::invalid_argument("--qubit out of range");
    qubits.push_back(cfg.qubit);
  } else {
    for (int q = 1; q <= circuit.size(); ++q) qubits.push_back(q);
  }
  std::vector<DependenceVerdict> verdicts;
  for (int q : qubits) verdicts.push_back(classify_information(circuit, q, cfg.param, opts));
  const ContiguityReport contiguity = contiguity_audit(circuit, opts);

  if (cfg.format == "json") {
    json v = json::array();
    for (const auto& verdict : verdicts) v.push_back(to_json(verdict));
    json result = {{"command", "audit"},       {"circuit", loaded.name},       {"parameter", cfg.param},
                   {"at", cfg.at},             {"step", contiguity.step},      {"grid", opts.grid},
                   {"verdicts", std::move(v)}, {"contiguity", to_json(contiguity)}};
    out << result.dump(2) << '\n';
  } else {
    out << "audit of " << loaded.name << " for parameter " << cfg.param << " at " << cfg.at << " (step "
        << contiguity.step << ")\n";
    out << std::left << std::setw(7) << "qubit" << std::setw(12) << "descriptor" << std::setw(9) << "reduced"
        << std::setw(8) << "global" << "classification\n";
    for (const auto& v : verdicts) {
      out << std::setw(7) << v.subject.front() << std::setw(12) << (v.descriptor_depends ? "yes" : "no")
          << std::setw(9) << (v.reduced_depends ? "yes" : "no") << std::setw(8) << (v.global_depends ? "yes" : "no")
          << to_string(v.classification) << '\n';
    }
    out << std::right << "contiguity: " << contiguity.checks << " checks, " << contiguity.violations.size()
        << " violations\n";
  }
  if (!contiguity.violations.empty()) {
    err << "error: descriptor depends on a parameter outside its past cone\n";
    return kExitInvariant;
  }
  return kExitOk;
}

// --- demos ---------------------------------------------------------------

int demo_superdense(bool as_json, std::ostream& out) {
  const EngineOptions eo = engine_options();
  json rows = json::array();
  std::set<std::string> outcomes;
  bool deterministic = true;
  static constexpr const char* kBits[] = {"00", "10", "01", "11"};
  static constexpr const char* kGates[] = {"I", "X", "Z", "Y"};
  if (!as_json) out << "bits  encoding  outcome(1,2)  probability\n";
  for (int k = 0; k < 4; ++k) {
    const Circuit c = build_superdense(kBits[k][0] - '0', kBits[k][1] - '0');
    const NetworkState s = evolve(dh::bind(c, {}), Backend::pauli, eo);
    const std::vector<int> pair{1, 2};
    const json dist = distribution_json(reduced_density(s, pair, InitialState::standard(2), eo), pair);
    std::string best;
    double p = -1.0;
    for (const auto& [label, v] : dist.items()) {
      if (v.get<double>() > p) {
        p = v.get<double>();
        best = label;
      }
    }
    deterministic = deterministic && std::abs(p - 1.0) < 1e-10;
    outcomes.insert(best);
    rows.push_back({{"bits", kBits[k]}, {"encoding", kGates[k]}, {"outcome", best}, {"probability", p}});
    if (!as_json) out << kBits[k] << "    " << kGates[k] << "         " << best << "            " << fmt(p, 12) << '\n';
  }
  const bool ok = deterministic && outcomes.size() == 4;
  if (as_json) {
    out << json{{"demo", "superdense"}, {"rows", rows}, {"distinct", outcomes.size() == 4}}.dump(2) << '\n';
  } else {
    out << (ok ? "four encodings give four distinct deterministic outcomes\n" : "encodings are NOT distinguishable\n");
  }
  return ok ? kExitOk : kExitInvariant;
}

int demo_bell(bool as_json, std::ostream& out) {
  const EngineOptions eo = engine_options();
  const Circuit c = build_bell_experiment();
  std::vector<double> angles;
  for (int k = 0; k < 5; ++k) angles.push_back(k * std::numbers::pi / 5.0);
  double marginal1_spread = 0.0, marginal4_spread = 0.0, max_correlation = 0.0;
  std::vector<std::vector<double>> p1(5), p4(5);
  json grid = json::array();
  for (std::size_t a = 0; a < angles.size(); ++a) {
    for (std::size_t b = 0; b < angles.size(); ++b) {
      const NetworkState s = evolve(dh::bind(c, {{"theta", angles[a]}, {"phi", angles[b]}}), Backend::pauli, eo);
      const std::vector<int> rec{1, 4};
      const DensityMatrix rho = reduced_density(s, rec, InitialState::standard(4), eo);
      double p[4];
      for (int k = 0; k < 4; ++k) p[k] = rho.entries(k, k).real();
      const double m1 = p[1] + p[3];  // record 1 reads 1
      const double m4 = p[2] + p[3];  // record 4 reads 1
      p1[a].push_back(m1);
      p4[b].push_back(m4);
      max_correlation = std::max(max_correlation, std::abs(p[3] - m1 * m4));
      grid.push_back({{"theta", angles[a]}, {"phi", angles[b]}, {"p00", p[0]}, {"p10", p[1]}, {"p01", p[2]}, {"p11", p[3]}});
    }
  }
  for (std::size_t a = 0; a < angles.size(); ++a) {
    const auto [lo1, hi1] = std::minmax_element(p1[a].begin(), p1[a].end());
    const auto [lo4, hi4] = std::minmax_element(p4[a].begin(), p4[a].end());
    marginal1_spread = std::max(marginal1_spread, *hi1 - *lo1);
    marginal4_spread = std::max(marginal4_spread, *hi4 - *lo4);
  }
  const bool ok = marginal1_spread < 1e-10 && marginal4_spread < 1e-10 && max_correlation > 1e-3;
  if (as_json) {
    out << json{{"demo", "bell"},
                {"grid", grid},
                {"record1_marginal_spread_over_phi", marginal1_spread},
                {"record4_marginal_spread_over_theta", marginal4_spread},
                {"max_abs_p11_minus_product", max_correlation}}
               .dump(2)
        << '\n';
  } else {
    out << "Bell experiment: pair on 2,3; theta-measurement of 2 recorded in 1, phi-measurement of 3 in 4\n";
    out << "theta    phi      P(00)    P(10)    P(01)    P(11)\n";
    for (const auto& row : grid) {
      out << std::fixed << std::setprecision(4) << row["theta"].get<double>() << "   " << row["phi"].get<double>()
          << "   " << row["p00"].get<double>() << "   " << row["p10"].get<double>() << "   "
          << row["p01"].get<double>() << "   " << row["p11"].get<double>() << std::defaultfloat << '\n';
    }
    out << "record 1 marginal spread over phi: " << fmt(marginal1_spread, 3) << '\n';
    out << "record 4 marginal spread over theta: " << fmt(marginal4_spread, 3) << '\n';
    out << "max |P(1,1) - P(1)P(1)|: " << fmt(max_correlation, 6) << " (non-factorisable)\n";
  }
  return ok ? kExitOk : kExitInvariant;
}

int demo_teleport(bool as_json, std::ostream& out, unsigned jobs) {
  const EngineOptions eo = engine_options();
  const Circuit c = build_teleportation();
  const Circuit after_bell = c.prefix(c.resolve_step("after-bell"));
  const Matrix half = Matrix::Identity(2, 2) / 2.0;
  json samples = json::array();
  double worst_fidelity = 1.0, worst_mixed = 0.0;
  for (double theta : default_grid(5)) {
    const NetworkState final_state = evolve(dh::bind(c, {{"theta", theta}}), Backend::pauli, eo);
    const int five[] = {5};
    const double f = chi_fidelity(reduced_density(final_state, five, InitialState::standard(5), eo).entries, theta);
    const NetworkState mid = evolve(dh::bind(after_bell, {{"theta", theta}}), Backend::pauli, eo);
    double mixed = 0.0;
    for (int q = 1; q <= 5; ++q) {
      const int one[] = {q};
      mixed = std::max(mixed, trace_distance(reduced_density(mid, one, InitialState::standard(5), eo).entries, half));
    }
    worst_fidelity = std::min(worst_fidelity, f);
    worst_mixed = std::max(worst_mixed, mixed);
    samples.push_back({{"theta", theta}, {"fidelity", f}, {"after_bell_max_distance_from_mixed", mixed}});
  }
  DependenceOptions opts;
  opts.jobs = jobs;
  opts.engine = eo;
  opts.at = "after-bell";
  json verdicts = json::array();
  std::vector<DependenceVerdict> vs;
  for (int q : {2, 3}) vs.push_back(classify_information(c, q, "theta", opts));
  opts.at = "final";
  vs.push_back(classify_information(c, 5, "theta", opts));
  for (const auto& v : vs) verdicts.push_back(to_json(v));
  const bool ok = worst_fidelity >= 1.0 - 1e-10 && worst_mixed < 1e-10 &&
                  vs[0].classification == InformationClass::locally_inaccessible &&
                  vs[1].classification == InformationClass::locally_inaccessible &&
                  vs[2].classification == InformationClass::locally_accessible;
  if (as_json) {
    out << json{{"demo", "teleport"}, {"samples", samples}, {"verdicts", verdicts}}.dump(2) << '\n';
  } else {
    out << "theta        fidelity          max T(rho_i, I/2) after Bell measurement\n";
    for (const auto& s : samples) {
      out << std::fixed << std::setprecision(6) << s["theta"].get<double>() << "     " << std::setprecision(12)
          << s["fidelity"].get<double>() << std::defaultfloat << "    "
          << fmt(s["after_bell_max_distance_from_mixed"].get<double>(), 3) << '\n';
    }
    for (const auto& v : vs) {
      out << "qubit " << v.subject.front() << " at " << v.at << ": " << to_string(v.classification) << '\n';
    }
  }
  return ok ? kExitOk : kExitInvariant;
}

// Descriptor change and statistics change under a gauge unitary.
struct GaugeOutcome {
  std::string name;
  double statistics_delta = 0.0;
  double descriptor_delta = 0.0;
};

int demo_gauge(bool as_json, std::ostream& out, unsigned jobs) {
  const EngineOptions eo = engine_options();
  Circuit base(2);
  base.add(Gate::fixed(GateKind::H, {1}));
  base.add(Gate::fixed(GateKind::CNOT, {1, 2}));
  base.add(Gate::rotation(GateKind::RY, 2, Angle::fixed(0.4)));
  const NetworkState state = evolve(dh::bind(base, {}), Backend::pauli, eo);
  const InitialState initial = InitialState::standard(2);
  const Matrix rho = global_density(state, initial, eo).entries;

  std::vector<GaugeOutcome> outcomes;
  for (const auto& [name, gate] :
       {std::pair<std::string, BoundGate>{"PHASE(0.7) on 1", BoundGate{GateKind::PHASE, {1}, gate_matrix(GateKind::PHASE, 0.7)}},
        std::pair<std::string, BoundGate>{"CZ on 1,2", BoundGate{GateKind::CZ, {1, 2}, gate_matrix(GateKind::CZ)}}}) {
    const NetworkState gauged = gauge_transform(state, BoundCircuit{2, {gate}}, eo);
    GaugeOutcome o{name};
    o.statistics_delta = trace_distance(global_density(gauged, initial, eo).entries, rho);
    for (int q = 1; q <= 2; ++q) {
      o.descriptor_delta = std::max(o.descriptor_delta, descriptor_distance(state.descriptor(q), gauged.descriptor(q)));
    }
    outcomes.push_back(o);
  }
  // The gauge parameter as a circuit symbol: PHASE(alpha) before anything else.
  Circuit gauged_circuit(2);
  gauged_circuit.declare("alpha");
  gauged_circuit.add(Gate::rotation(GateKind::PHASE, 1, Angle::of("alpha")));
  for (const auto& g : base.gates()) gauged_circuit.add(g);
  DependenceOptions opts;
  opts.jobs = jobs;
  opts.engine = eo;
  const DependenceVerdict verdict = classify_information(gauged_circuit, 1, "alpha", opts);

  bool ok = verdict.classification == InformationClass::def1_only;
  json rows = json::array();
  for (const auto& o : outcomes) {
    ok = ok && o.statistics_delta < 1e-10 && o.descriptor_delta > 0.1;
    rows.push_back({{"gauge", o.name}, {"statistics_delta", o.statistics_delta}, {"descriptor_delta", o.descriptor_delta}});
  }
  if (as_json) {
    out << json{{"demo", "gauge"}, {"transforms", rows}, {"verdict", to_json(verdict)}}.dump(2) << '\n';
  } else {
    for (const auto& o : outcomes) {
      out << o.name << ": statistics identical (delta " << fmt(o.statistics_delta, 3) << " < 1e-10), descriptors differ (delta "
          << fmt(o.descriptor_delta, 6) << " > 0.1)\n";
    }
    out << "gauge parameter alpha, qubit 1: " << to_string(verdict.classification) << '\n';
  }
  return ok ? kExitOk : kExitInvariant;
}

int demo_history(bool as_json, std::ostream& out) {
  const EngineOptions eo = engine_options();
  Circuit c(4);
  c.add(Gate::fixed(GateKind::H, {1}));
  c.add(Gate::fixed(GateKind::CNOT, {1, 2}));
  c.add(Gate::fixed(GateKind::H, {3}));
  c.add(Gate::fixed(GateKind::CNOT, {3, 4}));
  c.add(Gate::fixed(GateKind::S, {3}));
  c.add(Gate::fixed(GateKind::CZ, {3, 4}));
  const NetworkState s = evolve(dh::bind(c, {}), Backend::pauli, eo);
  const InitialState initial = InitialState::standard(4);
  const int one[] = {1};
  const int three[] = {3};
  const Matrix rho1 = reduced_density(s, one, initial, eo).entries;
  const Matrix rho3 = reduced_density(s, three, initial, eo).entries;
  const double marginal_delta = trace_distance(rho1, rho3);
  const double descriptor_delta = descriptor_distance(s.descriptor(1), s.descriptor(3));
  const bool ok = marginal_delta < 1e-10 && descriptor_delta > 0.1;
  if (as_json) {
    out << json{{"demo", "history"},
                {"circuit", serialize(c)},
                {"marginal_trace_distance", marginal_delta},
                {"descriptor_distance", descriptor_delta},
                {"q1z", to_json(s.component(1, 3))},
                {"q3z", to_json(s.component(3, 3))}}
               .dump(2)
        << '\n';
  } else {
    out << "qubits 1 and 3 after different entangling histories\n";
    out << "reduced states equal (trace distance " << fmt(marginal_delta, 3) << ")\n";
    out << "descriptor distance " << fmt(descriptor_delta, 6) << '\n';
    out << "q1z = " << to_string(s.component(1, 3)) << '\n';
    out << "q3z = " << to_string(s.component(3, 3)) << '\n';
  }
  return ok ? kExitOk : kExitInvariant;
}

int cmd_demo(const std::string& name, const RunConfig& cfg, std::ostream& out) {
  const bool as_json = cfg.format == "json";
  if (name == "superdense") return demo_superdense(as_json, out);
  if (name == "bell") return demo_bell(as_json, out);
  if (name == "teleport") return demo_teleport(as_json, out, cfg.jobs);
  if (name == "gauge") return demo_gauge(as_json, out, cfg.jobs);
  if (name == "history") return demo_history(as_json, out);
  throw std::invalid_argument("unknown demo '" + name + "' (bell, superdense, teleport, gauge, history)");
}

void add_source_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--circuit", cfg.circuit_path, "Circuit file in .dh format");
  cmd->add_option("--builtin", cfg.builtin, "bell, superdense, teleport, partial-teleport, contiguity-a, contiguity-b");
  cmd->add_option("--bits", cfg.bits, "Superdense message bits (00, 10, 01, 11)");
  cmd->add_option("--bind", cfg.binds, "symbol=value (repeatable)");
  cmd->add_option("--at", cfg.at, "Evaluation prefix: final, a checkpoint name, or a step count");
  cmd->add_option("--jobs", cfg.jobs, "Worker threads for grid evaluations (0 = all cores)");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Heisenberg-picture quantum circuit simulator"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string demo_name;

  auto* run = app.add_subcommand("run", "Evolve descriptors and reconstruct states");
  add_source_options(run, cfg);
  run->add_option("--backend", cfg.backend, "pauli or dense")->check(CLI::IsMember({"pauli", "dense"}));
  run->add_option("--subset", cfg.subsets, "Comma-separated qubits whose reduced state to print (repeatable)");
  run->add_option("--measure", cfg.measure, "Comma-separated qubits for the outcome distribution");
  run->add_flag("--dump-descriptors", cfg.dump_descriptors, "Include descriptors in the output");
  run->add_option("--tol", cfg.tol, "Dual-picture tolerance (trace distance)");

  auto* audit = app.add_subcommand("audit", "Classify parameter dependence and check contiguity");
  add_source_options(audit, cfg);
  audit->add_option("--param", cfg.param, "Parameter symbol to analyse")->required();
  audit->add_option("--qubit", cfg.qubit, "Analyse one qubit only");
  audit->add_option("--seed", cfg.seed, "Seed for the sampling grid and unbound symbols");
  audit->add_option("--grid", cfg.grid_points, "Number of grid points")->check(CLI::Range(2, 1000));
  audit->add_option("--descriptor-tol", cfg.descriptor_tol, "Descriptor distance tolerance");
  audit->add_option("--trace-tol", cfg.trace_tol, "Trace distance tolerance");

  auto* demo = app.add_subcommand("demo", "Run a packaged scenario");
  demo->add_option("name", demo_name, "bell, superdense, teleport, gauge, history")->required();
  demo->add_option("--jobs", cfg.jobs, "Worker threads for grid evaluations (0 = all cores)");

  for (auto* cmd : {run, audit, demo}) {
    cmd->add_option("--format", cfg.format, "json or table")->check(CLI::IsMember({"json", "table"}));
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    if (run->parsed()) err << run->help();
    return kExitBinding;
  }

  try {
    if (run->parsed()) return cmd_run(cfg, out, err);
    if (audit->parsed()) return cmd_audit(cfg, out, err);
    return cmd_demo(demo_name, cfg, out);
  } catch (const ParseError& e) {
    err << "parse error in " << cfg.circuit_path << ": " << e.what() << '\n';
    return kExitParse;
  } catch (const BindingError& e) {
    err << "binding error: " << e.what() << '\n';
    return kExitBinding;
  } catch (const BudgetError& e) {
    err << "budget exceeded: " << e.what() << '\n';
    return kExitBudget;
  } catch (const InvariantError& e) {
    err << "internal invariant violated: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitBinding;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kExitBinding;
  }
}

}  // namespace dh
