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

// `.dh` text format: parser and canonical serializer.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dhsim/circuit.hpp"
#include "dhsim/errors.hpp"

namespace dh {
namespace {

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size()) break;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    tokens.push_back({line.substr(start, i - start), start + 1});
  }
  return tokens;
}

bool is_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  }
  return true;
}

bool is_mark_name(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
  }
  return true;
}

std::optional<double> to_double(std::string_view s) {
  double v = 0.0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<int> to_int(std::string_view s) {
  int v = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) return std::nullopt;
  return v;
}

class Parser {
 public:
  Circuit run(std::string_view text) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t eol = text.find('\n', pos);
      std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
      ++line_no;
      line_ = line_no;
      if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      statement(tokenize(line));
      if (eol == std::string_view::npos) break;
      pos = eol + 1;
    }
    if (!circuit_) throw ParseError(line_, 1, "missing 'qubits <n>' statement");
    return std::move(*circuit_);
  }

 private:
  [[noreturn]] void fail(const Token& at, const std::string& what) const {
    throw ParseError(line_, at.column, what);
  }

  void expect_count(const std::vector<Token>& tokens, std::size_t count, const std::string& usage) const {
    if (tokens.size() != count) fail(tokens.size() > count ? tokens[count] : tokens.back(), "expected '" + usage + "'");
  }

  Circuit& circuit(const Token& at) {
    if (!circuit_) fail(at, "'qubits <n>' must come first");
    return *circuit_;
  }

  void statement(const std::vector<Token>& tokens) {
    if (tokens.empty()) return;
    const Token& head = tokens[0];
    if (head.text == "qubits") {
      expect_count(tokens, 2, "qubits <n>");
      if (circuit_) fail(head, "duplicate 'qubits' statement");
      const auto n = to_int(tokens[1].text);
      if (!n || *n < 1) fail(tokens[1], "qubit count must be a positive integer");
      circuit_.emplace(*n);
    } else if (head.text == "param") {
      expect_count(tokens, 2, "param <symbol>");
      if (!is_identifier(tokens[1].text)) fail(tokens[1], "invalid symbol name");
      circuit(head).declare(std::string(tokens[1].text));
    } else if (head.text == "mark") {
      expect_count(tokens, 2, "mark <name>");
      if (!is_mark_name(tokens[1].text) || tokens[1].text == "final") fail(tokens[1], "invalid checkpoint name");
      circuit(head).mark(std::string(tokens[1].text));
    } else {
      gate(tokens);
    }
  }

  Angle angle(std::string_view arg, const Token& head, std::size_t offset) {
    const Token at{arg, head.column + offset};
    if (arg.empty()) fail(at, "empty angle");
    if (auto v = to_double(arg)) return Angle::fixed(*v);
    double coefficient = 1.0;
    std::string_view symbol = arg;
    if (auto star = arg.find('*'); star != std::string_view::npos) {
      const auto c = to_double(arg.substr(0, star));
      if (!c) fail(at, "invalid angle coefficient");
      coefficient = *c;
      symbol = arg.substr(star + 1);
    } else if (arg.front() == '-') {
      coefficient = -1.0;
      symbol = arg.substr(1);
    }
    if (!is_identifier(symbol)) fail(at, "invalid angle '" + std::string(arg) + "'");
    if (!circuit(head).declares(symbol)) fail(at, "undeclared symbol " + std::string(symbol));
    return Angle::of(std::string(symbol), coefficient);
  }

  void gate(const std::vector<Token>& tokens) {
    const Token& head = tokens[0];
    std::string_view name = head.text;
    std::optional<std::string_view> arg;
    if (auto open = name.find('('); open != std::string_view::npos) {
      if (name.back() != ')') fail(head, "unterminated '(' in gate");
      arg = name.substr(open + 1, name.size() - open - 2);
      name = name.substr(0, open);
    }
    const auto kind = gate_kind_from_name(name);
    if (!kind) fail(head, "unknown gate " + std::string(name));
    Circuit& c = circuit(head);
    if (is_parametric(*kind) != arg.has_value()) {
      fail(head, std::string(gate_name(*kind)) + (arg ? " takes no angle" : " needs an angle, e.g. " +
                                                             std::string(gate_name(*kind)) + "(theta)"));
    }
    const int need = arity(*kind);
    const bool custom = *kind == GateKind::U1 || *kind == GateKind::U2;
    std::size_t next = 1;
    std::vector<int> qubits;
    for (int k = 0; k < need; ++k, ++next) {
      if (next >= tokens.size() || tokens[next].text == "=") {
        fail(next < tokens.size() ? tokens[next] : head,
             std::string(gate_name(*kind)) + " needs " + std::to_string(need) + " qubit(s)");
      }
      const auto q = to_int(tokens[next].text);
      if (!q) fail(tokens[next], "invalid qubit index '" + std::string(tokens[next].text) + "'");
      if (*q < 1 || *q > c.size()) {
        fail(tokens[next], "qubit " + std::to_string(*q) + " out of range 1.." + std::to_string(c.size()));
      }
      if (std::find(qubits.begin(), qubits.end(), *q) != qubits.end()) {
        fail(tokens[next], "duplicate qubit " + std::to_string(*q));
      }
      qubits.push_back(*q);
    }
    Gate g{*kind, qubits, std::nullopt, Matrix()};
    if (arg) g.angle = angle(*arg, head, name.size() + 1);
    if (custom) {
      if (next >= tokens.size() || tokens[next].text != "=") {
        fail(next < tokens.size() ? tokens[next] : head, "expected '=' followed by matrix entries");
      }
      ++next;
      const Eigen::Index dim = Eigen::Index{1} << need;
      const std::size_t want = static_cast<std::size_t>(2 * dim * dim);
      if (tokens.size() - next != want) {
        fail(tokens.back(), "expected " + std::to_string(want) + " numbers (re im pairs, row-major)");
      }
      g.matrix = Matrix(dim, dim);
      for (Eigen::Index r = 0; r < dim; ++r) {
        for (Eigen::Index col = 0; col < dim; ++col) {
          const auto re = to_double(tokens[next].text);
          if (!re) fail(tokens[next], "invalid number");
          const auto im = to_double(tokens[next + 1].text);
          if (!im) fail(tokens[next + 1], "invalid number");
          g.matrix(r, col) = Complex(*re, *im);
          next += 2;
        }
      }
    } else if (next < tokens.size()) {
      fail(tokens[next], "unexpected token '" + std::string(tokens[next].text) + "'");
    }
    try {
      c.add(std::move(g));
    } catch (const std::invalid_argument& e) {
      fail(head, e.what());
    }
  }

  std::size_t line_ = 0;
  std::optional<Circuit> circuit_;
};

std::string format_double(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

}  // namespace

Circuit parse(std::string_view text) { return Parser().run(text); }

std::string serialize(const Circuit& circuit) {
  std::ostringstream out;
  out << "qubits " << circuit.size() << '\n';
  for (const auto& p : circuit.params()) out << "param " << p << '\n';
  auto marks_at = [&](std::size_t step) {
    for (const auto& [name, at] : circuit.checkpoints()) {
      if (at == step) out << "mark " << name << '\n';
    }
  };
  std::size_t step = 0;
  for (const auto& gate : circuit.gates()) {
    marks_at(step++);
    out << gate_name(gate.kind);
    if (gate.angle) out << '(' << gate.angle->to_string() << ')';
    for (int q : gate.qubits) out << ' ' << q;
    if (gate.matrix.size() != 0) {
      out << " =";
      for (Eigen::Index r = 0; r < gate.matrix.rows(); ++r) {
        for (Eigen::Index c = 0; c < gate.matrix.cols(); ++c) {
          out << ' ' << format_double(gate.matrix(r, c).real()) << ' '
              << format_double(gate.matrix(r, c).imag());
        }
      }
    }
    out << '\n';
  }
  marks_at(step);
  return out.str();
}

}  // namespace dh
