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

#include "dhsim/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "dhsim/errors.hpp"

namespace dh {
namespace {

constexpr std::uint64_t low_mask(int n) {
  return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
}

void check_qubit_count(int n) {
  if (n < 1 || n > kMaxQubits) {
    throw std::invalid_argument("qubit count must be in [1, " +
                                std::to_string(kMaxQubits) + "], got " +
                                std::to_string(n));
  }
}

void check_same_size(int a, int b, const char* op) {
  if (a != b) {
    throw std::invalid_argument(std::string(op) + ": size mismatch (" +
                                std::to_string(a) + " vs " + std::to_string(b) +
                                " qubits)");
  }
}

// i^k for the Y = iXZ bookkeeping in the bit-plane representation.
Complex i_power(int k) {
  switch (k & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

// <b xor x| P |b> = i^{|x&z|} (-1)^{|z&b|}.
inline double z_sign(std::uint64_t z, std::uint64_t b) {
  return (std::popcount(z & b) & 1) ? -1.0 : 1.0;
}

// Collects terms for products and merges. Dense tables are used when the
// expected number of products is comparable to 4^n.
class TermAccumulator {
 public:
  TermAccumulator(int n, std::size_t expected) : n_(n) {
    if (n_ <= kFlatMaxQubits) {
      const std::size_t slots = std::size_t{1} << (2 * n_);
      if (slots <= kFlatAlways || slots <= 4 * expected) {
        flat_.assign(slots, Complex{});
        seen_.assign(slots, false);
      }
    }
  }

  void add(const PauliString& p, Complex c) {
    if (!flat_.empty()) {
      const std::size_t index = p.x_bits() | (p.z_bits() << n_);
      if (!seen_[index]) {
        seen_[index] = true;
        touched_.push_back(index);
      }
      flat_[index] += c;
      return;
    }
    map_[p] += c;
  }

  PauliSum finish(std::size_t max_terms) {
    std::vector<PauliSum::Term> terms;
    if (!flat_.empty()) {
      terms.reserve(touched_.size());
      const std::uint64_t mask = low_mask(n_);
      for (std::size_t index : touched_) {
        const Complex c = flat_[index];
        if (std::abs(c) < kPruneThreshold) continue;
        terms.emplace_back(PauliString(n_, index & mask, (index >> n_) & mask), c);
      }
    } else {
      terms.reserve(map_.size());
      for (const auto& [p, c] : map_) {
        if (std::abs(c) >= kPruneThreshold) terms.emplace_back(p, c);
      }
    }
    return PauliSum::from_terms(n_, std::move(terms), max_terms);
  }

 private:
  static constexpr int kFlatMaxQubits = 10;
  static constexpr std::size_t kFlatAlways = 4096;

  int n_;
  std::vector<Complex> flat_;
  std::vector<bool> seen_;
  std::vector<std::size_t> touched_;
  std::unordered_map<PauliString, Complex, PauliStringHash> map_;
};

}  // namespace

char to_char(PauliLetter letter) {
  static constexpr char kChars[] = {'I', 'X', 'Y', 'Z'};
  return kChars[static_cast<int>(letter)];
}

PauliLetter letter_from_char(char c) {
  switch (c) {
    case 'I': return PauliLetter::I;
    case 'X': return PauliLetter::X;
    case 'Y': return PauliLetter::Y;
    case 'Z': return PauliLetter::Z;
    default:
      throw std::invalid_argument(std::string("not a Pauli letter: '") + c + "'");
  }
}

Complex Phase::value() const { return i_power(power); }

LetterProduct mul_letters(PauliLetter a, PauliLetter b) {
  if (a == PauliLetter::I) return {Phase{0}, b};
  if (b == PauliLetter::I) return {Phase{0}, a};
  if (a == b) return {Phase{0}, PauliLetter::I};
  // Letters 1,2,3 = X,Y,Z; the third letter is the remaining index and the
  // phase is +i for cyclic order (XY, YZ, ZX), -i otherwise.
  const int ia = static_cast<int>(a);
  const int ib = static_cast<int>(b);
  const auto c = static_cast<PauliLetter>(6 - ia - ib);
  const bool cyclic = (ib - ia + 3) % 3 == 1;
  return {Phase{static_cast<std::uint8_t>(cyclic ? 1 : 3)}, c};
}

PauliString::PauliString(int n) : PauliString(n, 0, 0) {}

PauliString::PauliString(int n, std::uint64_t x_bits, std::uint64_t z_bits)
    : n_(n), x_(x_bits), z_(z_bits) {
  check_qubit_count(n);
  if (((x_ | z_) & ~low_mask(n)) != 0) {
    throw std::invalid_argument("Pauli string bits set beyond qubit count");
  }
}

PauliString PauliString::from_text(std::string_view text) {
  PauliString out(static_cast<int>(text.size()));
  for (std::size_t k = 0; k < text.size(); ++k) {
    out = out.with_letter(static_cast<int>(k) + 1, letter_from_char(text[k]));
  }
  return out;
}

PauliString PauliString::single(int n, int qubit, PauliLetter letter) {
  return PauliString(n).with_letter(qubit, letter);
}

PauliLetter PauliString::letter(int qubit) const {
  if (qubit < 1 || qubit > n_) throw std::out_of_range("qubit index out of range");
  const unsigned x = (x_ >> (qubit - 1)) & 1U;
  const unsigned z = (z_ >> (qubit - 1)) & 1U;
  if (x && z) return PauliLetter::Y;
  if (x) return PauliLetter::X;
  if (z) return PauliLetter::Z;
  return PauliLetter::I;
}

PauliString PauliString::with_letter(int qubit, PauliLetter letter) const {
  if (qubit < 1 || qubit > n_) throw std::out_of_range("qubit index out of range");
  const std::uint64_t bit = std::uint64_t{1} << (qubit - 1);
  const bool x = letter == PauliLetter::X || letter == PauliLetter::Y;
  const bool z = letter == PauliLetter::Z || letter == PauliLetter::Y;
  return PauliString(n_, x ? (x_ | bit) : (x_ & ~bit), z ? (z_ | bit) : (z_ & ~bit));
}

int PauliString::weight() const noexcept { return std::popcount(x_ | z_); }

bool PauliString::commutes_with(const PauliString& other) const {
  check_same_size(n_, other.n_, "commutes_with");
  return (std::popcount((x_ & other.z_) ^ (z_ & other.x_)) & 1) == 0;
}

std::string PauliString::to_string() const {
  std::string out(static_cast<std::size_t>(n_), 'I');
  for (int q = 1; q <= n_; ++q) out[q - 1] = to_char(letter(q));
  return out;
}

std::pair<Phase, PauliString> mul_strings(const PauliString& p, const PauliString& q) {
  check_same_size(p.size(), q.size(), "mul_strings");
  const std::uint64_t px = p.x_bits(), pz = p.z_bits();
  const std::uint64_t qx = q.x_bits(), qz = q.z_bits();
  const std::uint64_t x1 = px & ~pz, y1 = px & pz, z1 = ~px & pz;
  const std::uint64_t x2 = qx & ~qz, y2 = qx & qz, z2 = ~qx & qz;
  const std::uint64_t plus = (x1 & y2) | (y1 & z2) | (z1 & x2);
  const std::uint64_t minus = (y1 & x2) | (z1 & y2) | (x1 & z2);
  const int power = std::popcount(plus) + 3 * std::popcount(minus);
  return {Phase{static_cast<std::uint8_t>(power & 3)},
          PauliString(p.size(), px ^ qx, pz ^ qz)};
}

PauliSum::PauliSum(int n) : n_(n) { check_qubit_count(n); }

PauliSum::PauliSum(const PauliString& string, Complex coefficient) : n_(string.size()) {
  if (std::abs(coefficient) >= kPruneThreshold) terms_.emplace_back(string, coefficient);
}

PauliSum PauliSum::identity(int n) { return PauliSum(PauliString(n), 1.0); }

PauliSum PauliSum::from_terms(int n, std::vector<Term> terms, std::size_t max_terms) {
  PauliSum out(n);
  for (const auto& [p, c] : terms) check_same_size(n, p.size(), "from_terms");
  std::stable_sort(terms.begin(), terms.end(),
                   [](const Term& a, const Term& b) { return a.first < b.first; });
  for (auto& term : terms) {
    if (!out.terms_.empty() && out.terms_.back().first == term.first) {
      out.terms_.back().second += term.second;
    } else {
      out.terms_.push_back(std::move(term));
    }
  }
  std::erase_if(out.terms_,
                [](const Term& t) { return std::abs(t.second) < kPruneThreshold; });
  if (out.terms_.size() > max_terms) {
    throw BudgetError("Pauli expansion has " + std::to_string(out.terms_.size()) +
                      " terms; the term budget is " + std::to_string(max_terms));
  }
  return out;
}

Complex PauliSum::coefficient(const PauliString& string) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), string,
                             [](const Term& t, const PauliString& s) { return t.first < s; });
  if (it != terms_.end() && it->first == string) return it->second;
  return {};
}

bool PauliSum::is_hermitian(double tol) const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [tol](const Term& t) { return std::abs(t.second.imag()) <= tol; });
}

PauliSum sum_add(const PauliSum& a, const PauliSum& b, std::size_t max_terms) {
  check_same_size(a.size(), b.size(), "sum_add");
  std::vector<PauliSum::Term> merged;
  merged.reserve(a.term_count() + b.term_count());
  auto ia = a.terms().begin();
  auto ib = b.terms().begin();
  while (ia != a.terms().end() || ib != b.terms().end()) {
    if (ib == b.terms().end() || (ia != a.terms().end() && ia->first < ib->first)) {
      merged.push_back(*ia++);
    } else if (ia == a.terms().end() || ib->first < ia->first) {
      merged.push_back(*ib++);
    } else {
      merged.emplace_back(ia->first, ia->second + ib->second);
      ++ia;
      ++ib;
    }
  }
  return PauliSum::from_terms(a.size(), std::move(merged), max_terms);
}

PauliSum sum_scale(const PauliSum& a, Complex factor) {
  std::vector<PauliSum::Term> terms(a.terms().begin(), a.terms().end());
  for (auto& term : terms) term.second *= factor;
  return PauliSum::from_terms(a.size(), std::move(terms), kDefaultMaxTerms);
}

PauliSum sum_mul(const PauliSum& a, const PauliSum& b, std::size_t max_terms) {
  check_same_size(a.size(), b.size(), "sum_mul");
  TermAccumulator acc(a.size(), a.term_count() * b.term_count());
  for (const auto& [p, cp] : a.terms()) {
    for (const auto& [q, cq] : b.terms()) {
      const auto [phase, r] = mul_strings(p, q);
      acc.add(r, phase.value() * cp * cq);
    }
  }
  return acc.finish(max_terms);
}

PauliSum commutator(const PauliSum& a, const PauliSum& b, std::size_t max_terms) {
  check_same_size(a.size(), b.size(), "commutator");
  // PQ - QP is 2PQ for anticommuting strings and zero otherwise.
  TermAccumulator acc(a.size(), a.term_count() * b.term_count());
  for (const auto& [p, cp] : a.terms()) {
    for (const auto& [q, cq] : b.terms()) {
      if (p.commutes_with(q)) continue;
      const auto [phase, r] = mul_strings(p, q);
      acc.add(r, 2.0 * phase.value() * cp * cq);
    }
  }
  return acc.finish(max_terms);
}

PauliSum decompose(const Matrix& m) {
  const auto dim = static_cast<std::uint64_t>(m.rows());
  if (m.rows() != m.cols() || dim < 2 || !std::has_single_bit(dim)) {
    throw std::invalid_argument("decompose: matrix must be square with dimension 2^n, n >= 1");
  }
  const int n = std::countr_zero(dim);
  check_qubit_count(n);
  std::vector<PauliSum::Term> terms;
  std::vector<Complex> f(dim);
  for (std::uint64_t x = 0; x < dim; ++x) {
    for (std::uint64_t b = 0; b < dim; ++b) {
      f[b] = m(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(b ^ x));
    }
    // In-place Walsh-Hadamard transform: f[z] <- sum_b (-1)^{|z&b|} f[b].
    for (std::uint64_t half = 1; half < dim; half <<= 1) {
      for (std::uint64_t start = 0; start < dim; start += 2 * half) {
        for (std::uint64_t k = start; k < start + half; ++k) {
          const Complex u = f[k];
          const Complex v = f[k + half];
          f[k] = u + v;
          f[k + half] = u - v;
        }
      }
    }
    for (std::uint64_t z = 0; z < dim; ++z) {
      const Complex c = i_power(std::popcount(x & z)) * f[z] / static_cast<double>(dim);
      if (std::abs(c) >= kPruneThreshold) terms.emplace_back(PauliString(n, x, z), c);
    }
  }
  return PauliSum::from_terms(n, std::move(terms), std::numeric_limits<std::size_t>::max());
}

Matrix to_dense(const PauliSum& s, int dense_budget) {
  check_dense_budget(s.size(), dense_budget, "to_dense");
  const auto dim = std::uint64_t{1} << s.size();
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (const auto& [p, c] : s.terms()) {
    const std::uint64_t x = p.x_bits(), z = p.z_bits();
    const Complex scaled = c * i_power(std::popcount(x & z));
    for (std::uint64_t b = 0; b < dim; ++b) {
      out(static_cast<Eigen::Index>(b ^ x), static_cast<Eigen::Index>(b)) += scaled * z_sign(z, b);
    }
  }
  return out;
}

Complex hs_inner(const PauliSum& a, const PauliSum& b) {
  check_same_size(a.size(), b.size(), "hs_inner");
  // Tr(PQ) = 2^n delta_PQ for Hermitian strings.
  Complex acc{};
  auto ia = a.terms().begin();
  auto ib = b.terms().begin();
  while (ia != a.terms().end() && ib != b.terms().end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      acc += ia->second * ib->second;
      ++ia;
      ++ib;
    }
  }
  return acc * std::ldexp(1.0, a.size());
}

double coefficient_norm(const PauliSum& s) {
  double acc = 0.0;
  for (const auto& term : s.terms()) acc += std::norm(term.second);
  return std::sqrt(acc);
}

Vector apply(const PauliSum& s, const Vector& v) {
  const auto dim = static_cast<std::uint64_t>(v.size());
  if (s.size() >= 63 || dim != (std::uint64_t{1} << s.size())) {
    throw std::invalid_argument("apply: vector length does not match 2^n");
  }
  Vector out = Vector::Zero(v.size());
  for (const auto& [p, c] : s.terms()) {
    const std::uint64_t x = p.x_bits(), z = p.z_bits();
    const Complex scaled = c * i_power(std::popcount(x & z));
    for (std::uint64_t b = 0; b < dim; ++b) {
      out[static_cast<Eigen::Index>(b ^ x)] += scaled * z_sign(z, b) * v[static_cast<Eigen::Index>(b)];
    }
  }
  return out;
}

Complex standard_expectation(const PauliSum& s) {
  Complex acc{};
  for (const auto& [p, c] : s.terms()) {
    if (p.x_bits() == 0) acc += c;
  }
  return acc;
}

std::string to_string(const PauliSum& s) {
  if (s.is_zero()) return "0";
  std::ostringstream out;
  out.precision(12);
  bool first = true;
  for (const auto& [p, c] : s.terms()) {
    if (!first) out << " + ";
    first = false;
    out << '(' << c.real();
    if (c.imag() != 0.0) out << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << 'i';
    out << ")*" << p.to_string();
  }
  return out.str();
}

nlohmann::json to_json(const PauliSum& s) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [p, c] : s.terms()) {
    terms.push_back({{"string", p.to_string()}, {"re", c.real()}, {"im", c.imag()}});
  }
  return {{"n", s.size()}, {"terms", std::move(terms)}};
}

PauliSum pauli_sum_from_json(const nlohmann::json& j) {
  const int n = j.at("n").get<int>();
  std::vector<PauliSum::Term> terms;
  for (const auto& t : j.at("terms")) {
    auto p = PauliString::from_text(t.at("string").get<std::string>());
    check_same_size(n, p.size(), "pauli_sum_from_json");
    terms.emplace_back(p, Complex(t.at("re").get<double>(), t.at("im").get<double>()));
  }
  return PauliSum::from_terms(n, std::move(terms));
}

}  // namespace dh
