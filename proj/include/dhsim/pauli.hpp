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

#pragma once

// Pauli strings and weighted sums of Pauli strings.
//
// Coefficients are stored against unnormalized strings P = s_1 (x) ... (x) s_n
// with s_k in {I, X, Y, Z}. The orthonormal basis elements used in the
// Heisenberg-picture literature are Gamma = P / sqrt(2^n); a coefficient c on
// P therefore corresponds to c * sqrt(2^n) on Gamma.
//
// Bit layout: a string is two n-bit planes. Bit k-1 of `x_bits` / `z_bits`
// describes qubit k: I=(0,0), X=(1,0), Y=(1,1), Z=(0,1). Text renders qubit 1
// first, so "XZ" is X on qubit 1 and Z on qubit 2.

#include <json.hpp>

#include <compare>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dhsim/dense.hpp"

namespace dh {

enum class PauliLetter : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char to_char(PauliLetter letter);
PauliLetter letter_from_char(char c);

/// A power of i: 0 -> +1, 1 -> +i, 2 -> -1, 3 -> -i.
struct Phase {
  std::uint8_t power = 0;

  Complex value() const;
  friend Phase operator*(Phase a, Phase b) {
    return Phase{static_cast<std::uint8_t>((a.power + b.power) & 3U)};
  }
  friend bool operator==(Phase, Phase) = default;
};

struct LetterProduct {
  Phase phase;
  PauliLetter letter;
};

/// sigma_a sigma_b = phase * sigma_c.
LetterProduct mul_letters(PauliLetter a, PauliLetter b);

inline constexpr int kMaxQubits = 64;

class PauliString {
 public:
  /// Identity on `n` qubits.
  explicit PauliString(int n);
  PauliString(int n, std::uint64_t x_bits, std::uint64_t z_bits);

  /// "XIZY" -> X on qubit 1, I on 2, Z on 3, Y on 4.
  static PauliString from_text(std::string_view text);
  /// `letter` on `qubit` (1-based), identity elsewhere.
  static PauliString single(int n, int qubit, PauliLetter letter);

  int size() const noexcept { return n_; }
  std::uint64_t x_bits() const noexcept { return x_; }
  std::uint64_t z_bits() const noexcept { return z_; }

  PauliLetter letter(int qubit) const;
  PauliString with_letter(int qubit, PauliLetter letter) const;

  bool is_identity() const noexcept { return (x_ | z_) == 0; }
  int weight() const noexcept;
  bool commutes_with(const PauliString& other) const;

  std::string to_string() const;

  friend bool operator==(const PauliString&, const PauliString&) = default;
  friend auto operator<=>(const PauliString&, const PauliString&) = default;

 private:
  int n_;
  std::uint64_t x_;
  std::uint64_t z_;
};

struct PauliStringHash {
  std::size_t operator()(const PauliString& p) const noexcept {
    std::uint64_t h = p.x_bits() * 0x9E3779B97F4A7C15ULL;
    h ^= p.z_bits() + 0x7F4A7C159E3779B9ULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h ^ static_cast<std::uint64_t>(p.size()));
  }
};

/// Factor-wise product. Throws std::invalid_argument on a size mismatch.
std::pair<Phase, PauliString> mul_strings(const PauliString& p,
                                          const PauliString& q);

inline constexpr double kPruneThreshold = 1e-14;
inline constexpr std::size_t kDefaultMaxTerms = 1'000'000;

/// Sum of Pauli strings with complex coefficients over a fixed qubit count.
///
/// Terms are kept sorted by string and never hold a coefficient whose
/// magnitude is below kPruneThreshold.
class PauliSum {
 public:
  using Term = std::pair<PauliString, Complex>;

  /// The zero operator on `n` qubits.
  explicit PauliSum(int n);
  PauliSum(const PauliString& string, Complex coefficient = 1.0);

  static PauliSum identity(int n);
  /// Merges duplicate strings, prunes, and sorts.
  static PauliSum from_terms(int n, std::vector<Term> terms,
                             std::size_t max_terms = kDefaultMaxTerms);

  int size() const noexcept { return n_; }
  std::size_t term_count() const noexcept { return terms_.size(); }
  std::span<const Term> terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  Complex coefficient(const PauliString& string) const;
  /// True iff every coefficient is real to `tol`.
  bool is_hermitian(double tol = 1e-12) const;

  friend bool operator==(const PauliSum&, const PauliSum&) = default;

 private:
  int n_;
  std::vector<Term> terms_;
};

PauliSum sum_add(const PauliSum& a, const PauliSum& b,
                 std::size_t max_terms = kDefaultMaxTerms);
PauliSum sum_scale(const PauliSum& a, Complex factor);
PauliSum sum_mul(const PauliSum& a, const PauliSum& b,
                 std::size_t max_terms = kDefaultMaxTerms);

inline PauliSum operator+(const PauliSum& a, const PauliSum& b) { return sum_add(a, b); }
inline PauliSum operator-(const PauliSum& a, const PauliSum& b) {
  return sum_add(a, sum_scale(b, -1.0));
}
inline PauliSum operator*(const PauliSum& a, const PauliSum& b) { return sum_mul(a, b); }
inline PauliSum operator*(Complex factor, const PauliSum& a) { return sum_scale(a, factor); }

/// ab - ba.
PauliSum commutator(const PauliSum& a, const PauliSum& b,
                    std::size_t max_terms = kDefaultMaxTerms);

/// Coefficients c_P = Tr(m P) / 2^n so that m = sum_P c_P P.
PauliSum decompose(const Matrix& m);
Matrix to_dense(const PauliSum& s, int dense_budget = kDefaultDenseQubits);

/// Tr(ab).
Complex hs_inner(const PauliSum& a, const PauliSum& b);

/// sqrt(sum_P |c_P|^2), i.e. the Frobenius norm scaled by 2^(-n/2).
double coefficient_norm(const PauliSum& s);

/// The operator applied to a state vector in the documented basis ordering.
Vector apply(const PauliSum& s, const Vector& v);

/// <0...0| s |0...0>: the sum of coefficients on strings over {I, Z}.
Complex standard_expectation(const PauliSum& s);

std::string to_string(const PauliSum& s);

nlohmann::json to_json(const PauliSum& s);
PauliSum pauli_sum_from_json(const nlohmann::json& j);

}  // namespace dh
