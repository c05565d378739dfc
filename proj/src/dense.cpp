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

#include "dhsim/dense.hpp"

#include <cstdlib>
#include <string>

#include "dhsim/errors.hpp"

namespace dh {

int dense_budget_from_env() {
  const char* raw = std::getenv("DH_DENSE_BUDGET");
  if (raw == nullptr || *raw == '\0') return kDefaultDenseQubits;
  char* end = nullptr;
  const long value = std::strtol(raw, &end, 10);
  if (end == raw || *end != '\0' || value < 1 || value > 30) {
    throw BudgetError("DH_DENSE_BUDGET must be an integer in [1, 30], got '" +
                      std::string(raw) + "'");
  }
  return static_cast<int>(value);
}

void check_dense_budget(int n, int budget, const std::string& what) {
  if (n > budget) {
    throw BudgetError(what + " needs " + std::to_string(n) +
                      " qubits in dense form; the dense budget is " +
                      std::to_string(budget));
  }
}

Eigen::Matrix2cd pauli_matrix(int m) {
  const Complex i(0.0, 1.0);
  Eigen::Matrix2cd out;
  switch (m) {
    case 0: out << 1.0, 0.0, 0.0, 1.0; break;
    case 1: out << 0.0, 1.0, 1.0, 0.0; break;
    case 2: out << 0.0, -i, i, 0.0; break;
    case 3: out << 1.0, 0.0, 0.0, -1.0; break;
    default: throw std::invalid_argument("Pauli index must be in 0..3");
  }
  return out;
}

}  // namespace dh
