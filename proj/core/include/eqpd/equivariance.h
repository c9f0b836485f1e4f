// Copyright 2026 The eqpd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EQPD_EQUIVARIANCE_H_
#define EQPD_EQUIVARIANCE_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "eqpd/numerics.h"

namespace eqpd {

using MatrixMap = std::function<ComplexMatrix(const ComplexMatrix&)>;

struct EquivarianceReport {
  std::string mode;  // "ue-pe", "2d-pe" or "row-local"
  std::size_t trials = 0;
  std::vector<double> deviations;  // per trial; +inf when f threw
  double max_rel_dev = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  // First trial whose deviation exceeded the tolerance.
  std::optional<std::size_t> counterexample_trial;
  std::vector<std::string> failures;  // messages from trials where f threw
};

// Per trial: H ~ CN(0,1)^{N x K}, Haar U (N x N), uniform Pi (K x K);
// deviation = ||f(U H Pi^T) - U f(H) Pi^T||_F / max(||U f(H) Pi^T||_F, 1e-30).
EquivarianceReport CheckUePe(const MatrixMap& f, std::size_t n_antennas,
                             std::size_t n_users, std::size_t trials, double tol,
                             std::uint64_t seed);

// As CheckUePe with a uniform antenna permutation in place of U.
EquivarianceReport Check2dPe(const MatrixMap& f, std::size_t n_antennas,
                             std::size_t n_users, std::size_t trials, double tol,
                             std::uint64_t seed);

// Per trial: replace one random row r of H by adding a random complex
// vector; deviation = ||rows != r of (f(H') - f(H))||_F /
// max(||rows != r of f(H)||_F, 1e-30). Apply to maps without a global
// normalization.
EquivarianceReport CheckRowLocality(const MatrixMap& f, std::size_t n_antennas,
                                    std::size_t n_users, std::size_t trials,
                                    double tol, std::uint64_t seed);

}  // namespace eqpd

#endif  // EQPD_EQUIVARIANCE_H_
