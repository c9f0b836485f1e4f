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

#ifndef EQPD_TESTS_TEST_UTIL_H_
#define EQPD_TESTS_TEST_UTIL_H_

#include <cstddef>
#include <ostream>

#include "eqpd/layers.h"
#include "eqpd/numerics.h"

namespace eqpd {

// Readable parameter values in test names.
inline void PrintTo(LayerKind kind, std::ostream* os) { *os << LayerKindName(kind); }

}  // namespace eqpd

namespace eqpd::testing {

inline HiddenState RandomState(std::size_t n, std::size_t k, std::size_t m,
                               RandomSource& rng) {
  HiddenState d(n, k, m);
  for (Complex& e : d.values()) e = rng.ComplexNormal();
  return d;
}

inline ComplexMatrix RandomCoefficient(std::size_t out, std::size_t in,
                                       RandomSource& rng) {
  return RandomGaussian(out, in, rng);
}

// vec of representation m: index k * N + n.
inline ComplexMatrix Vec(const HiddenState& d, std::size_t m) {
  const std::size_t nk = d.block_size();
  ComplexMatrix v(nk, 1);
  for (std::size_t k = 0; k < d.n_users(); ++k) {
    for (std::size_t n = 0; n < d.n_antennas(); ++n) {
      v(k * d.n_antennas() + n, 0) = d.at(n, k, m);
    }
  }
  return v;
}

// Relative Frobenius distance with a floor.
inline double RelDiff(const ComplexMatrix& a, const ComplexMatrix& b) {
  const double scale = FrobeniusNorm(b) > 1e-300 ? FrobeniusNorm(b) : 1.0;
  return FrobeniusNorm(a - b) / scale;
}

inline double MaxAbsDiff(const HiddenState& a, const HiddenState& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) {
    const double d = std::abs(a.values()[i] - b.values()[i]);
    if (d > worst) worst = d;
  }
  return worst;
}

// U D Pi^T applied to every representation.
inline HiddenState Transform(const HiddenState& d, const ComplexMatrix& left,
                             const ComplexMatrix& right_t) {
  HiddenState out(d.n_antennas(), d.n_users(), d.width());
  for (std::size_t m = 0; m < d.width(); ++m) {
    const ComplexMatrix r = left * d.Representation(m) * right_t;
    for (std::size_t k = 0; k < d.n_users(); ++k) {
      for (std::size_t n = 0; n < d.n_antennas(); ++n) out.at(n, k, m) = r(n, k);
    }
  }
  return out;
}

}  // namespace eqpd::testing

#endif  // EQPD_TESTS_TEST_UTIL_H_
