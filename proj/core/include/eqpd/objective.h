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

#ifndef EQPD_OBJECTIVE_H_
#define EQPD_OBJECTIVE_H_

#include <cstddef>
#include <span>

#include "eqpd/channel.h"
#include "eqpd/numerics.h"

namespace eqpd {

// Rate of user k (0-based) in bits/s/Hz:
//   log2(1 + |h_k^H v_k|^2 / (sum_{m != k} |h_k^H v_m|^2 + noise)).
// H and V are both N x K.
double UserRate(const ComplexMatrix& h, const ComplexMatrix& v, std::size_t k,
                double noise);

double SumRate(const ComplexMatrix& h, const ComplexMatrix& v, double noise);
// Uses the scenario's per-user noise.
double SumRate(const ComplexMatrix& h, const ComplexMatrix& v,
               const ScenarioConfig& config);

// Sum rate together with its gradient with respect to V. The gradient is
// dR/dRe(V) + i dR/dIm(V) entrywise.
struct RateWithGradient {
  double rate = 0.0;
  ComplexMatrix grad;
};
RateWithGradient SumRateWithGradient(const ComplexMatrix& h,
                                     const ComplexMatrix& v,
                                     const ScenarioConfig& config);

// sqrt(p_max) * V / ||V||_F. Throws kDegenerateOutput when ||V||_F is zero.
ComplexMatrix NormalizePower(const ComplexMatrix& v, double p_max);

// Pulls a gradient with respect to NormalizePower(raw, p_max) back to raw.
ComplexMatrix NormalizePowerBackward(const ComplexMatrix& raw, double p_max,
                                     const ComplexMatrix& grad_out);

struct InvarianceWitness {
  double original = 0.0;     // SumRate(H, V)
  double transformed = 0.0;  // SumRate(U H, U V)
};

// Throws kInvalidArgument if U^H U deviates from I by more than 1e-9.
InvarianceWitness UnitaryInvarianceWitness(const ComplexMatrix& h,
                                           const ComplexMatrix& v,
                                           const ComplexMatrix& u,
                                           double noise);

}  // namespace eqpd

#endif  // EQPD_OBJECTIVE_H_
