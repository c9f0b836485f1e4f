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

#ifndef EQPD_WMMSE_H_
#define EQPD_WMMSE_H_

#include <cstddef>
#include <vector>

#include "eqpd/channel.h"
#include "eqpd/numerics.h"

namespace eqpd {

struct WmmseConfig {
  std::size_t max_iters = 500;
  // Stop once |R_t - R_{t-1}| < rel_tol * |R_{t-1}|.
  double rel_tol = 1e-5;
  // Total number of starts in WmmseBestOf; the first is the matched filter.
  std::size_t restarts = 50;
  // Bisection on the power multiplier stops when the relative power
  // mismatch falls below bisect_tol.
  double bisect_tol = 1e-10;
  std::size_t bisect_max_iters = 200;

  void Validate() const;
};

struct WmmseResult {
  ComplexMatrix precoder;
  double sum_rate = 0.0;
  std::size_t iterations = 0;
  // rate_trace[0] is the rate of the initial point.
  std::vector<double> rate_trace;
};

// MISO WMMSE by block-coordinate ascent from `init` (N x K, power <= P_max).
//   u_k = h_k^H v_k / (sum_m |h_k^H v_m|^2 + noise_k)
//   w_k = 1 / (1 - conj(u_k) h_k^H v_k)
//   v_k = w_k conj(u_k) (sum_m w_m |u_m|^2 h_m h_m^H + mu I)^-1 h_k
// with mu >= 0 chosen by bisection so the power budget holds with
// complementary slackness.
WmmseResult WmmseSolve(const ComplexMatrix& h, const ScenarioConfig& config,
                       const WmmseConfig& opts, const ComplexMatrix& init);

// Best of opts.restarts solves: one matched-filter start followed by
// restarts - 1 random starts (i.i.d. CN(0,1) columns scaled to P_max).
WmmseResult WmmseBestOf(const ComplexMatrix& h, const ScenarioConfig& config,
                        const WmmseConfig& opts, RandomSource& rng);

// sqrt(p_max) H / ||H||_F.
ComplexMatrix MatchedFilter(const ComplexMatrix& h, double p_max);

// Regularized zero forcing: NormalizePower((H H^H + nu I)^-1 H, p_max).
// nu = 0 with a rank-deficient H H^H throws kSingularMatrix.
ComplexMatrix RzfPrecoder(const ComplexMatrix& h, double nu, double p_max);

// Best RZF sum rate over `points` values of nu log-spaced on [lo, hi].
struct RzfSweepResult {
  double best_rate = 0.0;
  double best_nu = 0.0;
};
RzfSweepResult RzfSweep(const ComplexMatrix& h, const ScenarioConfig& config,
                        std::size_t points = 50, double lo = 1e-3,
                        double hi = 1e3);

}  // namespace eqpd

#endif  // EQPD_WMMSE_H_
