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

#include "eqpd/equivariance.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "eqpd/error.h"
#include "eqpd/parallel.h"

namespace eqpd {
namespace {

constexpr double kFloor = 1e-30;

struct TrialOutcome {
  double deviation = 0.0;
  std::string failure;
};

// Runs `trial(rng)` with a per-trial stream derived from the seed, so the
// report does not depend on scheduling.
template <typename Trial>
EquivarianceReport RunTrials(std::string mode, std::size_t trials, double tol,
                             std::uint64_t seed, Trial trial) {
  if (trials < 1) throw Error(ErrorCode::kInvalidArgument, "trials must be >= 1");
  std::vector<TrialOutcome> outcomes(trials);
  ParallelFor(trials, [&](std::size_t t) {
    RandomSource rng(MixSeed(seed, t));
    try {
      outcomes[t].deviation = trial(rng);
    } catch (const std::exception& e) {
      outcomes[t].deviation = std::numeric_limits<double>::infinity();
      outcomes[t].failure = "trial " + std::to_string(t) + ": " + e.what();
    }
  });
  EquivarianceReport report;
  report.mode = std::move(mode);
  report.trials = trials;
  report.tolerance = tol;
  for (std::size_t t = 0; t < trials; ++t) {
    const double d = outcomes[t].deviation;
    report.deviations.push_back(d);
    report.max_rel_dev = std::max(report.max_rel_dev, d);
    if (!outcomes[t].failure.empty()) report.failures.push_back(outcomes[t].failure);
    // NaN deviations count as failures too.
    if (!report.counterexample_trial && !(d <= tol)) report.counterexample_trial = t;
  }
  report.pass = !report.counterexample_trial.has_value();
  return report;
}

double Deviation(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
  if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols()) {
    throw Error(ErrorCode::kInvalidDimension, "map changed output shape");
  }
  return FrobeniusNorm(lhs - rhs) / std::max(FrobeniusNorm(rhs), kFloor);
}

EquivarianceReport CheckGroup(const MatrixMap& f, std::size_t n_antennas,
                              std::size_t n_users, std::size_t trials, double tol,
                              std::uint64_t seed, bool unitary) {
  return RunTrials(unitary ? "ue-pe" : "2d-pe", trials, tol, seed,
                   [&](RandomSource& rng) {
                     const ComplexMatrix h = RandomGaussian(n_antennas, n_users, rng);
                     const ComplexMatrix left = unitary
                                                    ? RandomUnitary(n_antennas, rng)
                                                    : RandomPermutation(n_antennas, rng);
                     const ComplexMatrix pi_t = RandomPermutation(n_users, rng).Transpose();
                     const ComplexMatrix transformed = f(left * h * pi_t);
                     const ComplexMatrix expected = left * f(h) * pi_t;
                     return Deviation(transformed, expected);
                   });
}

}  // namespace

EquivarianceReport CheckUePe(const MatrixMap& f, std::size_t n_antennas,
                             std::size_t n_users, std::size_t trials, double tol,
                             std::uint64_t seed) {
  return CheckGroup(f, n_antennas, n_users, trials, tol, seed, true);
}

EquivarianceReport Check2dPe(const MatrixMap& f, std::size_t n_antennas,
                             std::size_t n_users, std::size_t trials, double tol,
                             std::uint64_t seed) {
  return CheckGroup(f, n_antennas, n_users, trials, tol, seed, false);
}

EquivarianceReport CheckRowLocality(const MatrixMap& f, std::size_t n_antennas,
                                    std::size_t n_users, std::size_t trials,
                                    double tol, std::uint64_t seed) {
  if (n_antennas < 2) {
    throw Error(ErrorCode::kInvalidDimension, "row locality needs N >= 2");
  }
  return RunTrials("row-local", trials, tol, seed, [&](RandomSource& rng) {
    const ComplexMatrix h = RandomGaussian(n_antennas, n_users, rng);
    const std::size_t row = rng.UniformIndex(n_antennas);
    ComplexMatrix perturbed = h;
    for (std::size_t k = 0; k < n_users; ++k) perturbed(row, k) += rng.ComplexNormal();
    const ComplexMatrix base = f(h);
    const ComplexMatrix moved = f(perturbed);
    if (base.rows() != moved.rows() || base.cols() != moved.cols()) {
      throw Error(ErrorCode::kInvalidDimension, "map changed output shape");
    }
    double diff = 0.0;
    double ref = 0.0;
    for (std::size_t n = 0; n < base.rows(); ++n) {
      if (n == row) continue;
      for (std::size_t k = 0; k < base.cols(); ++k) {
        diff += std::norm(moved(n, k) - base(n, k));
        ref += std::norm(base(n, k));
      }
    }
    return std::sqrt(diff) / std::max(std::sqrt(ref), kFloor);
  });
}

}  // namespace eqpd
