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

#include "eqpd/wmmse.h"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "eqpd/error.h"
#include "eqpd/objective.h"

namespace eqpd {
namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXd;

MatrixXcd ToEigen(const ComplexMatrix& m) {
  MatrixXcd out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = m(r, c);
  }
  return out;
}

ComplexMatrix FromEigen(const MatrixXcd& m) {
  ComplexMatrix out(m.rows(), m.cols());
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) out(r, c) = m(r, c);
  }
  return out;
}

double Rate(const MatrixXcd& h, const MatrixXcd& v,
            const ScenarioConfig& config) {
  const MatrixXcd t = h.adjoint() * v;  // t(k, m) = h_k^H v_m
  double rate = 0.0;
  for (Eigen::Index k = 0; k < t.rows(); ++k) {
    const double total = t.row(k).squaredNorm() + config.NoiseFor(k);
    const double interference = total - std::norm(t(k, k));
    rate += std::log2(total / interference);
  }
  return rate;
}

bool Finite(const MatrixXcd& m) { return m.allFinite(); }

// Precoder update for fixed (u, w): V = Q (L + mu)^-1 Q^H B.
class PrecoderStep {
 public:
  PrecoderStep(const MatrixXcd& a, const MatrixXcd& b) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> solver(a);
    if (solver.info() != Eigen::Success) {
      throw Error(ErrorCode::kNonFinite, "eigendecomposition failed");
    }
    lambda_ = solver.eigenvalues().cwiseMax(0.0);
    q_ = solver.eigenvectors();
    qb_ = q_.adjoint() * b;
    row_energy_ = qb_.rowwise().squaredNorm();
    // Directions outside the range of A carry no component of B in exact
    // arithmetic; drop their rounding noise.
    const double cutoff = 1e-12 * std::max(lambda_.maxCoeff(), 0.0);
    for (Eigen::Index i = 0; i < lambda_.size(); ++i) {
      if (lambda_(i) <= cutoff) row_energy_(i) = 0.0;
    }
  }

  double Power(double mu) const {
    double p = 0.0;
    for (Eigen::Index i = 0; i < lambda_.size(); ++i) {
      if (row_energy_(i) == 0.0) continue;
      const double d = lambda_(i) + mu;
      p += row_energy_(i) / (d * d);
    }
    return p;
  }

  MatrixXcd Precoder(double mu) const {
    MatrixXcd scaled = qb_;
    for (Eigen::Index i = 0; i < lambda_.size(); ++i) {
      if (row_energy_(i) == 0.0) {
        scaled.row(i).setZero();
      } else {
        scaled.row(i) /= (lambda_(i) + mu);
      }
    }
    return q_ * scaled;
  }

 private:
  VectorXd lambda_;
  MatrixXcd q_;
  MatrixXcd qb_;
  VectorXd row_energy_;
};

double FindMultiplier(const PrecoderStep& step, double p_max, double mu_hi,
                      const WmmseConfig& opts) {
  if (step.Power(0.0) <= p_max) return 0.0;
  if (!(mu_hi > 0.0) || !std::isfinite(mu_hi)) {
    throw Error(ErrorCode::kBracketFailure, "invalid initial multiplier bound");
  }
  int doublings = 0;
  while (step.Power(mu_hi) > p_max) {
    mu_hi *= 2.0;
    if (++doublings > 200 || !std::isfinite(mu_hi)) {
      throw Error(ErrorCode::kBracketFailure, "could not bracket multiplier");
    }
  }
  double lo = 0.0;
  double hi = mu_hi;
  for (std::size_t it = 0; it < opts.bisect_max_iters; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double p = step.Power(mid);
    if (p > p_max) {
      lo = mid;
    } else {
      hi = mid;
      if (p_max - p <= opts.bisect_tol * p_max) break;
    }
    if (hi - lo <= 1e-15 * hi) break;
  }
  return hi;
}

}  // namespace

void WmmseConfig::Validate() const {
  if (max_iters < 1 || !(rel_tol > 0.0) || restarts < 1 || !(bisect_tol > 0.0) ||
      bisect_max_iters < 1) {
    throw Error(ErrorCode::kInvalidArgument, "invalid WMMSE configuration");
  }
}

WmmseResult WmmseSolve(const ComplexMatrix& h_in, const ScenarioConfig& config,
                       const WmmseConfig& opts, const ComplexMatrix& init) {
  opts.Validate();
  if (init.rows() != h_in.rows() || init.cols() != h_in.cols()) {
    throw Error(ErrorCode::kInvalidDimension, "init must match H");
  }
  const double p_max = config.p_max();
  const double init_power = std::pow(FrobeniusNorm(init), 2);
  if (init_power > p_max * (1.0 + 1e-9)) {
    throw Error(ErrorCode::kInvalidArgument, "initial precoder exceeds P_max");
  }
  const MatrixXcd h = ToEigen(h_in);
  const Eigen::Index n_ant = h.rows();
  const Eigen::Index n_users = h.cols();
  MatrixXcd v = ToEigen(init);

  WmmseResult result;
  double rate = Rate(h, v, config);
  result.rate_trace.push_back(rate);

  Eigen::VectorXcd u(n_users);
  VectorXd w(n_users);
  for (std::size_t iter = 0; iter < opts.max_iters; ++iter) {
    const MatrixXcd t = h.adjoint() * v;
    for (Eigen::Index k = 0; k < n_users; ++k) {
      const double total = t.row(k).squaredNorm() + config.NoiseFor(k);
      u(k) = t(k, k) / total;
      w(k) = 1.0 / (1.0 - (std::conj(u(k)) * t(k, k)).real());
    }
    MatrixXcd a = MatrixXcd::Zero(n_ant, n_ant);
    MatrixXcd b(n_ant, n_users);
    double bound = 0.0;
    for (Eigen::Index m = 0; m < n_users; ++m) {
      const double weight = w(m) * std::norm(u(m));
      a.noalias() += weight * h.col(m) * h.col(m).adjoint();
      b.col(m) = w(m) * std::conj(u(m)) * h.col(m);
      bound += w(m) * w(m) * std::norm(u(m)) * h.col(m).squaredNorm();
    }
    if (!Finite(a) || !Finite(b)) {
      throw Error(ErrorCode::kNonFinite, "non-finite WMMSE intermediate");
    }
    const PrecoderStep step(a, b);
    const double mu = FindMultiplier(step, p_max, std::sqrt(bound / p_max), opts);
    MatrixXcd next = step.Precoder(mu);
    if (!Finite(next)) {
      throw Error(ErrorCode::kNonFinite, "non-finite WMMSE precoder");
    }
    if (next.squaredNorm() == 0.0) {
      throw Error(ErrorCode::kDegenerateOutput, "WMMSE collapsed to zero");
    }
    v = std::move(next);
    const double new_rate = Rate(h, v, config);
    result.rate_trace.push_back(new_rate);
    result.iterations = iter + 1;
    const double change = std::abs(new_rate - rate);
    rate = new_rate;
    if (change < opts.rel_tol * std::abs(result.rate_trace[iter])) break;
  }
  result.precoder = FromEigen(v);
  result.sum_rate = rate;
  return result;
}

WmmseResult WmmseBestOf(const ComplexMatrix& h, const ScenarioConfig& config,
                        const WmmseConfig& opts, RandomSource& rng) {
  opts.Validate();
  const double p_max = config.p_max();
  std::optional<WmmseResult> best;
  std::optional<Error> last_error;
  for (std::size_t start = 0; start < opts.restarts; ++start) {
    ComplexMatrix init;
    if (start == 0) {
      init = MatchedFilter(h, p_max);
    } else {
      init = NormalizePower(RandomGaussian(h.rows(), h.cols(), rng), p_max);
    }
    try {
      WmmseResult r = WmmseSolve(h, config, opts, init);
      if (!best || r.sum_rate > best->sum_rate) best = std::move(r);
    } catch (const Error& e) {
      last_error = e;
    }
  }
  if (!best) throw *last_error;
  return *std::move(best);
}

ComplexMatrix MatchedFilter(const ComplexMatrix& h, double p_max) {
  return NormalizePower(h, p_max);
}

ComplexMatrix RzfPrecoder(const ComplexMatrix& h, double nu, double p_max) {
  if (!(nu >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "nu must be >= 0");
  ComplexMatrix a = h * h.Adjoint();
  for (std::size_t i = 0; i < a.rows(); ++i) a(i, i) += nu;
  // H H^H is Hermitian by construction; symmetrize away rounding.
  for (std::size_t i = 0; i < a.rows(); ++i) {
    a(i, i) = a(i, i).real();
    for (std::size_t j = 0; j < i; ++j) a(j, i) = std::conj(a(i, j));
  }
  return NormalizePower(SolveHermitianPd(a, h), p_max);
}

RzfSweepResult RzfSweep(const ComplexMatrix& h, const ScenarioConfig& config,
                        std::size_t points, double lo, double hi) {
  if (points < 2 || !(lo > 0.0) || !(hi > lo)) {
    throw Error(ErrorCode::kInvalidArgument, "invalid RZF sweep grid");
  }
  RzfSweepResult best{-1.0, 0.0};
  const double step = std::log(hi / lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    const double nu = lo * std::exp(step * static_cast<double>(i));
    const double rate = SumRate(h, RzfPrecoder(h, nu, config.p_max()), config);
    if (rate > best.best_rate) best = {rate, nu};
  }
  return best;
}

}  // namespace eqpd
