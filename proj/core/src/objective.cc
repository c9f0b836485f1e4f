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

#include "eqpd/objective.h"

#include <cmath>
#include <numbers>
#include <string>

#include "eqpd/error.h"

namespace eqpd {
namespace {

void CheckShapes(const ComplexMatrix& h, const ComplexMatrix& v) {
  if (h.rows() != v.rows() || h.cols() != v.cols()) {
    throw Error(ErrorCode::kInvalidDimension, "H and V must have equal shapes");
  }
}

// h_k^H v_m
Complex Projection(const ComplexMatrix& h, const ComplexMatrix& v,
                   std::size_t k, std::size_t m) {
  Complex s = 0.0;
  for (std::size_t n = 0; n < h.rows(); ++n) s += std::conj(h(n, k)) * v(n, m);
  return s;
}

}  // namespace

double UserRate(const ComplexMatrix& h, const ComplexMatrix& v, std::size_t k,
                double noise) {
  CheckShapes(h, v);
  if (k >= h.cols()) {
    throw Error(ErrorCode::kInvalidArgument,
                "user index " + std::to_string(k) + " out of range");
  }
  if (!(noise > 0.0)) throw Error(ErrorCode::kInvalidArgument, "noise must be > 0");
  double signal = 0.0;
  double interference = noise;
  for (std::size_t m = 0; m < v.cols(); ++m) {
    const double p = std::norm(Projection(h, v, k, m));
    if (m == k) {
      signal = p;
    } else {
      interference += p;
    }
  }
  return std::log2(1.0 + signal / interference);
}

double SumRate(const ComplexMatrix& h, const ComplexMatrix& v, double noise) {
  double total = 0.0;
  for (std::size_t k = 0; k < h.cols(); ++k) total += UserRate(h, v, k, noise);
  return total;
}

double SumRate(const ComplexMatrix& h, const ComplexMatrix& v,
               const ScenarioConfig& config) {
  double total = 0.0;
  for (std::size_t k = 0; k < h.cols(); ++k) {
    total += UserRate(h, v, k, config.NoiseFor(k));
  }
  return total;
}

RateWithGradient SumRateWithGradient(const ComplexMatrix& h,
                                     const ComplexMatrix& v,
                                     const ScenarioConfig& config) {
  CheckShapes(h, v);
  const std::size_t n_ant = h.rows();
  const std::size_t n_users = h.cols();
  // R_k = log2(T_k) - log2(I_k), T_k = sum_m |t_km|^2 + noise, I_k = T_k - |t_kk|^2.
  ComplexMatrix t(n_users, n_users);
  for (std::size_t k = 0; k < n_users; ++k) {
    for (std::size_t m = 0; m < n_users; ++m) t(k, m) = Projection(h, v, k, m);
  }
  RateWithGradient out;
  out.grad = ComplexMatrix(n_ant, n_users);
  const double inv_ln2 = 1.0 / std::numbers::ln2;
  for (std::size_t k = 0; k < n_users; ++k) {
    const double noise = config.NoiseFor(k);
    double total = noise;
    for (std::size_t m = 0; m < n_users; ++m) total += std::norm(t(k, m));
    const double interference = total - std::norm(t(k, k));
    out.rate += std::log2(total) - std::log2(interference);
    for (std::size_t m = 0; m < n_users; ++m) {
      const double weight =
          2.0 * inv_ln2 * (1.0 / total - (m == k ? 0.0 : 1.0 / interference));
      const Complex g_t = weight * t(k, m);
      // t_km = sum_n conj(h_nk) v_nm
      for (std::size_t n = 0; n < n_ant; ++n) out.grad(n, m) += h(n, k) * g_t;
    }
  }
  return out;
}

ComplexMatrix NormalizePower(const ComplexMatrix& v, double p_max) {
  const double norm = FrobeniusNorm(v);
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw Error(ErrorCode::kDegenerateOutput,
                "cannot normalize a precoder with zero or non-finite norm");
  }
  ComplexMatrix out = v;
  out *= std::sqrt(p_max) / norm;
  return out;
}

ComplexMatrix NormalizePowerBackward(const ComplexMatrix& raw, double p_max,
                                     const ComplexMatrix& grad_out) {
  const double r = FrobeniusNorm(raw);
  if (!(r > 0.0)) {
    throw Error(ErrorCode::kDegenerateOutput, "zero-norm pre-normalization output");
  }
  const double c = std::sqrt(p_max);
  double inner = 0.0;  // Re<grad_out, raw>
  for (std::size_t i = 0; i < raw.size(); ++i) {
    inner += (std::conj(grad_out.entries()[i]) * raw.entries()[i]).real();
  }
  ComplexMatrix out(raw.rows(), raw.cols());
  const double a = c / r;
  const double b = c * inner / (r * r * r);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    out.entries()[i] = a * grad_out.entries()[i] - b * raw.entries()[i];
  }
  return out;
}

InvarianceWitness UnitaryInvarianceWitness(const ComplexMatrix& h,
                                           const ComplexMatrix& v,
                                           const ComplexMatrix& u,
                                           double noise) {
  if (u.rows() != u.cols() || u.rows() != h.rows()) {
    throw Error(ErrorCode::kInvalidDimension, "U must be N x N");
  }
  const ComplexMatrix gram = u.Adjoint() * u;
  if (MaxAbs(gram - ComplexMatrix::Identity(u.rows())) > 1e-9) {
    throw Error(ErrorCode::kInvalidArgument, "U is not unitary");
  }
  return {SumRate(h, v, noise), SumRate(u * h, u * v, noise)};
}

}  // namespace eqpd
