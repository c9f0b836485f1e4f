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

#ifndef EQPD_TESTS_DENSE_ORACLE_H_
#define EQPD_TESTS_DENSE_ORACLE_H_

// Explicit NK x NK weight matrices acting on vec(D) (column stacking, index
// k * N + n). These are deliberately naive: O(N^2 K^2) entries built one by
// one from the parameter-sharing patterns.

#include <cstddef>
#include <functional>

#include "eqpd/layers.h"
#include "eqpd/numerics.h"

namespace eqpd::testing {

// PENN sharing pattern for one (m', m) pair: b on the diagonal, p for the
// same user and another antenna, q for the same antenna and another user,
// c otherwise. Edge-GNN is c = 0.
inline ComplexMatrix DensePenn(std::size_t n_ant, std::size_t n_users, Complex b,
                               Complex p, Complex q, Complex c) {
  const std::size_t nk = n_ant * n_users;
  ComplexMatrix w(nk, nk);
  for (std::size_t k = 0; k < n_users; ++k) {
    for (std::size_t n = 0; n < n_ant; ++n) {
      for (std::size_t l = 0; l < n_users; ++l) {
        for (std::size_t j = 0; j < n_ant; ++j) {
          const bool same_ant = j == n;
          const bool same_user = l == k;
          Complex value = c;
          if (same_ant && same_user) {
            value = b;
          } else if (same_user) {
            value = p;
          } else if (same_ant) {
            value = q;
          }
          w(k * n_ant + n, l * n_ant + j) = value;
        }
      }
    }
  }
  return w;
}

// Kronecker product a (x) b.
inline ComplexMatrix Kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      for (std::size_t r = 0; r < b.rows(); ++r) {
        for (std::size_t s = 0; s < b.cols(); ++s) {
          out(i * b.rows() + r, j * b.cols() + s) = a(i, j) * b(r, s);
        }
      }
    }
  }
  return out;
}

// Linear UE-PE: W = Omega (x) I_N with Omega = b on the diagonal, q off it.
inline ComplexMatrix DenseLinearUe(std::size_t n_ant, std::size_t n_users, Complex b,
                                   Complex q) {
  ComplexMatrix omega(n_users, n_users);
  for (std::size_t k = 0; k < n_users; ++k) {
    for (std::size_t l = 0; l < n_users; ++l) omega(k, l) = k == l ? b : q;
  }
  return Kron(omega, ComplexMatrix::Identity(n_ant));
}

// UPNN: W = G(D) (x) I_N with G_kk = b d_k^H d_k and G_km = q d_k^H d_m
// (standard) or q d_m^H d_k (transposed).
inline ComplexMatrix DenseUpnn(const ComplexMatrix& d, Complex b, Complex q,
                               GramOrder order = GramOrder::kStandard) {
  const std::size_t n_users = d.cols();
  ComplexMatrix g(n_users, n_users);
  for (std::size_t k = 0; k < n_users; ++k) {
    for (std::size_t m = 0; m < n_users; ++m) {
      Complex inner = 0.0;
      for (std::size_t n = 0; n < d.rows(); ++n) {
        inner += order == GramOrder::kStandard ? std::conj(d(n, k)) * d(n, m)
                                               : std::conj(d(n, m)) * d(n, k);
      }
      g(k, m) = (k == m ? b : q) * inner;
    }
  }
  return Kron(g, ComplexMatrix::Identity(d.rows()));
}

// out_{m'} = sum_m W(m', m) vec(D_m), reshaped back into a state.
inline HiddenState DenseApply(
    const HiddenState& d, std::size_t out_width,
    const std::function<ComplexMatrix(std::size_t, std::size_t)>& weight) {
  const std::size_t n_ant = d.n_antennas();
  const std::size_t nk = d.block_size();
  HiddenState out(n_ant, d.n_users(), out_width);
  for (std::size_t mo = 0; mo < out_width; ++mo) {
    ComplexMatrix acc(nk, 1);
    for (std::size_t mi = 0; mi < d.width(); ++mi) {
      ComplexMatrix vec(nk, 1);
      for (std::size_t i = 0; i < nk; ++i) vec(i, 0) = d.at(i % n_ant, i / n_ant, mi);
      acc += weight(mo, mi) * vec;
    }
    for (std::size_t i = 0; i < nk; ++i) out.at(i % n_ant, i / n_ant, mo) = acc(i, 0);
  }
  return out;
}

inline HiddenState DenseLayer(const HiddenState& d, const LayerParams& params,
                              GramOrder order = GramOrder::kStandard) {
  const std::size_t n = d.n_antennas();
  const std::size_t k = d.n_users();
  const std::size_t out = OutWidth(params);
  if (const auto* p = std::get_if<PennParams>(&params)) {
    return DenseApply(d, out, [&](std::size_t o, std::size_t i) {
      return DensePenn(n, k, p->b(o, i), p->p(o, i), p->q(o, i), p->c(o, i));
    });
  }
  if (const auto* p = std::get_if<EdgeGnnParams>(&params)) {
    return DenseApply(d, out, [&](std::size_t o, std::size_t i) {
      return DensePenn(n, k, p->b(o, i), p->p(o, i), p->q(o, i), 0.0);
    });
  }
  if (const auto* p = std::get_if<LinearUeParams>(&params)) {
    return DenseApply(d, out, [&](std::size_t o, std::size_t i) {
      return DenseLinearUe(n, k, p->b(o, i), p->q(o, i));
    });
  }
  const auto& p = std::get<UpnnParams>(params);
  return DenseApply(d, out, [&](std::size_t o, std::size_t i) {
    return DenseUpnn(d.Representation(i), p.b(o, i), p.q(o, i), order);
  });
}

// Random parameters of every coefficient, CN(0, 1) entries.
inline LayerParams RandomLayerParams(LayerKind kind, std::size_t in, std::size_t out,
                                     RandomSource& rng) {
  LayerParams params = ZeroParams(kind, in, out);
  for (ComplexMatrix* coeff : Coefficients(params)) *coeff = RandomGaussian(out, in, rng);
  return params;
}

}  // namespace eqpd::testing

#endif  // EQPD_TESTS_DENSE_ORACLE_H_
