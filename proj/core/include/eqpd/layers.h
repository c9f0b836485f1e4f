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

#ifndef EQPD_LAYERS_H_
#define EQPD_LAYERS_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "eqpd/numerics.h"

namespace eqpd {

// N x K x M complex tensor of hidden representations. Representation m is a
// contiguous N x K block stored column-major, i.e. entry (n, k, m) lives at
// m * N * K + k * N + n, so each user column d_k is contiguous and the block
// equals vec(D_m).
class HiddenState {
 public:
  HiddenState() = default;
  HiddenState(std::size_t n_antennas, std::size_t n_users, std::size_t width);

  // Width-1 state holding scale * H.
  static HiddenState FromChannel(const ComplexMatrix& h, double scale = 1.0);

  std::size_t n_antennas() const { return n_antennas_; }
  std::size_t n_users() const { return n_users_; }
  std::size_t width() const { return width_; }
  std::size_t block_size() const { return n_antennas_ * n_users_; }

  Complex& at(std::size_t n, std::size_t k, std::size_t m) {
    return data_[m * block_size() + k * n_antennas_ + n];
  }
  const Complex& at(std::size_t n, std::size_t k, std::size_t m) const {
    return data_[m * block_size() + k * n_antennas_ + n];
  }

  std::span<Complex> values() { return data_; }
  std::span<const Complex> values() const { return data_; }
  Complex* data() { return data_.data(); }
  const Complex* data() const { return data_.data(); }

  // Representation m as an N x K matrix.
  ComplexMatrix Representation(std::size_t m) const;

  bool SameShape(const HiddenState& other) const {
    return n_antennas_ == other.n_antennas_ && n_users_ == other.n_users_ &&
           width_ == other.width_;
  }

 private:
  std::size_t n_antennas_ = 0;
  std::size_t n_users_ = 0;
  std::size_t width_ = 0;
  ComplexBuffer data_;
};

enum class LayerKind { kPenn, kEdgeGnn, kLinearUe, kUpnn };
enum class ActivationKind { kSplitLeakyRelu, kNormTanh, kIdentity };

// Which inner product weights the neighbour columns of a UPNN layer.
// kStandard: d''_k = b (d_k^H d_k) d_k + q sum_{j != k} (d_k^H d_j) d_j.
// kTransposed: the neighbour weight is d_j^H d_k instead, i.e. the
// aggregation is D (D^H D) rather than D conj(D^H D). Both are UE-PE.
enum class GramOrder { kStandard, kTransposed };

inline constexpr double kLeakySlope = 0.1;

std::string_view LayerKindName(LayerKind kind);
LayerKind ParseLayerKind(std::string_view name);
std::string_view ActivationName(ActivationKind kind);
std::string_view GramOrderName(GramOrder order);
GramOrder ParseGramOrder(std::string_view name);
ActivationKind ParseActivation(std::string_view name);

// Learnable coefficients; every matrix is M' x M (output width x input
// width) and entry (m', m) couples input representation m to output m'.
//
// PENN:     b on d_nk, p on sum_{j != n} d_jk, q on sum_{l != k} d_nl,
//           c on sum_{j != n, l != k} d_jl.
struct PennParams {
  ComplexMatrix b, p, q, c;
};
// Edge-GNN: PENN with c = 0.
struct EdgeGnnParams {
  ComplexMatrix b, p, q;
};
// Linear UE-PE layer (W = Omega kron I_N): d''_k = b d_k + q sum_{j != k} d_j.
struct LinearUeParams {
  ComplexMatrix b, q;
};
// Gram-weighted layer:
//   d''_k = b (d_k^H d_k) d_k + q sum_{j != k} (d_k^H d_j) d_j
// applied per input representation and summed over inputs.
struct UpnnParams {
  ComplexMatrix b, q;
};

using LayerParams =
    std::variant<PennParams, EdgeGnnParams, LinearUeParams, UpnnParams>;

LayerKind KindOf(const LayerParams& params);
// Zero-valued parameters of the given kind and shape.
LayerParams ZeroParams(LayerKind kind, std::size_t in_width,
                       std::size_t out_width);
// Views of the coefficient matrices in canonical order (b, p, q, c subsets).
std::vector<ComplexMatrix*> Coefficients(LayerParams& params);
std::vector<const ComplexMatrix*> Coefficients(const LayerParams& params);
std::size_t InWidth(const LayerParams& params);
std::size_t OutWidth(const LayerParams& params);

// Pre-activation forwards. The aggregation layers run in O(N K M M') via
// row, column and total sums; no NK x NK weight matrix is formed.
HiddenState PennForward(const HiddenState& d, const PennParams& params);
HiddenState EdgeGnnForward(const HiddenState& d, const EdgeGnnParams& params);
HiddenState LinearUeForward(const HiddenState& d, const LinearUeParams& params);
HiddenState UpnnForward(const HiddenState& d, const UpnnParams& params,
                        GramOrder order = GramOrder::kStandard);
// `order` only affects UPNN layers.
HiddenState LayerForward(const HiddenState& d, const LayerParams& params,
                         GramOrder order = GramOrder::kStandard);

// Vector-Jacobian product of LayerForward. Gradients use the convention
// g = dL/dRe(z) + i dL/dIm(z). grad_params is accumulated into (it must
// already have the layer's shape); the input gradient is returned.
HiddenState LayerBackward(const HiddenState& d, const LayerParams& params,
                          const HiddenState& grad_out, LayerParams& grad_params,
                          GramOrder order = GramOrder::kStandard);

// split-leaky-relu: leaky ReLU (slope 0.1) on real and imaginary parts.
// norm-tanh: each user column of each representation d -> d tanh(|d|)/|d|.
HiddenState Activate(const HiddenState& d, ActivationKind kind);
HiddenState ActivateBackward(const HiddenState& pre, ActivationKind kind,
                             const HiddenState& grad_out);

}  // namespace eqpd

#endif  // EQPD_LAYERS_H_
