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

#ifndef EQPD_NETWORK_H_
#define EQPD_NETWORK_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "eqpd/keyed_config.h"
#include "eqpd/layers.h"
#include "eqpd/numerics.h"

namespace eqpd {

struct LayerSpec {
  LayerKind kind = LayerKind::kUpnn;
  std::size_t in_width = 1;
  std::size_t out_width = 1;
  ActivationKind activation = ActivationKind::kIdentity;

  friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

// Layer stack mapping an N x K channel (width 1) to an N x K precoder
// (width 1). Parameters never depend on N or K.
struct NetworkSpec {
  std::vector<LayerSpec> layers;
  // Feed H / sqrt(N) instead of H.
  bool scale_input = true;
  GramOrder upnn_gram = GramOrder::kStandard;

  // Widths {1, w1, ..., 1}: every layer of `kind`, `hidden` activation on
  // all but the last layer, identity on the last.
  static NetworkSpec Uniform(LayerKind kind, const std::vector<std::size_t>& widths,
                             ActivationKind hidden, bool scale_input = true);

  void Validate() const;

  // Keyed text form:
  //   scale_input = true
  //   upnn_gram = standard
  //   layers = 2
  //   layer.0 = upnn 1 16 norm-tanh
  //   layer.1 = upnn 16 1 identity
  KeyedConfig ToConfig() const;
  static NetworkSpec FromConfig(const KeyedConfig& config);

  friend bool operator==(const NetworkSpec&, const NetworkSpec&) = default;
};

// Widths [16]x3 + [4] for UPNN and linear-UE, [128]x4 + [32] for PENN and
// Edge-GNN. UPNN uses norm-tanh, the others split-leaky-relu.
NetworkSpec DefaultSpec(LayerKind kind);
ActivationKind DefaultActivation(LayerKind kind);

struct NetworkParams {
  std::vector<LayerParams> layers;
};

// Real scalars in the network (each complex coefficient counts twice).
std::size_t CountParameters(const NetworkSpec& spec);

inline constexpr double kInitReferenceUsers = 4.0;

// Real and imaginary parts i.i.d. uniform on [-a, a], a = sqrt(3 / (M K_ref))
// with M the layer input width and K_ref = 4.
NetworkParams InitializeParams(const NetworkSpec& spec, RandomSource& rng);
NetworkParams ZeroParams(const NetworkSpec& spec);

// Flattening order: layer, then coefficient (b, p, q, c subset), then
// row-major (m', m), then (real, imag).
std::vector<double> Flatten(const NetworkParams& params);
NetworkParams Unflatten(const NetworkSpec& spec, std::span<const double> values);

// Everything the backward pass needs from one forward pass.
struct ForwardTape {
  std::vector<HiddenState> inputs;           // input of each layer
  std::vector<HiddenState> pre_activations;  // layer output before sigma
};

// Network output before the power normalization.
ComplexMatrix NetworkForwardRaw(const ComplexMatrix& h, const NetworkSpec& spec,
                                const NetworkParams& params,
                                ForwardTape* tape = nullptr);
// sqrt(p_max) * raw / ||raw||_F.
ComplexMatrix NetworkForward(const ComplexMatrix& h, const NetworkSpec& spec,
                             const NetworkParams& params, double p_max);

// Accumulates dL/dparams into grad given dL/d(raw output).
void NetworkBackward(const NetworkSpec& spec, const NetworkParams& params,
                     const ForwardTape& tape, const ComplexMatrix& grad_raw,
                     NetworkParams& grad);

}  // namespace eqpd

#endif  // EQPD_NETWORK_H_
