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

#include "eqpd/network.h"

#include <cmath>
#include <sstream>
#include <string>

#include "eqpd/error.h"
#include "eqpd/objective.h"

namespace eqpd {
namespace {

std::size_t CoefficientCount(LayerKind kind) {
  switch (kind) {
    case LayerKind::kPenn: return 4;
    case LayerKind::kEdgeGnn: return 3;
    case LayerKind::kLinearUe:
    case LayerKind::kUpnn: return 2;
  }
  return 0;
}

void CheckParams(const NetworkSpec& spec, const NetworkParams& params) {
  if (spec.layers.size() != params.layers.size()) {
    throw Error(ErrorCode::kInvalidArgument, "parameter layer count differs from spec");
  }
  for (std::size_t i = 0; i < spec.layers.size(); ++i) {
    const LayerSpec& ls = spec.layers[i];
    const LayerParams& lp = params.layers[i];
    if (KindOf(lp) != ls.kind || InWidth(lp) != ls.in_width ||
        OutWidth(lp) != ls.out_width) {
      throw Error(ErrorCode::kInvalidArgument,
                  "parameters of layer " + std::to_string(i) + " do not match spec");
    }
  }
}

ComplexMatrix ToMatrix(const HiddenState& s) { return s.Representation(0); }

}  // namespace

NetworkSpec NetworkSpec::Uniform(LayerKind kind,
                                 const std::vector<std::size_t>& widths,
                                 ActivationKind hidden, bool scale_input) {
  if (widths.size() < 2) {
    throw Error(ErrorCode::kConfiguration, "need at least input and output widths");
  }
  NetworkSpec spec;
  spec.scale_input = scale_input;
  for (std::size_t i = 0; i + 1 < widths.size(); ++i) {
    const bool last = i + 2 == widths.size();
    spec.layers.push_back(
        {kind, widths[i], widths[i + 1], last ? ActivationKind::kIdentity : hidden});
  }
  spec.Validate();
  return spec;
}

void NetworkSpec::Validate() const {
  if (layers.empty()) throw Error(ErrorCode::kConfiguration, "network has no layers");
  if (layers.front().in_width != 1) {
    throw Error(ErrorCode::kConfiguration, "first layer must take width 1");
  }
  if (layers.back().out_width != 1) {
    throw Error(ErrorCode::kConfiguration, "last layer must produce width 1");
  }
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (layers[i].in_width == 0 || layers[i].out_width == 0) {
      throw Error(ErrorCode::kConfiguration, "layer widths must be positive");
    }
    if (i > 0 && layers[i - 1].out_width != layers[i].in_width) {
      throw Error(ErrorCode::kConfiguration,
                  "widths do not chain at layer " + std::to_string(i));
    }
  }
}

KeyedConfig NetworkSpec::ToConfig() const {
  KeyedConfig out;
  out.Set("scale_input", scale_input ? "true" : "false");
  out.Set("upnn_gram", std::string(GramOrderName(upnn_gram)));
  out.Set("layers", std::to_string(layers.size()));
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const LayerSpec& l = layers[i];
    std::ostringstream value;
    value << LayerKindName(l.kind) << ' ' << l.in_width << ' ' << l.out_width << ' '
          << ActivationName(l.activation);
    out.Set("layer." + std::to_string(i), value.str());
  }
  return out;
}

NetworkSpec NetworkSpec::FromConfig(const KeyedConfig& config) {
  NetworkSpec spec;
  spec.scale_input = config.GetBool("scale_input", true);
  spec.upnn_gram = ParseGramOrder(config.GetString("upnn_gram", "standard"));
  const std::int64_t count = config.GetInt("layers", 0);
  if (count <= 0) throw Error(ErrorCode::kConfiguration, "missing 'layers' count");
  for (std::int64_t i = 0; i < count; ++i) {
    const std::string key = "layer." + std::to_string(i);
    const auto value = config.Get(key);
    if (!value) throw Error(ErrorCode::kConfiguration, "missing key " + key);
    std::istringstream in(*value);
    std::string kind, activation;
    LayerSpec l;
    if (!(in >> kind >> l.in_width >> l.out_width >> activation)) {
      throw Error(ErrorCode::kConfiguration, "malformed " + key + ": " + *value);
    }
    l.kind = ParseLayerKind(kind);
    l.activation = ParseActivation(activation);
    spec.layers.push_back(l);
  }
  spec.Validate();
  return spec;
}

ActivationKind DefaultActivation(LayerKind kind) {
  return kind == LayerKind::kUpnn ? ActivationKind::kNormTanh
                                  : ActivationKind::kSplitLeakyRelu;
}

NetworkSpec DefaultSpec(LayerKind kind) {
  switch (kind) {
    case LayerKind::kUpnn:
    case LayerKind::kLinearUe:
      return NetworkSpec::Uniform(kind, {1, 16, 16, 16, 4, 1},
                                  DefaultActivation(kind));
    case LayerKind::kPenn:
    case LayerKind::kEdgeGnn:
      return NetworkSpec::Uniform(kind, {1, 128, 128, 128, 128, 32, 1},
                                  DefaultActivation(kind));
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown layer kind");
}

std::size_t CountParameters(const NetworkSpec& spec) {
  std::size_t total = 0;
  for (const LayerSpec& l : spec.layers) {
    total += 2 * CoefficientCount(l.kind) * l.in_width * l.out_width;
  }
  return total;
}

NetworkParams ZeroParams(const NetworkSpec& spec) {
  NetworkParams out;
  for (const LayerSpec& l : spec.layers) {
    out.layers.push_back(ZeroParams(l.kind, l.in_width, l.out_width));
  }
  return out;
}

NetworkParams InitializeParams(const NetworkSpec& spec, RandomSource& rng) {
  spec.Validate();
  NetworkParams out = ZeroParams(spec);
  for (std::size_t i = 0; i < spec.layers.size(); ++i) {
    const double a = std::sqrt(
        3.0 / (static_cast<double>(spec.layers[i].in_width) * kInitReferenceUsers));
    for (ComplexMatrix* coeff : Coefficients(out.layers[i])) {
      for (Complex& e : coeff->entries()) {
        const double re = rng.Uniform(-a, a);
        const double im = rng.Uniform(-a, a);
        e = {re, im};
      }
    }
  }
  return out;
}

std::vector<double> Flatten(const NetworkParams& params) {
  std::vector<double> out;
  for (const LayerParams& layer : params.layers) {
    for (const ComplexMatrix* coeff : Coefficients(layer)) {
      for (const Complex& e : coeff->entries()) {
        out.push_back(e.real());
        out.push_back(e.imag());
      }
    }
  }
  return out;
}

NetworkParams Unflatten(const NetworkSpec& spec, std::span<const double> values) {
  if (values.size() != CountParameters(spec)) {
    throw Error(ErrorCode::kInvalidDimension,
                "parameter vector has " + std::to_string(values.size()) +
                    " entries, spec needs " + std::to_string(CountParameters(spec)));
  }
  NetworkParams out = ZeroParams(spec);
  std::size_t pos = 0;
  for (LayerParams& layer : out.layers) {
    for (ComplexMatrix* coeff : Coefficients(layer)) {
      for (Complex& e : coeff->entries()) {
        e = {values[pos], values[pos + 1]};
        pos += 2;
      }
    }
  }
  return out;
}

ComplexMatrix NetworkForwardRaw(const ComplexMatrix& h, const NetworkSpec& spec,
                                const NetworkParams& params, ForwardTape* tape) {
  CheckParams(spec, params);
  const double scale =
      spec.scale_input ? 1.0 / std::sqrt(static_cast<double>(h.rows())) : 1.0;
  HiddenState state = HiddenState::FromChannel(h, scale);
  if (tape) {
    tape->inputs.clear();
    tape->pre_activations.clear();
  }
  for (std::size_t i = 0; i < spec.layers.size(); ++i) {
    HiddenState pre = LayerForward(state, params.layers[i], spec.upnn_gram);
    HiddenState next = Activate(pre, spec.layers[i].activation);
    if (tape) {
      tape->inputs.push_back(std::move(state));
      tape->pre_activations.push_back(std::move(pre));
    }
    state = std::move(next);
  }
  return ToMatrix(state);
}

ComplexMatrix NetworkForward(const ComplexMatrix& h, const NetworkSpec& spec,
                             const NetworkParams& params, double p_max) {
  return NormalizePower(NetworkForwardRaw(h, spec, params), p_max);
}

void NetworkBackward(const NetworkSpec& spec, const NetworkParams& params,
                     const ForwardTape& tape, const ComplexMatrix& grad_raw,
                     NetworkParams& grad) {
  CheckParams(spec, params);
  CheckParams(spec, grad);
  if (tape.inputs.size() != spec.layers.size()) {
    throw Error(ErrorCode::kInvalidArgument, "tape does not match network");
  }
  HiddenState g = HiddenState::FromChannel(grad_raw);
  for (std::size_t i = spec.layers.size(); i-- > 0;) {
    g = ActivateBackward(tape.pre_activations[i], spec.layers[i].activation, g);
    g = LayerBackward(tape.inputs[i], params.layers[i], g, grad.layers[i], spec.upnn_gram);
  }
}

}  // namespace eqpd
