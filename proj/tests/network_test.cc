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


#include <cmath>

#include "eqpd/error.h"
#include "eqpd/equivariance.h"
#include "eqpd/network.h"
#include "eqpd/objective.h"
#include "gtest/gtest.h"

namespace eqpd {
namespace {

TEST(NetworkSpecTest, ConfigRoundTrip) {
  for (LayerKind kind : {LayerKind::kPenn, LayerKind::kEdgeGnn, LayerKind::kLinearUe,
                         LayerKind::kUpnn}) {
    NetworkSpec spec = DefaultSpec(kind);
    spec.upnn_gram = GramOrder::kTransposed;
    spec.scale_input = false;
    const NetworkSpec back = NetworkSpec::FromConfig(KeyedConfig::Parse(spec.ToConfig().ToText()));
    EXPECT_EQ(back, spec);
  }
}

TEST(NetworkSpecTest, RejectsBrokenWidthChain) {
  NetworkSpec spec = NetworkSpec::Uniform(LayerKind::kUpnn, {1, 4, 1}, ActivationKind::kNormTanh);
  EXPECT_NO_THROW(spec.Validate());
  spec.layers[1].in_width = 3;
  EXPECT_THROW(spec.Validate(), Error);
  NetworkSpec bad_end = NetworkSpec::Uniform(LayerKind::kUpnn, {1, 4, 1}, ActivationKind::kNormTanh);
  bad_end.layers.back().out_width = 2;
  EXPECT_THROW(bad_end.Validate(), Error);
  EXPECT_THROW(NetworkSpec::Uniform(LayerKind::kUpnn, {1, 4, 2}, ActivationKind::kNormTanh), Error);
  EXPECT_THROW(NetworkSpec{}.Validate(), Error);
}

TEST(NetworkSpecTest, UniformUsesIdentityOnLastLayer) {
  const NetworkSpec spec =
      NetworkSpec::Uniform(LayerKind::kPenn, {1, 8, 8, 1}, ActivationKind::kSplitLeakyRelu);
  ASSERT_EQ(spec.layers.size(), 3u);
  EXPECT_EQ(spec.layers[0].activation, ActivationKind::kSplitLeakyRelu);
  EXPECT_EQ(spec.layers[2].activation, ActivationKind::kIdentity);
}

TEST(NetworkParamsTest, FlattenUnflattenRoundTrip) {
  RandomSource rng(1);
  for (LayerKind kind : {LayerKind::kPenn, LayerKind::kUpnn}) {
    const NetworkSpec spec = NetworkSpec::Uniform(kind, {1, 3, 2, 1}, DefaultActivation(kind));
    const NetworkParams params = InitializeParams(spec, rng);
    const std::vector<double> flat = Flatten(params);
    EXPECT_EQ(flat.size(), CountParameters(spec));
    EXPECT_EQ(Flatten(Unflatten(spec, flat)), flat);
    std::vector<double> short_flat(flat.begin(), flat.end() - 1);
    EXPECT_THROW(Unflatten(spec, short_flat), Error);
  }
}

TEST(NetworkParamsTest, InitializationRange) {
  RandomSource rng(2);
  const NetworkSpec spec = DefaultSpec(LayerKind::kUpnn);
  const NetworkParams params = InitializeParams(spec, rng);
  for (std::size_t l = 0; l < spec.layers.size(); ++l) {
    const double a = std::sqrt(3.0 / (spec.layers[l].in_width * kInitReferenceUsers));
    for (const ComplexMatrix* c : Coefficients(params.layers[l])) {
      for (const Complex& e : c->entries()) {
        EXPECT_LE(std::abs(e.real()), a);
        EXPECT_LE(std::abs(e.imag()), a);
      }
    }
  }
}

TEST(NetworkForwardTest, OutputMeetsPowerBudget) {
  RandomSource rng(3);
  for (LayerKind kind : {LayerKind::kPenn, LayerKind::kEdgeGnn, LayerKind::kLinearUe,
                         LayerKind::kUpnn}) {
    const NetworkSpec spec = NetworkSpec::Uniform(kind, {1, 4, 1}, DefaultActivation(kind));
    const NetworkParams params = InitializeParams(spec, rng);
    const ComplexMatrix v = NetworkForward(RandomGaussian(6, 3, rng), spec, params, 7.5);
    EXPECT_NEAR(FrobeniusNorm(v) * FrobeniusNorm(v), 7.5, 1e-12);
  }
}

TEST(NetworkForwardTest, ZeroParamsIsDegenerate) {
  RandomSource rng(4);
  const NetworkSpec spec = DefaultSpec(LayerKind::kUpnn);
  try {
    NetworkForward(RandomGaussian(4, 2, rng), spec, ZeroParams(spec), 10.0);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateOutput);
  }
}

TEST(NetworkForwardTest, UpnnNetworkIsUePe) {
  RandomSource rng(5);
  for (GramOrder order : {GramOrder::kStandard, GramOrder::kTransposed}) {
    NetworkSpec spec = DefaultSpec(LayerKind::kUpnn);
    spec.upnn_gram = order;
    const NetworkParams params = InitializeParams(spec, rng);
    const MatrixMap f = [&](const ComplexMatrix& h) {
      return NetworkForward(h, spec, params, 10.0);
    };
    const EquivarianceReport r = CheckUePe(f, 8, 4, 50, 1e-8, 6);
    EXPECT_TRUE(r.pass) << r.max_rel_dev;
  }
}

TEST(NetworkForwardTest, TapeRecordsEveryLayer) {
  RandomSource rng(6);
  const NetworkSpec spec = DefaultSpec(LayerKind::kLinearUe);
  const NetworkParams params = InitializeParams(spec, rng);
  ForwardTape tape;
  NetworkForwardRaw(RandomGaussian(4, 2, rng), spec, params, &tape);
  EXPECT_EQ(tape.inputs.size(), spec.layers.size());
  EXPECT_EQ(tape.pre_activations.size(), spec.layers.size());
}

}  // namespace
}  // namespace eqpd
