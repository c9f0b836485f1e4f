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

#include "eqpd/channel.h"
#include "eqpd/error.h"
#include "eqpd/numerics.h"
#include "gtest/gtest.h"

namespace eqpd {
namespace {

// Scalar-loop SINR oracle, independent of the library's matrix code.
double ScalarSumRate(const ComplexMatrix& h, const ComplexMatrix& v, double noise) {
  double total = 0.0;
  for (std::size_t k = 0; k < h.cols(); ++k) {
    double signal = 0.0, interference = 0.0;
    for (std::size_t m = 0; m < v.cols(); ++m) {
      Complex inner = 0.0;
      for (std::size_t n = 0; n < h.rows(); ++n) inner += std::conj(h(n, k)) * v(n, m);
      (m == k ? signal : interference) += std::norm(inner);
    }
    total += std::log2(1.0 + signal / (interference + noise));
  }
  return total;
}

TEST(UserRateTest, SingleUserMatchedFilter) {
  const ComplexMatrix h(2, 1, {1.0, 0.0});
  const ComplexMatrix v(2, 1, {std::sqrt(10.0), 0.0});
  EXPECT_NEAR(UserRate(h, v, 0, 1.0), std::log2(11.0), 1e-12);
  EXPECT_NEAR(SumRate(h, v, 1.0), 3.4594316186372973, 1e-12);
}

TEST(UserRateTest, ZeroPrecoderColumnGivesZero) {
  RandomSource rng(1);
  const ComplexMatrix h = RandomGaussian(3, 2, rng);
  ComplexMatrix v = RandomGaussian(3, 2, rng);
  for (std::size_t n = 0; n < 3; ++n) v(n, 1) = 0.0;
  EXPECT_EQ(UserRate(h, v, 1, 1.0), 0.0);
  EXPECT_EQ(SumRate(h, ComplexMatrix(3, 2), 1.0), 0.0);
}

TEST(UserRateTest, MatchesScalarOracle) {
  RandomSource rng(2);
  for (int i = 0; i < 50; ++i) {
    const ComplexMatrix h = RandomGaussian(4, 3, rng);
    const ComplexMatrix v = RandomGaussian(4, 3, rng);
    EXPECT_NEAR(SumRate(h, v, 0.7), ScalarSumRate(h, v, 0.7), 1e-12);
  }
}

TEST(UserRateTest, IndexOutOfRange) {
  const ComplexMatrix h(2, 2), v(2, 2);
  EXPECT_THROW(UserRate(h, v, 2, 1.0), Error);
  EXPECT_THROW(SumRate(h, ComplexMatrix(3, 2), 1.0), Error);
}

TEST(SumRateTest, PerUserNoiseUsesScenario) {
  RandomSource rng(3);
  const ComplexMatrix h = RandomGaussian(3, 2, rng);
  const ComplexMatrix v = RandomGaussian(3, 2, rng);
  ScenarioConfig c = MakeScenario(3, 2);
  c.user_noise = {0.5, 2.0};
  EXPECT_NEAR(SumRate(h, v, c), UserRate(h, v, 0, 0.5) + UserRate(h, v, 1, 2.0), 1e-14);
}

TEST(SumRateTest, UserRelabelingInvariance) {
  RandomSource rng(4);
  for (int i = 0; i < 20; ++i) {
    const ComplexMatrix h = RandomGaussian(5, 4, rng);
    const ComplexMatrix v = RandomGaussian(5, 4, rng);
    const ComplexMatrix pt = RandomPermutation(4, rng).Transpose();
    EXPECT_NEAR(SumRate(h * pt, v * pt, 1.0), SumRate(h, v, 1.0), 1e-12);
  }
}

TEST(SumRateTest, NonNegative) {
  RandomSource rng(5);
  for (int i = 0; i < 100; ++i) {
    EXPECT_GE(SumRate(RandomGaussian(3, 3, rng), RandomGaussian(3, 3, rng), 0.1), 0.0);
  }
}

TEST(SumRateWithGradientTest, MatchesFiniteDifferences) {
  RandomSource rng(6);
  const ScenarioConfig c = MakeScenario(3, 2);
  const ComplexMatrix h = RandomGaussian(3, 2, rng);
  const ComplexMatrix v = RandomGaussian(3, 2, rng);
  const RateWithGradient rg = SumRateWithGradient(h, v, c);
  EXPECT_NEAR(rg.rate, SumRate(h, v, c), 1e-14);
  const double step = 1e-6;
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (const Complex dir : {Complex(1.0, 0.0), Complex(0.0, 1.0)}) {
      ComplexMatrix up = v, down = v;
      up.entries()[i] += step * dir;
      down.entries()[i] -= step * dir;
      const double fd = (SumRate(h, up, c) - SumRate(h, down, c)) / (2 * step);
      const double analytic =
          dir.real() != 0.0 ? rg.grad.entries()[i].real() : rg.grad.entries()[i].imag();
      EXPECT_NEAR(fd, analytic, 1e-7);
    }
  }
}

TEST(NormalizePowerTest, UnitNormScaledBySqrtPmax) {
  const ComplexMatrix v(2, 1, {Complex(0.6, 0.0), Complex(0.0, 0.8)});
  const ComplexMatrix out = NormalizePower(v, 10.0);
  EXPECT_LT(MaxAbs(out - Complex(std::sqrt(10.0)) * v), 1e-14);
}

TEST(NormalizePowerTest, FeasibleIsFixedPoint) {
  RandomSource rng(7);
  const ComplexMatrix v = NormalizePower(RandomGaussian(4, 3, rng), 10.0);
  EXPECT_LT(MaxAbs(NormalizePower(v, 10.0) - v), 1e-12);
}

TEST(NormalizePowerTest, RandomInputsHitBudget) {
  RandomSource rng(8);
  for (int i = 0; i < 100; ++i) {
    const double p = 0.1 + 10 * rng.Uniform();
    const ComplexMatrix out = NormalizePower(RandomGaussian(4, 3, rng), p);
    const double power = FrobeniusNorm(out) * FrobeniusNorm(out);
    EXPECT_NEAR(power / p, 1.0, 1e-9);
  }
}

TEST(NormalizePowerTest, ZeroInputIsDegenerate) {
  try {
    NormalizePower(ComplexMatrix(2, 2), 10.0);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateOutput);
  }
}

TEST(NormalizePowerTest, BackwardMatchesFiniteDifferences) {
  RandomSource rng(9);
  const ComplexMatrix x = RandomGaussian(3, 2, rng);
  const ComplexMatrix w = RandomGaussian(3, 2, rng);
  // L = Re <w, normalize(x)>, so dL/dout = w.
  auto loss = [&](const ComplexMatrix& y) {
    const ComplexMatrix out = NormalizePower(y, 4.0);
    double s = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
      s += (std::conj(w.entries()[i]) * out.entries()[i]).real();
    }
    return s;
  };
  const ComplexMatrix g = NormalizePowerBackward(x, 4.0, w);
  const double step = 1e-6;
  for (std::size_t i = 0; i < x.size(); ++i) {
    ComplexMatrix up = x, down = x;
    up.entries()[i] += step;
    down.entries()[i] -= step;
    EXPECT_NEAR((loss(up) - loss(down)) / (2 * step), g.entries()[i].real(), 1e-8);
    up = x;
    down = x;
    up.entries()[i] += Complex(0.0, step);
    down.entries()[i] -= Complex(0.0, step);
    EXPECT_NEAR((loss(up) - loss(down)) / (2 * step), g.entries()[i].imag(), 1e-8);
  }
}

TEST(UnitaryInvarianceWitnessTest, IdentityAndPermutation) {
  RandomSource rng(10);
  const ComplexMatrix h = RandomGaussian(4, 2, rng);
  const ComplexMatrix v = RandomGaussian(4, 2, rng);
  InvarianceWitness w = UnitaryInvarianceWitness(h, v, ComplexMatrix::Identity(4), 1.0);
  EXPECT_EQ(w.original, w.transformed);
  w = UnitaryInvarianceWitness(h, v, RandomPermutation(4, rng), 1.0);
  EXPECT_NEAR(w.original, w.transformed, 1e-12);
}

TEST(UnitaryInvarianceWitnessTest, HaarUnitary) {
  RandomSource rng(11);
  for (int i = 0; i < 100; ++i) {
    const ComplexMatrix h = RandomGaussian(6, 3, rng);
    const ComplexMatrix v = RandomGaussian(6, 3, rng);
    const InvarianceWitness w = UnitaryInvarianceWitness(h, v, RandomUnitary(6, rng), 1.0);
    EXPECT_NEAR(w.transformed / w.original, 1.0, 1e-9);
  }
}

TEST(UnitaryInvarianceWitnessTest, NonUnitaryRejected) {
  const ComplexMatrix h(2, 1), v(2, 1);
  try {
    UnitaryInvarianceWitness(h, v, Complex(2.0) * ComplexMatrix::Identity(2), 1.0);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
}

}  // namespace
}  // namespace eqpd
