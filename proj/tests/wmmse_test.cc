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

#include <cmath>

#include "eqpd/channel.h"
#include "eqpd/error.h"
#include "eqpd/objective.h"
#include "gtest/gtest.h"

namespace eqpd {
namespace {

double Power(const ComplexMatrix& v) { return FrobeniusNorm(v) * FrobeniusNorm(v); }

// 1 - |<a, b>| / (|a| |b|), zero iff the directions agree up to phase.
double AngularDeviation(const ComplexMatrix& a, const ComplexMatrix& b) {
  Complex inner = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    inner += std::conj(a.entries()[i]) * b.entries()[i];
  }
  return 1.0 - std::abs(inner) / (FrobeniusNorm(a) * FrobeniusNorm(b));
}

ComplexMatrix RandomFeasible(std::size_t n, std::size_t k, double p_max, RandomSource& rng) {
  return NormalizePower(RandomGaussian(n, k, rng), p_max);
}

TEST(WmmseSolveTest, SingleUserReachesMatchedFilter) {
  RandomSource rng(1);
  const ScenarioConfig c = MakeScenario(4, 1, 10.0);
  const ComplexMatrix h = RandomGaussian(4, 1, rng);
  const WmmseResult r = WmmseSolve(h, c, WmmseConfig{}, RandomFeasible(4, 1, 10.0, rng));
  const double hh = FrobeniusNorm(h) * FrobeniusNorm(h);
  EXPECT_NEAR(r.sum_rate, std::log2(1.0 + 10.0 * hh), 1e-6);
  EXPECT_LT(AngularDeviation(r.precoder, h), 1e-6);
}

TEST(WmmseSolveTest, TraceIsMonotoneAndFeasible) {
  RandomSource rng(2);
  const ScenarioConfig c = MakeScenario(8, 4, 10.0);
  for (int i = 0; i < 20; ++i) {
    const ComplexMatrix h = RandomGaussian(8, 4, rng);
    const WmmseResult r = WmmseSolve(h, c, WmmseConfig{}, RandomFeasible(8, 4, 10.0, rng));
    ASSERT_GE(r.rate_trace.size(), 2u);
    for (std::size_t t = 1; t < r.rate_trace.size(); ++t) {
      EXPECT_GE(r.rate_trace[t], r.rate_trace[t - 1] - 1e-9);
    }
    EXPECT_LE(Power(r.precoder), 10.0 * (1 + 1e-9));
    EXPECT_NEAR(r.sum_rate, SumRate(h, r.precoder, c), 1e-12);
    EXPECT_EQ(r.sum_rate, r.rate_trace.back());
  }
}

TEST(WmmseSolveTest, BeatsRzfSweep) {
  RandomSource rng(3);
  const ScenarioConfig c = MakeScenario(4, 2, 10.0);
  for (int i = 0; i < 20; ++i) {
    const ComplexMatrix h = RandomGaussian(4, 2, rng);
    RandomSource starts(100 + i);
    const WmmseResult r = WmmseBestOf(h, c, WmmseConfig{}, starts);
    EXPECT_GE(r.sum_rate, RzfSweep(h, c, 50).best_rate - 1e-9);
  }
}

TEST(WmmseSolveTest, InfeasibleInitRejected) {
  RandomSource rng(4);
  const ScenarioConfig c = MakeScenario(3, 2, 10.0);
  const ComplexMatrix h = RandomGaussian(3, 2, rng);
  EXPECT_THROW(WmmseSolve(h, c, WmmseConfig{}, Complex(2.0) * MatchedFilter(h, 10.0)), Error);
  EXPECT_THROW(WmmseSolve(h, c, WmmseConfig{}, ComplexMatrix(3, 3)), Error);
}

TEST(WmmseSolveTest, IteratesTransformCovariantly) {
  RandomSource rng(5);
  const ScenarioConfig c = MakeScenario(5, 3, 10.0);
  for (int i = 0; i < 10; ++i) {
    const ComplexMatrix h = RandomGaussian(5, 3, rng);
    const ComplexMatrix init = RandomFeasible(5, 3, 10.0, rng);
    const ComplexMatrix u = RandomUnitary(5, rng);
    const ComplexMatrix pt = RandomPermutation(3, rng).Transpose();
    const WmmseResult base = WmmseSolve(h, c, WmmseConfig{}, init);
    const WmmseResult moved = WmmseSolve(u * h * pt, c, WmmseConfig{}, u * init * pt);
    EXPECT_NEAR(moved.sum_rate, base.sum_rate, 1e-8);
    EXPECT_LT(FrobeniusNorm(moved.precoder - u * base.precoder * pt) /
                  FrobeniusNorm(base.precoder),
              1e-8);
  }
}

TEST(WmmseConfigTest, Validate) {
  WmmseConfig c;
  EXPECT_NO_THROW(c.Validate());
  c.restarts = 0;
  EXPECT_THROW(c.Validate(), Error);
  c = WmmseConfig{};
  c.max_iters = 0;
  EXPECT_THROW(c.Validate(), Error);
  c = WmmseConfig{};
  c.rel_tol = 0.0;
  EXPECT_THROW(c.Validate(), Error);
}

TEST(WmmseBestOfTest, OneStartIsMatchedFilterSolve) {
  RandomSource rng(6);
  const ScenarioConfig c = MakeScenario(6, 3, 10.0);
  const ComplexMatrix h = RandomGaussian(6, 3, rng);
  WmmseConfig opts;
  opts.restarts = 1;
  RandomSource starts(1);
  const WmmseResult best = WmmseBestOf(h, c, opts, starts);
  const WmmseResult direct = WmmseSolve(h, c, opts, MatchedFilter(h, c.p_max()));
  EXPECT_EQ(best.sum_rate, direct.sum_rate);
  EXPECT_EQ(best.precoder, direct.precoder);
}

TEST(WmmseBestOfTest, MoreRestartsNeverWorse) {
  RandomSource rng(7);
  const ScenarioConfig c = MakeScenario(8, 4, 10.0);
  for (int i = 0; i < 5; ++i) {
    const ComplexMatrix h = RandomGaussian(8, 4, rng);
    WmmseConfig one;
    one.restarts = 1;
    RandomSource a(i), b(i);
    EXPECT_GE(WmmseBestOf(h, c, WmmseConfig{}, a).sum_rate,
              WmmseBestOf(h, c, one, b).sum_rate);
  }
}

TEST(WmmseBestOfTest, SameSeedSameResult) {
  RandomSource rng(8);
  const ScenarioConfig c = MakeScenario(4, 3, 10.0);
  const ComplexMatrix h = RandomGaussian(4, 3, rng);
  WmmseConfig opts;
  opts.restarts = 5;
  RandomSource a(3), b(3);
  EXPECT_EQ(WmmseBestOf(h, c, opts, a).precoder, WmmseBestOf(h, c, opts, b).precoder);
}

TEST(MatchedFilterTest, FullPowerAlongChannel) {
  RandomSource rng(9);
  const ComplexMatrix h = RandomGaussian(4, 2, rng);
  const ComplexMatrix v = MatchedFilter(h, 10.0);
  EXPECT_NEAR(Power(v), 10.0, 1e-12);
  EXPECT_LT(AngularDeviation(v, h), 1e-15);
}

TEST(RzfPrecoderTest, LargeNuApproachesMatchedFilter) {
  RandomSource rng(10);
  const ComplexMatrix h = RandomGaussian(8, 4, rng);
  EXPECT_LT(AngularDeviation(RzfPrecoder(h, 1e6, 10.0), h), 1e-3);
}

TEST(RzfPrecoderTest, SingleUserAnyNuIsMatchedFilter) {
  RandomSource rng(11);
  const ComplexMatrix h = RandomGaussian(5, 1, rng);
  for (double nu : {1e-3, 1.0, 1e3}) {
    EXPECT_LT(AngularDeviation(RzfPrecoder(h, nu, 10.0), h), 1e-12);
  }
}

TEST(RzfPrecoderTest, PowerNormalized) {
  RandomSource rng(12);
  const ComplexMatrix h = RandomGaussian(8, 4, rng);
  EXPECT_NEAR(Power(RzfPrecoder(h, 0.4, 10.0)), 10.0, 1e-9);
}

TEST(RzfPrecoderTest, SingularAtZeroNu) {
  RandomSource rng(13);
  const ComplexMatrix h = RandomGaussian(4, 2, rng);  // H H^H has rank 2 < 4
  try {
    RzfPrecoder(h, 0.0, 10.0);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSingularMatrix);
  }
  EXPECT_THROW(RzfPrecoder(h, -1.0, 10.0), Error);
}

TEST(RzfSweepTest, BelowWmmseAtDefaultScenario) {
  RandomSource rng(14);
  const ScenarioConfig c = MakeScenario(8, 4, 10.0);
  for (int i = 0; i < 5; ++i) {
    const ComplexMatrix h = RandomGaussian(8, 4, rng);
    RandomSource starts(i);
    const RzfSweepResult rzf = RzfSweep(h, c, 50);
    EXPECT_LE(rzf.best_rate, WmmseBestOf(h, c, WmmseConfig{}, starts).sum_rate + 1e-9);
    EXPECT_GE(rzf.best_nu, 1e-3);
    EXPECT_LE(rzf.best_nu, 1e3 * (1 + 1e-12));
  }
}

}  // namespace
}  // namespace eqpd
