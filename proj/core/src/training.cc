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

#include "eqpd/training.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <string>

#include "eqpd/error.h"
#include "eqpd/objective.h"
#include "eqpd/parallel.h"

namespace eqpd {

std::size_t WorkerCount() {
  if (const char* env = std::getenv("EQPD_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

constexpr std::size_t kChunk = 8;
constexpr char kCoefficientNames[] = {'b', 'p', 'q', 'c'};

// Sum over the chunk of (sum rate, d sum rate / d params).
struct ChunkResult {
  double rate_sum = 0.0;
  std::vector<double> grad;
};

ChunkResult ChunkRateAndGradient(std::span<const ComplexMatrix> chunk,
                                 const NetworkSpec& spec,
                                 const NetworkParams& params,
                                 const ScenarioConfig& config) {
  ChunkResult out;
  NetworkParams grad = ZeroParams(spec);
  ForwardTape tape;
  const double p_max = config.p_max();
  for (const ComplexMatrix& h : chunk) {
    const ComplexMatrix raw = NetworkForwardRaw(h, spec, params, &tape);
    const ComplexMatrix v = NormalizePower(raw, p_max);
    const RateWithGradient rg = SumRateWithGradient(h, v, config);
    out.rate_sum += rg.rate;
    NetworkBackward(spec, params, tape, NormalizePowerBackward(raw, p_max, rg.grad),
                    grad);
  }
  out.grad = Flatten(grad);
  return out;
}

double Mean(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

std::vector<ParamSlice> ParamLayout(const NetworkSpec& spec) {
  std::vector<ParamSlice> out;
  std::size_t offset = 0;
  const NetworkParams zero = ZeroParams(spec);
  for (std::size_t i = 0; i < zero.layers.size(); ++i) {
    const auto coeffs = Coefficients(zero.layers[i]);
    for (std::size_t c = 0; c < coeffs.size(); ++c) {
      // Linear-UE and UPNN carry (b, q).
      const char name = coeffs.size() == 2 ? (c == 0 ? 'b' : 'q') : kCoefficientNames[c];
      const std::size_t count = 2 * coeffs[c]->size();
      out.push_back({i, name, offset, count});
      offset += count;
    }
  }
  return out;
}

ParamVector ToParamVector(const NetworkSpec& spec, const NetworkParams& params) {
  return {Flatten(params), ParamLayout(spec)};
}

void AdamStep(std::vector<double>& params, std::span<const double> grad,
              AdamState& state, double learning_rate, const AdamOptions& options) {
  if (grad.size() != params.size()) {
    throw Error(ErrorCode::kInvalidDimension, "gradient and parameter sizes differ");
  }
  if (state.first_moment.empty()) {
    state.first_moment.assign(params.size(), 0.0);
    state.second_moment.assign(params.size(), 0.0);
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(options.beta1, t);
  const double c2 = 1.0 - std::pow(options.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    double& m = state.first_moment[i];
    double& v = state.second_moment[i];
    m = options.beta1 * m + (1.0 - options.beta1) * grad[i];
    v = options.beta2 * v + (1.0 - options.beta2) * grad[i] * grad[i];
    params[i] -= learning_rate * (m / c1) / (std::sqrt(v / c2) + options.epsilon);
  }
}

void TrainConfig::Validate() const {
  if (!(learning_rate > 0.0)) {
    throw Error(ErrorCode::kConfiguration, "learning rate must be positive");
  }
  if (n_seeds < 1) throw Error(ErrorCode::kConfiguration, "n_seeds must be >= 1");
  if (max_epochs < 1) throw Error(ErrorCode::kConfiguration, "max_epochs must be >= 1");
}

std::size_t TrainConfig::EffectiveBatch(std::size_t dataset_size) const {
  if (batch_size > 0) return std::min(batch_size, dataset_size);
  return dataset_size <= 128 ? dataset_size : 64;
}

KeyedConfig TrainConfig::ToConfig() const {
  KeyedConfig out;
  out.Set("train.learning_rate", FormatDouble(learning_rate));
  out.Set("train.max_epochs", std::to_string(max_epochs));
  out.Set("train.batch_size", std::to_string(batch_size));
  out.Set("train.adam_beta1", FormatDouble(adam.beta1));
  out.Set("train.adam_beta2", FormatDouble(adam.beta2));
  out.Set("train.adam_epsilon", FormatDouble(adam.epsilon));
  out.Set("train.seed", std::to_string(seed));
  out.Set("train.plateau_patience", std::to_string(plateau_patience));
  out.Set("train.plateau_rel_tol", FormatDouble(plateau_rel_tol));
  out.Set("train.n_seeds", std::to_string(n_seeds));
  return out;
}

TrainConfig TrainConfig::FromConfig(const KeyedConfig& c, TrainConfig d) {
  TrainConfig out = d;
  out.learning_rate = c.GetDouble("train.learning_rate", d.learning_rate);
  out.max_epochs = c.GetUint("train.max_epochs", d.max_epochs);
  out.batch_size = c.GetUint("train.batch_size", d.batch_size);
  out.adam.beta1 = c.GetDouble("train.adam_beta1", d.adam.beta1);
  out.adam.beta2 = c.GetDouble("train.adam_beta2", d.adam.beta2);
  out.adam.epsilon = c.GetDouble("train.adam_epsilon", d.adam.epsilon);
  out.seed = c.GetUint("train.seed", d.seed);
  out.plateau_patience = c.GetUint("train.plateau_patience", d.plateau_patience);
  out.plateau_rel_tol = c.GetDouble("train.plateau_rel_tol", d.plateau_rel_tol);
  out.n_seeds = c.GetUint("train.n_seeds", d.n_seeds);
  out.Validate();
  return out;
}

TrainConfig DefaultTrainConfig(LayerKind kind) {
  TrainConfig c;
  c.learning_rate =
      (kind == LayerKind::kUpnn || kind == LayerKind::kLinearUe) ? 1e-2 : 4e-4;
  return c;
}

LossAndGradient ComputeLossAndGradient(std::span<const ComplexMatrix> batch,
                                       const NetworkSpec& spec,
                                       const NetworkParams& params,
                                       const ScenarioConfig& config) {
  if (batch.empty()) throw Error(ErrorCode::kEmptyDataset, "empty batch");
  const std::size_t chunks = (batch.size() + kChunk - 1) / kChunk;
  std::vector<ChunkResult> partial(chunks);
  ParallelFor(chunks, [&](std::size_t c) {
    const std::size_t begin = c * kChunk;
    const std::size_t count = std::min(kChunk, batch.size() - begin);
    partial[c] = ChunkRateAndGradient(batch.subspan(begin, count), spec, params, config);
  });
  LossAndGradient out;
  out.grad.assign(CountParameters(spec), 0.0);
  double rate_sum = 0.0;
  for (const ChunkResult& r : partial) {
    rate_sum += r.rate_sum;
    for (std::size_t i = 0; i < out.grad.size(); ++i) out.grad[i] += r.grad[i];
  }
  const double scale = -1.0 / static_cast<double>(batch.size());
  out.loss = scale * rate_sum;
  for (double& g : out.grad) g *= scale;
  if (!std::isfinite(out.loss)) {
    throw Error(ErrorCode::kNonFinite, "loss is not finite");
  }
  return out;
}

double ComputeLoss(std::span<const ComplexMatrix> batch, const NetworkSpec& spec,
                   const NetworkParams& params, const ScenarioConfig& config) {
  if (batch.empty()) throw Error(ErrorCode::kEmptyDataset, "empty batch");
  std::vector<double> rates(batch.size());
  const double p_max = config.p_max();
  ParallelFor(batch.size(), [&](std::size_t i) {
    rates[i] = SumRate(batch[i], NetworkForward(batch[i], spec, params, p_max), config);
  });
  return -Mean(rates);
}

TrainReport Train(const Dataset& dataset, const NetworkSpec& spec,
                  const TrainConfig& config) {
  config.Validate();
  spec.Validate();
  if (dataset.samples.empty()) throw Error(ErrorCode::kEmptyDataset, "no training data");
  const auto started = std::chrono::steady_clock::now();

  TrainReport report;
  report.seed = config.seed;
  RandomSource init_rng(MixSeed(config.seed, 1));
  RandomSource shuffle_rng(MixSeed(config.seed, 2));
  std::vector<double> params = Flatten(InitializeParams(spec, init_rng));
  AdamState adam;

  const std::size_t n = dataset.size();
  const std::size_t batch = config.EffectiveBatch(n);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<ComplexMatrix> batch_samples;

  double best = std::numeric_limits<double>::infinity();
  std::size_t since_best = 0;
  std::size_t non_finite_streak = 0;
  report.stop_reason = "max-epochs";
  for (std::size_t epoch = 0; epoch < config.max_epochs; ++epoch) {
    if (batch < n) {
      for (std::size_t i = n - 1; i > 0; --i) {
        std::swap(order[i], order[shuffle_rng.UniformIndex(i + 1)]);
      }
    }
    double weighted = 0.0;
    bool finite = true;
    for (std::size_t begin = 0; begin < n; begin += batch) {
      const std::size_t count = std::min(batch, n - begin);
      batch_samples.clear();
      for (std::size_t i = 0; i < count; ++i) {
        batch_samples.push_back(dataset.samples[order[begin + i]]);
      }
      try {
        const LossAndGradient lg = ComputeLossAndGradient(
            batch_samples, spec, Unflatten(spec, params), dataset.config);
        AdamStep(params, lg.grad, adam, config.learning_rate, config.adam);
        weighted += lg.loss * static_cast<double>(count);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kNonFinite &&
            e.code() != ErrorCode::kDegenerateOutput) {
          throw;
        }
        finite = false;
      }
    }
    const double epoch_loss =
        finite ? weighted / static_cast<double>(n) : std::numeric_limits<double>::quiet_NaN();
    report.loss_curve.push_back(epoch_loss);
    report.epochs = epoch + 1;
    if (!std::isfinite(epoch_loss)) {
      if (++non_finite_streak >= 3) {
        throw Error(ErrorCode::kDivergence,
                    "non-finite loss for 3 consecutive epochs (epoch " +
                        std::to_string(epoch) + ")");
      }
      continue;
    }
    non_finite_streak = 0;
    if (epoch_loss < best - config.plateau_rel_tol * std::abs(best) ||
        !std::isfinite(best)) {
      best = epoch_loss;
      since_best = 0;
    } else if (++since_best >= config.plateau_patience) {
      report.stop_reason = "plateau";
      break;
    }
  }
  report.params = std::move(params);
  report.wall_seconds = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - started)
                            .count();
  return report;
}

std::vector<TrainReport> TrainSeeds(const Dataset& dataset, const NetworkSpec& spec,
                                    const TrainConfig& config) {
  config.Validate();
  std::vector<TrainReport> out;
  for (std::size_t s = 0; s < config.n_seeds; ++s) {
    TrainConfig c = config;
    c.seed = config.seed + s;
    out.push_back(Train(dataset, spec, c));
  }
  return out;
}

EvalReport EvaluatePolicy(const PrecodingPolicy& policy, const Dataset& test,
                          std::span<const double> reference_rates) {
  if (reference_rates.size() != test.size()) {
    throw Error(ErrorCode::kMisalignedReference,
                "reference has " + std::to_string(reference_rates.size()) +
                    " rates for " + std::to_string(test.size()) + " test samples");
  }
  if (test.samples.empty()) throw Error(ErrorCode::kEmptyDataset, "empty test set");
  EvalReport out;
  out.rates.resize(test.size());
  ParallelFor(test.size(), [&](std::size_t i) {
    out.rates[i] = SumRate(test.samples[i], policy(test.samples[i]), test.config);
  });
  out.mean_rate = Mean(out.rates);
  out.reference_mean_rate = Mean(reference_rates);
  out.normalized_score = out.mean_rate / out.reference_mean_rate;
  return out;
}

EvalReport Evaluate(const NetworkParams& params, const NetworkSpec& spec,
                    const Dataset& test, std::span<const double> reference_rates) {
  const double p_max = test.config.p_max();
  return EvaluatePolicy(
      [&](const ComplexMatrix& h) { return NetworkForward(h, spec, params, p_max); },
      test, reference_rates);
}

namespace {

// True if every split-leaky-relu pre-activation of the batch keeps its real
// and imaginary parts at least `margin` away from zero.
bool ClearOfKinks(std::span<const ComplexMatrix> batch, const NetworkSpec& spec,
                  const NetworkParams& params, double margin) {
  ForwardTape tape;
  for (const ComplexMatrix& h : batch) {
    NetworkForwardRaw(h, spec, params, &tape);
    for (std::size_t i = 0; i < spec.layers.size(); ++i) {
      if (spec.layers[i].activation != ActivationKind::kSplitLeakyRelu) continue;
      for (const Complex& e : tape.pre_activations[i].values()) {
        if (std::abs(e.real()) < margin || std::abs(e.imag()) < margin) return false;
      }
    }
  }
  return true;
}

}  // namespace

GradCheckReport GradientCheck(const NetworkSpec& spec, const ScenarioConfig& scenario,
                              std::size_t trials, const GradCheckOptions& options) {
  if (trials < 1) throw Error(ErrorCode::kInvalidArgument, "trials must be >= 1");
  spec.Validate();
  GradCheckReport report;
  report.trials = trials;
  report.tolerance = options.tolerance;
  const bool has_kinks = std::any_of(spec.layers.begin(), spec.layers.end(), [](const LayerSpec& l) {
    return l.activation == ActivationKind::kSplitLeakyRelu;
  });
  RandomSource rng(options.seed);
  for (std::size_t t = 0; t < trials; ++t) {
    NetworkParams params;
    Dataset data;
    for (int attempt = 0;; ++attempt) {
      params = InitializeParams(spec, rng);
      data = GenerateRayleigh(scenario, options.batch_size, rng.NextU64());
      if (!has_kinks || ClearOfKinks(data.samples, spec, params, options.kink_margin)) break;
      if (attempt >= 1000) {
        throw Error(ErrorCode::kInvalidArgument, "could not avoid activation kinks");
      }
    }
    const LossAndGradient lg = ComputeLossAndGradient(data.samples, spec, params, scenario);
    std::vector<double> flat = Flatten(params);
    std::vector<std::size_t> coords(flat.size());
    std::iota(coords.begin(), coords.end(), std::size_t{0});
    if (coords.size() > options.max_coordinates) {
      for (std::size_t i = 0; i < options.max_coordinates; ++i) {
        std::swap(coords[i], coords[i + rng.UniformIndex(coords.size() - i)]);
      }
      coords.resize(options.max_coordinates);
    }
    double worst = 0.0;
    for (std::size_t c : coords) {
      const double saved = flat[c];
      flat[c] = saved + options.step;
      const double up = ComputeLoss(data.samples, spec, Unflatten(spec, flat), scenario);
      flat[c] = saved - options.step;
      const double down = ComputeLoss(data.samples, spec, Unflatten(spec, flat), scenario);
      flat[c] = saved;
      const double fd = (up - down) / (2.0 * options.step);
      const double diff = std::abs(fd - lg.grad[c]);
      report.max_abs_error = std::max(report.max_abs_error, diff);
      if (diff <= options.absolute_floor) continue;
      worst = std::max(worst, diff / std::max(std::abs(fd), std::abs(lg.grad[c])));
    }
    report.per_trial_max_error.push_back(worst);
    report.max_rel_error = std::max(report.max_rel_error, worst);
  }
  report.pass = report.max_rel_error <= options.tolerance;
  return report;
}

}  // namespace eqpd
