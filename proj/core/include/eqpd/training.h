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

#ifndef EQPD_TRAINING_H_
#define EQPD_TRAINING_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "eqpd/channel.h"
#include "eqpd/keyed_config.h"
#include "eqpd/network.h"

namespace eqpd {

// Flat real parameter vector and the map from its slices to layers.
struct ParamSlice {
  std::size_t layer = 0;
  char coefficient = 'b';  // one of b, p, q, c
  std::size_t offset = 0;
  std::size_t count = 0;   // real scalars
};

struct ParamVector {
  std::vector<double> values;
  std::vector<ParamSlice> layout;
};

std::vector<ParamSlice> ParamLayout(const NetworkSpec& spec);
ParamVector ToParamVector(const NetworkSpec& spec, const NetworkParams& params);

struct AdamOptions {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  std::vector<double> first_moment;
  std::vector<double> second_moment;
  std::size_t step = 0;
};

// One bias-corrected Adam update; state is sized lazily on the first call.
void AdamStep(std::vector<double>& params, std::span<const double> grad,
              AdamState& state, double learning_rate,
              const AdamOptions& options = {});

struct TrainConfig {
  double learning_rate = 1e-2;
  std::size_t max_epochs = 2000;
  // 0 selects the full dataset when it has at most 128 samples, else 64.
  std::size_t batch_size = 0;
  AdamOptions adam;
  std::uint64_t seed = 1;
  // Stop once the best epoch loss has not improved by plateau_rel_tol
  // (relative) for this many epochs.
  std::size_t plateau_patience = 200;
  double plateau_rel_tol = 1e-4;
  std::size_t n_seeds = 5;

  void Validate() const;
  std::size_t EffectiveBatch(std::size_t dataset_size) const;
  KeyedConfig ToConfig() const;
  // Reads train.* keys, falling back to `defaults`.
  static TrainConfig FromConfig(const KeyedConfig& config, TrainConfig defaults);
};

// Learning rate 1e-2 for the small UE-PE networks, 4e-4 for PENN and
// Edge-GNN.
TrainConfig DefaultTrainConfig(LayerKind kind);

struct LossAndGradient {
  double loss = 0.0;          // -(1/|batch|) sum of sum rates
  std::vector<double> grad;   // d loss / d Flatten(params)
};

// Exact reverse-mode gradient of the negative mean sum rate. The batch is
// split into fixed chunks reduced in order, so the result does not depend
// on the number of worker threads.
LossAndGradient ComputeLossAndGradient(std::span<const ComplexMatrix> batch,
                                       const NetworkSpec& spec,
                                       const NetworkParams& params,
                                       const ScenarioConfig& config);
double ComputeLoss(std::span<const ComplexMatrix> batch, const NetworkSpec& spec,
                   const NetworkParams& params, const ScenarioConfig& config);

struct TrainReport {
  std::uint64_t seed = 0;
  std::vector<double> loss_curve;  // mean training loss per epoch
  std::vector<double> params;      // flat, final
  std::size_t epochs = 0;
  std::string stop_reason;         // "max-epochs" or "plateau"
  double wall_seconds = 0.0;
};

// Unsupervised training with Adam on the negative sum rate. Deterministic
// given (dataset, spec, config). Throws kDivergence after three consecutive
// epochs with a non-finite loss.
TrainReport Train(const Dataset& dataset, const NetworkSpec& spec,
                  const TrainConfig& config);
// config.n_seeds runs with seeds config.seed, config.seed + 1, ...
std::vector<TrainReport> TrainSeeds(const Dataset& dataset,
                                    const NetworkSpec& spec,
                                    const TrainConfig& config);

struct EvalReport {
  std::vector<double> rates;  // per test sample
  double mean_rate = 0.0;
  double reference_mean_rate = 0.0;
  // mean_rate / reference_mean_rate
  double normalized_score = 0.0;
};

using PrecodingPolicy = std::function<ComplexMatrix(const ComplexMatrix&)>;

EvalReport EvaluatePolicy(const PrecodingPolicy& policy, const Dataset& test,
                          std::span<const double> reference_rates);
EvalReport Evaluate(const NetworkParams& params, const NetworkSpec& spec,
                    const Dataset& test, std::span<const double> reference_rates);

struct GradCheckOptions {
  std::size_t batch_size = 3;
  double step = 1e-6;
  double tolerance = 1e-4;
  double absolute_floor = 1e-8;
  // Coordinates checked per trial (all when the network is smaller).
  std::size_t max_coordinates = 400;
  // Resample until every split-leaky-relu pre-activation part has modulus
  // above this.
  double kink_margin = 1e-3;
  std::uint64_t seed = 1;
};

struct GradCheckReport {
  std::size_t trials = 0;
  std::vector<double> per_trial_max_error;
  // Largest |g - fd| / max(|g|, |fd|) over components whose absolute
  // difference exceeds absolute_floor.
  double max_rel_error = 0.0;
  double max_abs_error = 0.0;  // largest |g - fd| over all checked components
  double tolerance = 0.0;
  bool pass = false;
};

// Central-difference check of ComputeLossAndGradient on random parameters
// and random Rayleigh batches.
GradCheckReport GradientCheck(const NetworkSpec& spec,
                              const ScenarioConfig& scenario, std::size_t trials,
                              const GradCheckOptions& options = {});

}  // namespace eqpd

#endif  // EQPD_TRAINING_H_
