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

#ifndef EQPD_EXPERIMENTS_H_
#define EQPD_EXPERIMENTS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eqpd/channel.h"
#include "eqpd/keyed_config.h"
#include "eqpd/network.h"
#include "eqpd/training.h"
#include "eqpd/wmmse.h"

namespace eqpd {

enum class Method { kUpnn, kPenn, kEdgeGnn, kLinearUe, kWmmse, kRzf };

std::string_view MethodName(Method method);
Method ParseMethod(std::string_view name);
// Layer family of a learned method; nullopt for wmmse and rzf.
std::optional<LayerKind> LearnedKind(Method method);

struct ExperimentConfig {
  ScenarioConfig scenario;  // training scenario
  std::vector<Method> methods = {Method::kUpnn, Method::kEdgeGnn, Method::kPenn,
                                 Method::kLinearUe};
  // Training-set sizes of the sample-efficiency curve. Every entry must fit
  // in train_pool; the cells use prefixes of one fixed pool.
  std::vector<std::size_t> sample_grid = {15, 100, 1000, 10000};
  std::size_t train_pool = 10000;
  // Training-set size of the generalization sweeps.
  std::size_t n_train = 500;
  std::size_t n_test = 2000;
  std::vector<std::size_t> test_users = {2, 4, 8, 12, 16};
  std::vector<std::size_t> test_antennas = {4, 8, 12, 16};
  std::uint64_t seed = 1;
  WmmseConfig wmmse;
  std::size_t rzf_points = 50;
  // Normalized score a method must reach for the complexity table.
  double target_score = 0.98;
  std::size_t timing_samples = 2000;
  // WMMSE reference rates are cached here; empty disables the cache.
  std::filesystem::path cache_dir;
  // Unparsed keys; holds per-method overrides such as
  // "penn.train.max_epochs" or a full "upnn.layers" spec.
  KeyedConfig overrides;

  void Validate() const;
  // DefaultSpec, replaced by "<method>.layers ..." when present; the
  // top-level "upnn_gram" and "scale_input" keys apply to every spec.
  NetworkSpec SpecFor(Method method) const;
  // DefaultTrainConfig <- "train.*" <- "<method>.train.*", with train.seed
  // defaulting to `seed`.
  TrainConfig TrainFor(Method method) const;

  // Keys: scenario.*, methods, sample_grid, train_pool, n_train, n_test,
  // test_users, test_antennas, seed, wmmse.*, rzf_points, target_score,
  // timing_samples, cache_dir, plus the override keys above.
  static ExperimentConfig FromConfig(const KeyedConfig& config);
  KeyedConfig ToConfig() const;
};

// Fixed datasets of an experiment, derived from the experiment seed so
// every cell, sweep point and rerun sees the same channels.
Dataset TrainPool(const ExperimentConfig& config, const ScenarioConfig& scenario,
                  std::size_t count);
Dataset TestSet(const ExperimentConfig& config, const ScenarioConfig& scenario);

// Per-sample best-of-restarts WMMSE rates. Sample i uses its own derived
// random stream, so the result does not depend on scheduling. With a
// non-empty cache_dir the rates are read from, or written to, a file keyed
// by the dataset and solver settings.
std::vector<double> WmmseReferenceRates(const Dataset& test, const WmmseConfig& opts,
                                        std::uint64_t seed,
                                        const std::filesystem::path& cache_dir = {});

struct SeedResult {
  std::uint64_t seed = 0;
  double score = 0.0;  // NaN when the cell failed for this seed
  double mean_rate = 0.0;
  double reference_mean_rate = 0.0;
  double train_seconds = 0.0;
  std::string status = "ok";  // "ok" or an error code name
  std::string message;
};

// One (method, train scenario, test scenario, n_train_samples) cell.
struct CellReport {
  std::string figure;  // "sample-efficiency", "user-sweep", "antenna-sweep"
  Method method = Method::kUpnn;
  ScenarioConfig train_scenario;
  ScenarioConfig test_scenario;
  std::size_t n_train_samples = 0;
  std::vector<SeedResult> seeds;
  double mean_score = 0.0;  // over successful seeds; NaN if none
  double std_score = 0.0;   // population std over successful seeds
  std::size_t parameter_count = 0;
  double wall_seconds = 0.0;

  bool ok() const;
};

// Trained parameters of one method, one entry per seed.
struct TrainedModel {
  Method method = Method::kUpnn;
  NetworkSpec spec;
  ScenarioConfig train_scenario;
  std::size_t n_train_samples = 0;
  std::vector<TrainReport> runs;
  std::vector<SeedResult> failures;  // seeds whose training threw
};

TrainedModel TrainModel(const ExperimentConfig& config, Method method,
                        const Dataset& train);

// Scores every seed of `model` (or the solver itself for wmmse/rzf) on
// `test` against `reference`.
CellReport EvaluateCell(const ExperimentConfig& config, const TrainedModel& model,
                        const Dataset& test, std::span<const double> reference,
                        std::string figure);

// methods x sample_grid cells at the training scenario. Throws
// kConfiguration up front when a grid entry exceeds train_pool; failures
// inside a cell are recorded in the cell.
std::vector<CellReport> RunSampleEfficiency(const ExperimentConfig& config);

// Trains once at the training scenario on n_train samples, then evaluates
// the same parameters at K in test_users (N fixed) with a fresh WMMSE
// reference per test scenario.
std::vector<CellReport> RunUserSweep(const ExperimentConfig& config);
std::vector<CellReport> RunUserSweep(const ExperimentConfig& config,
                                     std::span<const TrainedModel> models);
// Same over N in test_antennas with K fixed.
std::vector<CellReport> RunAntennaSweep(const ExperimentConfig& config);
std::vector<CellReport> RunAntennaSweep(const ExperimentConfig& config,
                                        std::span<const TrainedModel> models);

struct ComplexityRow {
  Method method = Method::kUpnn;
  std::size_t parameter_count = 0;
  // Smallest sample_grid entry whose mean score reaches target_score.
  std::optional<std::size_t> min_samples;
  // Samples used for the timing columns: min_samples, else the largest
  // grid entry.
  std::size_t timed_samples = 0;
  double train_seconds = 0.0;        // mean per seed
  double inference_seconds = 0.0;    // mean per test sample
};

// Uses `curve` when given (the cells of RunSampleEfficiency), otherwise
// runs the sample-efficiency experiment first.
std::vector<ComplexityRow> RunComplexityTable(
    const ExperimentConfig& config,
    std::optional<std::span<const CellReport>> curve = std::nullopt);

// Writes, under `dir`:
//   <figure>.csv          one row per (cell, seed)
//   <figure>_summary.csv  one row per cell (mean and std)
//   complexity.csv        when `complexity` is non-empty
//   summary.json          everything above keyed by figure name
// Throws kInvalidArgument on an empty report list and kIo on write errors.
void EmitPlotData(std::span<const CellReport> reports,
                  const std::filesystem::path& dir,
                  std::span<const ComplexityRow> complexity = {});

// Column headers of the CSV files written by EmitPlotData.
inline constexpr std::string_view kSeedCsvHeader =
    "figure,method,train_n_antennas,train_n_users,test_n_antennas,test_n_users,"
    "snr_db,n_train_samples,seed,score,mean_rate,reference_mean_rate,"
    "parameter_count,status";
inline constexpr std::string_view kSummaryCsvHeader =
    "figure,method,train_n_antennas,train_n_users,test_n_antennas,test_n_users,"
    "snr_db,n_train_samples,n_seeds,n_ok,mean_score,std_score,parameter_count";
inline constexpr std::string_view kComplexityCsvHeader =
    "method,parameter_count,min_samples,timed_samples,train_seconds,"
    "inference_seconds";

}  // namespace eqpd

#endif  // EQPD_EXPERIMENTS_H_
