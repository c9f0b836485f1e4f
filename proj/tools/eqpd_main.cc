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

// Command-line driver for data generation, WMMSE references, training,
// evaluation, the sweep experiments and equivariance checks.
//
// Exit codes: 0 success, 1 a cell, seed or check failed, 2 usage or
// configuration error.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "eqpd/channel.h"
#include "eqpd/checkpoint.h"
#include "eqpd/equivariance.h"
#include "eqpd/error.h"
#include "eqpd/experiments.h"
#include "eqpd/keyed_config.h"
#include "eqpd/network.h"
#include "eqpd/training.h"
#include "eqpd/wmmse.h"

namespace {

using eqpd::KeyedConfig;
using nlohmann::json;

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

// Options shared by every subcommand. Flags override keys of --config.
struct Common {
  std::string config_path;
  std::vector<std::string> sets;  // key=value
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<std::size_t> n_antennas;
  std::optional<std::size_t> n_users;
  std::optional<double> snr_db;
  std::string cache_dir;
  std::optional<std::size_t> restarts;
};

void AddCommon(CLI::App* cmd, Common& c, bool require_seed_out) {
  cmd->add_option("--config", c.config_path, "Keyed text configuration file")
      ->check(CLI::ExistingFile);
  cmd->add_option("--set", c.sets, "Override one configuration key (key=value)");
  auto* seed = cmd->add_option("--seed", c.seed, "Experiment seed");
  auto* out = cmd->add_option("--out", c.out, "Output path");
  if (require_seed_out) {
    seed->required();
    out->required();
  }
  cmd->add_option("--n-antennas,--antennas", c.n_antennas, "Number of antennas N");
  cmd->add_option("--n-users,--users", c.n_users, "Number of users K");
  cmd->add_option("--snr-db", c.snr_db, "SNR in dB");
  cmd->add_option("--cache-dir", c.cache_dir, "WMMSE reference cache directory");
  cmd->add_option("--restarts", c.restarts, "WMMSE starts per sample");
}

KeyedConfig Resolve(const Common& c) {
  KeyedConfig config;
  if (!c.config_path.empty()) config = KeyedConfig::Load(c.config_path);
  for (const std::string& kv : c.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw eqpd::Error(eqpd::ErrorCode::kConfiguration, "--set expects key=value: " + kv);
    }
    config.Set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (c.seed) config.Set("seed", std::to_string(*c.seed));
  if (c.n_antennas) config.Set("scenario.n_antennas", std::to_string(*c.n_antennas));
  if (c.n_users) config.Set("scenario.n_users", std::to_string(*c.n_users));
  if (c.snr_db) config.Set("scenario.snr_db", eqpd::FormatDouble(*c.snr_db));
  if (!c.cache_dir.empty()) config.Set("cache_dir", c.cache_dir);
  if (c.restarts) config.Set("wmmse.restarts", std::to_string(*c.restarts));
  return config;
}

void WriteJson(const std::string& path, const json& value) {
  if (path.empty() || path == "-") {
    std::cout << value.dump(2) << "\n";
    return;
  }
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p);
  out << value.dump(2) << "\n";
  if (!out) throw eqpd::Error(eqpd::ErrorCode::kIo, "cannot write " + path);
}

// Test data: --data PATH, or generated from the scenario and seed.
eqpd::Dataset TestData(const std::string& data_path, const KeyedConfig& config) {
  if (!data_path.empty()) return eqpd::LoadDataset(data_path);
  const eqpd::ExperimentConfig exp = eqpd::ExperimentConfig::FromConfig(config);
  return eqpd::TestSet(exp, exp.scenario);
}

json CellsJson(const std::vector<eqpd::CellReport>& cells) {
  json out = json::array();
  for (const eqpd::CellReport& c : cells) {
    out.push_back({{"figure", c.figure},
                   {"method", eqpd::MethodName(c.method)},
                   {"test_n_antennas", c.test_scenario.n_antennas},
                   {"test_n_users", c.test_scenario.n_users},
                   {"n_train_samples", c.n_train_samples},
                   {"mean_score", c.mean_score},
                   {"std_score", c.std_score},
                   {"ok", c.ok()}});
  }
  return out;
}

int FinishCells(const std::vector<eqpd::CellReport>& cells, const std::string& out,
                const std::vector<eqpd::ComplexityRow>& complexity = {}) {
  eqpd::EmitPlotData(cells, out, complexity);
  std::cout << CellsJson(cells).dump(2) << "\n";
  for (const eqpd::CellReport& c : cells) {
    if (!c.ok()) return kFailed;
  }
  return kOk;
}

int RunGenData(const Common& c, std::size_t count) {
  const KeyedConfig config = Resolve(c);
  const eqpd::ScenarioConfig scenario =
      eqpd::ScenarioFromConfig(config, eqpd::MakeScenario(8, 4, 10.0));
  const eqpd::Dataset data = eqpd::GenerateRayleigh(scenario, count, *c.seed);
  eqpd::SaveDataset(data, c.out);
  return kOk;
}

int RunWmmse(const Common& c, const std::string& data_path) {
  const KeyedConfig config = Resolve(c);
  const eqpd::ExperimentConfig exp = eqpd::ExperimentConfig::FromConfig(config);
  const eqpd::Dataset data = TestData(data_path, config);
  const std::vector<double> rates =
      eqpd::WmmseReferenceRates(data, exp.wmmse, *c.seed, exp.cache_dir);
  double sum = 0.0;
  for (double r : rates) sum += r;
  WriteJson(c.out, {{"n_antennas", data.config.n_antennas},
                    {"n_users", data.config.n_users},
                    {"snr_db", data.config.snr_db},
                    {"restarts", exp.wmmse.restarts},
                    {"mean_rate", sum / rates.size()},
                    {"rates", rates}});
  return kOk;
}

std::filesystem::path SeedPath(const std::filesystem::path& out, std::uint64_t seed,
                               std::size_t n_seeds) {
  if (n_seeds == 1) return out;
  std::filesystem::path p = out;
  p.replace_filename(out.stem().string() + "-seed" + std::to_string(seed) +
                     out.extension().string());
  return p;
}

int RunTrain(const Common& c, const std::string& method_name, const std::string& data_path,
             std::size_t n_train) {
  KeyedConfig config = Resolve(c);
  if (n_train) config.Set("n_train", std::to_string(n_train));
  const eqpd::ExperimentConfig exp = eqpd::ExperimentConfig::FromConfig(config);
  const eqpd::Method method = eqpd::ParseMethod(method_name);
  if (!eqpd::LearnedKind(method)) {
    throw eqpd::Error(eqpd::ErrorCode::kConfiguration, method_name + " is not trainable");
  }
  const eqpd::Dataset train = data_path.empty()
                                  ? eqpd::TrainPool(exp, exp.scenario, exp.n_train)
                                  : eqpd::LoadDataset(data_path);
  const eqpd::TrainedModel model = eqpd::TrainModel(exp, method, train);
  const eqpd::TrainConfig tc = exp.TrainFor(method);
  json runs = json::array();
  for (const eqpd::TrainReport& run : model.runs) {
    eqpd::TrainConfig echo = tc;
    echo.seed = run.seed;
    echo.n_seeds = 1;
    const std::filesystem::path path = SeedPath(c.out, run.seed, tc.n_seeds);
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    eqpd::SaveCheckpoint({model.spec, eqpd::Unflatten(model.spec, run.params),
                          train.config, echo},
                         path);
    runs.push_back({{"seed", run.seed},
                    {"checkpoint", path.string()},
                    {"epochs", run.epochs},
                    {"stop_reason", run.stop_reason},
                    {"final_loss", run.loss_curve.empty() ? 0.0 : run.loss_curve.back()},
                    {"wall_seconds", run.wall_seconds},
                    {"loss_curve", run.loss_curve}});
  }
  json failures = json::array();
  for (const eqpd::SeedResult& f : model.failures) {
    failures.push_back({{"seed", f.seed}, {"status", f.status}, {"message", f.message}});
  }
  std::cout << json({{"method", method_name},
                     {"parameter_count", eqpd::CountParameters(model.spec)},
                     {"runs", runs},
                     {"failures", failures}})
                   .dump(2)
            << "\n";
  return model.failures.empty() ? kOk : kFailed;
}

int RunEval(const Common& c, const std::vector<std::string>& models,
            const std::string& data_path) {
  const KeyedConfig config = Resolve(c);
  const eqpd::ExperimentConfig exp = eqpd::ExperimentConfig::FromConfig(config);
  const eqpd::Dataset test = TestData(data_path, config);
  const std::vector<double> reference =
      eqpd::WmmseReferenceRates(test, exp.wmmse, *c.seed, exp.cache_dir);
  json results = json::array();
  double sum = 0.0;
  for (const std::string& path : models) {
    const eqpd::Checkpoint ckpt = eqpd::LoadCheckpoint(path);
    const eqpd::EvalReport report = eqpd::Evaluate(ckpt.params, ckpt.spec, test, reference);
    sum += report.normalized_score;
    results.push_back({{"checkpoint", path},
                       {"seed", ckpt.train.seed},
                       {"score", report.normalized_score},
                       {"mean_rate", report.mean_rate},
                       {"reference_mean_rate", report.reference_mean_rate},
                       {"parameter_count", eqpd::CountParameters(ckpt.spec)}});
  }
  WriteJson(c.out, {{"test_n_antennas", test.config.n_antennas},
                    {"test_n_users", test.config.n_users},
                    {"n_test", test.size()},
                    {"mean_score", sum / models.size()},
                    {"models", results}});
  return kOk;
}

int RunCheck(const Common& c, const std::string& model, const std::string& mode,
             std::size_t trials, double tol, bool pre_normalization) {
  const eqpd::Checkpoint ckpt = eqpd::LoadCheckpoint(model);
  const std::size_t n = c.n_antennas.value_or(ckpt.scenario.n_antennas);
  const std::size_t k = c.n_users.value_or(ckpt.scenario.n_users);
  const double p_max = ckpt.scenario.p_max();
  const bool raw = pre_normalization || mode == "row-local";
  const eqpd::MatrixMap f = [&](const eqpd::ComplexMatrix& h) {
    return raw ? eqpd::NetworkForwardRaw(h, ckpt.spec, ckpt.params)
               : eqpd::NetworkForward(h, ckpt.spec, ckpt.params, p_max);
  };
  const std::uint64_t seed = c.seed.value_or(1);
  eqpd::EquivarianceReport report;
  if (mode == "ue-pe") {
    report = eqpd::CheckUePe(f, n, k, trials, tol, seed);
  } else if (mode == "2d-pe") {
    report = eqpd::Check2dPe(f, n, k, trials, tol, seed);
  } else {
    report = eqpd::CheckRowLocality(f, n, k, trials, tol, seed);
  }
  json out = {{"mode", report.mode},
              {"n_antennas", n},
              {"n_users", k},
              {"trials", report.trials},
              {"tolerance", report.tolerance},
              {"max_rel_dev", report.max_rel_dev},
              {"pass", report.pass},
              {"deviations", report.deviations},
              {"failures", report.failures}};
  out["counterexample_trial"] =
      report.counterexample_trial ? json(*report.counterexample_trial) : json();
  WriteJson(c.out, out);
  return report.pass ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equivariant precoder learning toolkit"};
  app.require_subcommand(1);

  Common gen_c;
  std::size_t gen_count = 0;
  auto* gen = app.add_subcommand("gen-data", "Generate a Rayleigh channel dataset");
  AddCommon(gen, gen_c, true);
  gen->add_option("--count", gen_count, "Number of samples")->required();

  Common wmmse_c;
  std::string wmmse_data;
  auto* wmmse = app.add_subcommand("wmmse", "Best-of-restarts WMMSE rates for a dataset");
  AddCommon(wmmse, wmmse_c, true);
  wmmse->add_option("--data", wmmse_data, "Dataset file (default: generated test set)");

  Common train_c;
  std::string train_method, train_data;
  std::size_t train_n = 0;
  auto* train = app.add_subcommand("train", "Train a network and write checkpoints");
  AddCommon(train, train_c, true);
  train->add_option("--method", train_method, "upnn, penn, edge-gnn or linear-ue")
      ->required();
  train->add_option("--data", train_data, "Training dataset file");
  train->add_option("--n-train", train_n, "Generated training samples");

  Common eval_c;
  std::vector<std::string> eval_models;
  std::string eval_data;
  auto* eval = app.add_subcommand("eval", "Normalized score of checkpoints");
  AddCommon(eval, eval_c, true);
  eval->add_option("--model", eval_models, "Checkpoint file(s)")->required();
  eval->add_option("--data", eval_data, "Test dataset file (default: generated)");

  Common users_c, antennas_c, curve_c, complexity_c;
  auto* users = app.add_subcommand("sweep-users", "Generalization over the number of users");
  AddCommon(users, users_c, true);
  auto* antennas =
      app.add_subcommand("sweep-antennas", "Generalization over the number of antennas");
  AddCommon(antennas, antennas_c, true);
  auto* curve = app.add_subcommand("sample-curve", "Score versus training-set size");
  AddCommon(curve, curve_c, true);
  auto* complexity = app.add_subcommand("complexity", "Parameter counts and timings");
  AddCommon(complexity, complexity_c, true);

  Common check_c;
  std::string check_model, check_mode = "ue-pe";
  std::size_t check_trials = 100;
  double check_tol = 1e-8;
  bool check_raw = false;
  auto* check = app.add_subcommand("check-equivariance",
                                   "Randomized equivariance check of a checkpoint");
  AddCommon(check, check_c, false);
  check->add_option("--model", check_model, "Checkpoint file")->required();
  check->add_option("--mode", check_mode, "ue-pe, 2d-pe or row-local")
      ->check(CLI::IsMember({"ue-pe", "2d-pe", "row-local"}));
  check->add_option("--trials", check_trials, "Number of random trials");
  check->add_option("--tol", check_tol, "Relative deviation tolerance");
  check->add_flag("--pre-normalization", check_raw,
                  "Check the network output before power normalization");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*gen) return RunGenData(gen_c, gen_count);
    if (*wmmse) return RunWmmse(wmmse_c, wmmse_data);
    if (*train) return RunTrain(train_c, train_method, train_data, train_n);
    if (*eval) return RunEval(eval_c, eval_models, eval_data);
    if (*check) return RunCheck(check_c, check_model, check_mode, check_trials, check_tol,
                                check_raw);
    if (*users) {
      const auto exp = eqpd::ExperimentConfig::FromConfig(Resolve(users_c));
      return FinishCells(eqpd::RunUserSweep(exp), users_c.out);
    }
    if (*antennas) {
      const auto exp = eqpd::ExperimentConfig::FromConfig(Resolve(antennas_c));
      return FinishCells(eqpd::RunAntennaSweep(exp), antennas_c.out);
    }
    if (*curve) {
      const auto exp = eqpd::ExperimentConfig::FromConfig(Resolve(curve_c));
      return FinishCells(eqpd::RunSampleEfficiency(exp), curve_c.out);
    }
    if (*complexity) {
      const auto exp = eqpd::ExperimentConfig::FromConfig(Resolve(complexity_c));
      const std::vector<eqpd::CellReport> cells = eqpd::RunSampleEfficiency(exp);
      const std::vector<eqpd::ComplexityRow> rows = eqpd::RunComplexityTable(exp, cells);
      return FinishCells(cells, complexity_c.out, rows);
    }
  } catch (const eqpd::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    const bool usage = e.code() == eqpd::ErrorCode::kConfiguration ||
                       e.code() == eqpd::ErrorCode::kInvalidArgument;
    return usage ? kUsage : kFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailed;
  }
  return kUsage;
}
