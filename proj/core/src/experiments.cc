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

#include "eqpd/experiments.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <utility>

#include <nlohmann/json.hpp>

#include "eqpd/binary_io.h"
#include "eqpd/error.h"
#include "eqpd/objective.h"
#include "eqpd/parallel.h"

namespace eqpd {
namespace {

using Clock = std::chrono::steady_clock;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr char kCacheMagic[4] = {'E', 'Q', 'P', 'W'};
constexpr std::uint32_t kCacheVersion = 1;

// Stream tags for the seeds derived from ExperimentConfig::seed.
constexpr std::uint64_t kTrainTag = 1;
constexpr std::uint64_t kTestTag = 2;
constexpr std::uint64_t kWmmseTag = 3;
constexpr std::uint64_t kTimingTag = 4;

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::uint64_t ScenarioSeed(std::uint64_t seed, std::uint64_t tag,
                           const ScenarioConfig& scenario) {
  return MixSeed(MixSeed(MixSeed(seed, tag), scenario.n_antennas), scenario.n_users);
}

std::uint64_t Fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ull) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t DatasetChecksum(const Dataset& data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  std::string bytes;
  for (const ComplexMatrix& m : data.samples) {
    bytes.clear();
    for (const Complex& e : m.entries()) {
      binary::PutF64(bytes, e.real());
      binary::PutF64(bytes, e.imag());
    }
    h = Fnv1a(bytes, h);
  }
  return h;
}

std::string CacheKey(const Dataset& test, const WmmseConfig& opts, std::uint64_t seed) {
  KeyedConfig key = ScenarioToConfig(test.config);
  key.Set("count", std::to_string(test.size()));
  key.Set("data_seed", std::to_string(test.seed));
  key.Set("data_checksum", std::to_string(DatasetChecksum(test)));
  key.Set("wmmse.seed", std::to_string(seed));
  key.Set("wmmse.max_iters", std::to_string(opts.max_iters));
  key.Set("wmmse.rel_tol", FormatDouble(opts.rel_tol));
  key.Set("wmmse.restarts", std::to_string(opts.restarts));
  key.Set("wmmse.bisect_tol", FormatDouble(opts.bisect_tol));
  key.Set("wmmse.bisect_max_iters", std::to_string(opts.bisect_max_iters));
  return key.ToText();
}

std::optional<std::vector<double>> ReadCache(const std::filesystem::path& path,
                                             const std::string& key,
                                             std::size_t count) {
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) return std::nullopt;
  try {
    const std::string bytes = binary::ReadFile(path.string());
    binary::Reader reader(bytes);
    if (reader.Take(4) != std::string_view(kCacheMagic, 4)) return std::nullopt;
    if (reader.U32() != kCacheVersion) return std::nullopt;
    if (reader.Take(reader.U64()) != key) return std::nullopt;
    if (reader.U64() != count) return std::nullopt;
    std::vector<double> rates(count);
    for (double& r : rates) r = reader.F64();
    if (reader.remaining() != 0) return std::nullopt;
    return rates;
  } catch (const Error&) {
    return std::nullopt;  // unreadable cache entries are recomputed
  }
}

void WriteCache(const std::filesystem::path& path, const std::string& key,
                std::span<const double> rates) {
  std::string bytes(kCacheMagic, 4);
  binary::PutU32(bytes, kCacheVersion);
  binary::PutU64(bytes, key.size());
  bytes += key;
  binary::PutU64(bytes, rates.size());
  for (double r : rates) binary::PutF64(bytes, r);
  std::filesystem::create_directories(path.parent_path());
  // Write then rename so a concurrent reader never sees a partial file.
  const std::filesystem::path tmp = path.string() + ".tmp";
  binary::WriteFile(tmp.string(), bytes);
  std::filesystem::rename(tmp, path);
}

KeyedConfig StripPrefix(const KeyedConfig& config, const std::string& prefix) {
  KeyedConfig out;
  for (const auto& [key, value] : config.entries()) {
    if (key.starts_with(prefix)) out.Set(key.substr(prefix.size()), value);
  }
  return out;
}

void Summarize(CellReport& cell) {
  std::vector<double> ok;
  for (const SeedResult& s : cell.seeds) {
    if (s.status == "ok") ok.push_back(s.score);
  }
  if (ok.empty()) {
    cell.mean_score = kNaN;
    cell.std_score = kNaN;
    return;
  }
  const double mean = std::accumulate(ok.begin(), ok.end(), 0.0) / ok.size();
  double var = 0.0;
  for (double v : ok) var += (v - mean) * (v - mean);
  cell.mean_score = mean;
  cell.std_score = std::sqrt(var / ok.size());
}

SeedResult FailedSeed(std::uint64_t seed, const Error& e) {
  SeedResult r;
  r.seed = seed;
  r.score = kNaN;
  r.mean_rate = kNaN;
  r.reference_mean_rate = kNaN;
  r.status = std::string(ErrorCodeName(e.code()));
  r.message = e.what();
  return r;
}

ScenarioConfig WithShape(ScenarioConfig scenario, std::size_t n_antennas,
                         std::size_t n_users) {
  scenario.n_antennas = n_antennas;
  scenario.n_users = n_users;
  scenario.user_noise.clear();
  scenario.Validate();
  return scenario;
}

std::vector<TrainedModel> TrainAll(const ExperimentConfig& config,
                                   const ScenarioConfig& scenario) {
  const Dataset train = TrainPool(config, scenario, config.n_train);
  std::vector<TrainedModel> models;
  for (Method m : config.methods) {
    if (LearnedKind(m)) {
      models.push_back(TrainModel(config, m, train));
    } else {
      TrainedModel solver;
      solver.method = m;
      solver.train_scenario = scenario;
      models.push_back(std::move(solver));
    }
  }
  return models;
}

std::vector<CellReport> Sweep(const ExperimentConfig& config,
                              std::span<const TrainedModel> models,
                              const std::vector<ScenarioConfig>& tests,
                              const std::string& figure) {
  std::vector<CellReport> cells;
  for (const ScenarioConfig& scenario : tests) {
    const Dataset test = TestSet(config, scenario);
    const std::vector<double> reference = WmmseReferenceRates(
        test, config.wmmse, MixSeed(config.seed, kWmmseTag), config.cache_dir);
    for (const TrainedModel& model : models) {
      cells.push_back(EvaluateCell(config, model, test, reference, figure));
    }
  }
  return cells;
}

std::string Csv(double v) { return FormatDouble(v); }

std::string ScenarioColumns(const CellReport& c) {
  return std::to_string(c.train_scenario.n_antennas) + "," +
         std::to_string(c.train_scenario.n_users) + "," +
         std::to_string(c.test_scenario.n_antennas) + "," +
         std::to_string(c.test_scenario.n_users) + "," + Csv(c.test_scenario.snr_db);
}

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  out << text;
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

nlohmann::json ScenarioJson(const ScenarioConfig& s) {
  return {{"n_antennas", s.n_antennas}, {"n_users", s.n_users}, {"snr_db", s.snr_db}};
}

}  // namespace

std::string_view MethodName(Method method) {
  switch (method) {
    case Method::kUpnn: return "upnn";
    case Method::kPenn: return "penn";
    case Method::kEdgeGnn: return "edge-gnn";
    case Method::kLinearUe: return "linear-ue";
    case Method::kWmmse: return "wmmse";
    case Method::kRzf: return "rzf";
  }
  return "?";
}

Method ParseMethod(std::string_view name) {
  for (Method m : {Method::kUpnn, Method::kPenn, Method::kEdgeGnn, Method::kLinearUe,
                   Method::kWmmse, Method::kRzf}) {
    if (MethodName(m) == name) return m;
  }
  throw Error(ErrorCode::kConfiguration, "unknown method '" + std::string(name) + "'");
}

std::optional<LayerKind> LearnedKind(Method method) {
  switch (method) {
    case Method::kUpnn: return LayerKind::kUpnn;
    case Method::kPenn: return LayerKind::kPenn;
    case Method::kEdgeGnn: return LayerKind::kEdgeGnn;
    case Method::kLinearUe: return LayerKind::kLinearUe;
    case Method::kWmmse:
    case Method::kRzf: return std::nullopt;
  }
  return std::nullopt;
}

void ExperimentConfig::Validate() const {
  scenario.Validate();
  wmmse.Validate();
  if (methods.empty()) throw Error(ErrorCode::kConfiguration, "no methods declared");
  if (sample_grid.empty()) throw Error(ErrorCode::kConfiguration, "empty sample grid");
  for (std::size_t n : sample_grid) {
    if (n == 0) throw Error(ErrorCode::kConfiguration, "sample grid entry of 0");
    if (n > train_pool) {
      throw Error(ErrorCode::kConfiguration,
                  "sample grid entry " + std::to_string(n) +
                      " exceeds the training pool of " + std::to_string(train_pool));
    }
  }
  if (n_train == 0 || n_test == 0) {
    throw Error(ErrorCode::kConfiguration, "n_train and n_test must be positive");
  }
  if (rzf_points < 2) throw Error(ErrorCode::kConfiguration, "rzf_points must be >= 2");
  for (Method m : methods) {
    if (LearnedKind(m)) {
      SpecFor(m).Validate();
      TrainFor(m).Validate();
    }
  }
}

NetworkSpec ExperimentConfig::SpecFor(Method method) const {
  const std::optional<LayerKind> kind = LearnedKind(method);
  if (!kind) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(MethodName(method)) + " has no network");
  }
  const KeyedConfig own = StripPrefix(overrides, std::string(MethodName(method)) + ".");
  NetworkSpec spec = own.Has("layers") ? NetworkSpec::FromConfig(own) : DefaultSpec(*kind);
  for (const LayerSpec& l : spec.layers) {
    if (l.kind != *kind) {
      throw Error(ErrorCode::kConfiguration,
                  std::string(MethodName(method)) + " spec uses another layer kind");
    }
  }
  for (const char* key : {"upnn_gram", "scale_input"}) {
    const KeyedConfig& source = own.Has(key) ? own : overrides;
    if (!source.Has(key)) continue;
    if (std::string_view(key) == "upnn_gram") {
      spec.upnn_gram = ParseGramOrder(source.GetString(key, "standard"));
    } else {
      spec.scale_input = source.GetBool(key, true);
    }
  }
  return spec;
}

TrainConfig ExperimentConfig::TrainFor(Method method) const {
  const std::optional<LayerKind> kind = LearnedKind(method);
  if (!kind) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(MethodName(method)) + " is not trained");
  }
  TrainConfig defaults = DefaultTrainConfig(*kind);
  defaults.seed = seed;
  const TrainConfig shared = TrainConfig::FromConfig(overrides, defaults);
  return TrainConfig::FromConfig(
      StripPrefix(overrides, std::string(MethodName(method)) + "."), shared);
}

ExperimentConfig ExperimentConfig::FromConfig(const KeyedConfig& c) {
  ExperimentConfig out;
  out.scenario = ScenarioFromConfig(c, MakeScenario(8, 4, 10.0));
  if (c.Has("methods")) {
    out.methods.clear();
    for (const std::string& name : c.GetStringList("methods", {})) {
      out.methods.push_back(ParseMethod(name));
    }
  }
  out.sample_grid = c.GetSizeList("sample_grid", out.sample_grid);
  const std::size_t largest = *std::max_element(out.sample_grid.begin(),
                                                out.sample_grid.end());
  out.train_pool = c.GetUint("train_pool", largest);
  out.n_train = c.GetUint("n_train", out.n_train);
  out.n_test = c.GetUint("n_test", out.n_test);
  out.test_users = c.GetSizeList("test_users", out.test_users);
  out.test_antennas = c.GetSizeList("test_antennas", out.test_antennas);
  out.seed = c.GetUint("seed", out.seed);
  out.wmmse.max_iters = c.GetUint("wmmse.max_iters", out.wmmse.max_iters);
  out.wmmse.rel_tol = c.GetDouble("wmmse.rel_tol", out.wmmse.rel_tol);
  out.wmmse.restarts = c.GetUint("wmmse.restarts", out.wmmse.restarts);
  out.wmmse.bisect_tol = c.GetDouble("wmmse.bisect_tol", out.wmmse.bisect_tol);
  out.wmmse.bisect_max_iters =
      c.GetUint("wmmse.bisect_max_iters", out.wmmse.bisect_max_iters);
  out.rzf_points = c.GetUint("rzf_points", out.rzf_points);
  out.target_score = c.GetDouble("target_score", out.target_score);
  out.timing_samples = c.GetUint("timing_samples", out.timing_samples);
  out.cache_dir = c.GetString("cache_dir", "");
  out.overrides = c;
  return out;
}

KeyedConfig ExperimentConfig::ToConfig() const {
  KeyedConfig out = overrides;
  out.Merge(ScenarioToConfig(scenario));
  auto join = [](const std::vector<std::size_t>& v) {
    std::string s;
    for (std::size_t x : v) s += (s.empty() ? "" : ",") + std::to_string(x);
    return s;
  };
  std::string names;
  for (Method m : methods) names += (names.empty() ? "" : ",") + std::string(MethodName(m));
  out.Set("methods", names);
  out.Set("sample_grid", join(sample_grid));
  out.Set("train_pool", std::to_string(train_pool));
  out.Set("n_train", std::to_string(n_train));
  out.Set("n_test", std::to_string(n_test));
  out.Set("test_users", join(test_users));
  out.Set("test_antennas", join(test_antennas));
  out.Set("seed", std::to_string(seed));
  out.Set("wmmse.max_iters", std::to_string(wmmse.max_iters));
  out.Set("wmmse.rel_tol", FormatDouble(wmmse.rel_tol));
  out.Set("wmmse.restarts", std::to_string(wmmse.restarts));
  out.Set("wmmse.bisect_tol", FormatDouble(wmmse.bisect_tol));
  out.Set("wmmse.bisect_max_iters", std::to_string(wmmse.bisect_max_iters));
  out.Set("rzf_points", std::to_string(rzf_points));
  out.Set("target_score", FormatDouble(target_score));
  out.Set("timing_samples", std::to_string(timing_samples));
  out.Set("cache_dir", cache_dir.string());
  return out;
}

Dataset TrainPool(const ExperimentConfig& config, const ScenarioConfig& scenario,
                  std::size_t count) {
  return GenerateRayleigh(scenario, count, ScenarioSeed(config.seed, kTrainTag, scenario));
}

Dataset TestSet(const ExperimentConfig& config, const ScenarioConfig& scenario) {
  return GenerateRayleigh(scenario, config.n_test,
                          ScenarioSeed(config.seed, kTestTag, scenario));
}

std::vector<double> WmmseReferenceRates(const Dataset& test, const WmmseConfig& opts,
                                        std::uint64_t seed,
                                        const std::filesystem::path& cache_dir) {
  if (test.samples.empty()) throw Error(ErrorCode::kEmptyDataset, "empty test set");
  opts.Validate();
  std::string key;
  std::filesystem::path path;
  if (!cache_dir.empty()) {
    key = CacheKey(test, opts, seed);
    char name[40];
    std::snprintf(name, sizeof(name), "wmmse-%016llx.bin",
                  static_cast<unsigned long long>(Fnv1a(key)));
    path = cache_dir / name;
    if (auto cached = ReadCache(path, key, test.size())) return *std::move(cached);
  }
  std::vector<double> rates(test.size());
  ParallelFor(test.size(), [&](std::size_t i) {
    RandomSource rng(MixSeed(seed, i));
    rates[i] = WmmseBestOf(test.samples[i], test.config, opts, rng).sum_rate;
  });
  if (!cache_dir.empty()) {
    try {
      WriteCache(path, key, rates);
    } catch (const std::exception& e) {
      throw Error(ErrorCode::kIo, "cannot write WMMSE cache " + path.string() + ": " +
                                      e.what());
    }
  }
  return rates;
}

bool CellReport::ok() const {
  return !seeds.empty() && std::all_of(seeds.begin(), seeds.end(), [](const SeedResult& s) {
    return s.status == "ok";
  });
}

TrainedModel TrainModel(const ExperimentConfig& config, Method method,
                        const Dataset& train) {
  TrainedModel model;
  model.method = method;
  model.spec = config.SpecFor(method);
  model.train_scenario = train.config;
  model.n_train_samples = train.size();
  const TrainConfig base = config.TrainFor(method);
  for (std::size_t s = 0; s < base.n_seeds; ++s) {
    TrainConfig one = base;
    one.seed = base.seed + s;
    one.n_seeds = 1;
    try {
      model.runs.push_back(Train(train, model.spec, one));
    } catch (const Error& e) {
      model.failures.push_back(FailedSeed(one.seed, e));
    }
  }
  return model;
}

CellReport EvaluateCell(const ExperimentConfig& config, const TrainedModel& model,
                        const Dataset& test, std::span<const double> reference,
                        std::string figure) {
  const auto start = Clock::now();
  CellReport cell;
  cell.figure = std::move(figure);
  cell.method = model.method;
  cell.train_scenario = model.train_scenario;
  cell.test_scenario = test.config;
  cell.n_train_samples = model.n_train_samples;
  const double reference_mean =
      std::accumulate(reference.begin(), reference.end(), 0.0) / reference.size();

  if (LearnedKind(model.method)) {
    cell.parameter_count = CountParameters(model.spec);
    for (const TrainReport& run : model.runs) {
      try {
        const EvalReport eval =
            Evaluate(Unflatten(model.spec, run.params), model.spec, test, reference);
        cell.seeds.push_back({run.seed, eval.normalized_score, eval.mean_rate,
                              eval.reference_mean_rate, run.wall_seconds, "ok", ""});
      } catch (const Error& e) {
        SeedResult failed = FailedSeed(run.seed, e);
        failed.train_seconds = run.wall_seconds;
        cell.seeds.push_back(std::move(failed));
      }
    }
    cell.seeds.insert(cell.seeds.end(), model.failures.begin(), model.failures.end());
    std::sort(cell.seeds.begin(), cell.seeds.end(),
              [](const SeedResult& a, const SeedResult& b) { return a.seed < b.seed; });
  } else if (model.method == Method::kWmmse) {
    // The reference is the best-of-restarts WMMSE rate itself.
    cell.seeds.push_back({config.seed, 1.0, reference_mean, reference_mean, 0.0, "ok", ""});
  } else {
    try {
      std::vector<double> rates(test.size());
      ParallelFor(test.size(), [&](std::size_t i) {
        rates[i] = RzfSweep(test.samples[i], test.config, config.rzf_points).best_rate;
      });
      const double mean = std::accumulate(rates.begin(), rates.end(), 0.0) / rates.size();
      cell.seeds.push_back(
          {config.seed, mean / reference_mean, mean, reference_mean, 0.0, "ok", ""});
    } catch (const Error& e) {
      cell.seeds.push_back(FailedSeed(config.seed, e));
    }
  }
  Summarize(cell);
  cell.wall_seconds = Seconds(start);
  return cell;
}

std::vector<CellReport> RunSampleEfficiency(const ExperimentConfig& config) {
  config.Validate();
  const std::size_t largest = *std::max_element(config.sample_grid.begin(),
                                                config.sample_grid.end());
  const Dataset pool = TrainPool(config, config.scenario, largest);
  const Dataset test = TestSet(config, config.scenario);
  const std::vector<double> reference = WmmseReferenceRates(
      test, config.wmmse, MixSeed(config.seed, kWmmseTag), config.cache_dir);

  std::vector<CellReport> cells;
  for (Method m : config.methods) {
    if (LearnedKind(m)) {
      for (std::size_t n : config.sample_grid) {
        const TrainedModel model = TrainModel(config, m, pool.Prefix(n));
        cells.push_back(EvaluateCell(config, model, test, reference, "sample-efficiency"));
      }
    } else {
      TrainedModel solver;
      solver.method = m;
      solver.train_scenario = config.scenario;
      const CellReport once =
          EvaluateCell(config, solver, test, reference, "sample-efficiency");
      for (std::size_t n : config.sample_grid) {
        CellReport cell = once;
        cell.n_train_samples = n;
        cells.push_back(std::move(cell));
      }
    }
  }
  return cells;
}

std::vector<CellReport> RunUserSweep(const ExperimentConfig& config) {
  config.Validate();
  const std::vector<TrainedModel> models = TrainAll(config, config.scenario);
  return RunUserSweep(config, models);
}

std::vector<CellReport> RunUserSweep(const ExperimentConfig& config,
                                     std::span<const TrainedModel> models) {
  if (models.empty()) throw Error(ErrorCode::kInvalidArgument, "no models to sweep");
  std::vector<ScenarioConfig> tests;
  for (std::size_t k : config.test_users) {
    if (k < 1) throw Error(ErrorCode::kInvalidArgument, "test K must be >= 1");
    tests.push_back(WithShape(config.scenario, config.scenario.n_antennas, k));
  }
  return Sweep(config, models, tests, "user-sweep");
}

std::vector<CellReport> RunAntennaSweep(const ExperimentConfig& config) {
  config.Validate();
  const std::vector<TrainedModel> models = TrainAll(config, config.scenario);
  return RunAntennaSweep(config, models);
}

std::vector<CellReport> RunAntennaSweep(const ExperimentConfig& config,
                                        std::span<const TrainedModel> models) {
  if (models.empty()) throw Error(ErrorCode::kInvalidArgument, "no models to sweep");
  std::vector<ScenarioConfig> tests;
  for (std::size_t n : config.test_antennas) {
    if (n < 1) throw Error(ErrorCode::kInvalidArgument, "test N must be >= 1");
    tests.push_back(WithShape(config.scenario, n, config.scenario.n_users));
  }
  return Sweep(config, models, tests, "antenna-sweep");
}

std::vector<ComplexityRow> RunComplexityTable(
    const ExperimentConfig& config, std::optional<std::span<const CellReport>> curve) {
  std::vector<CellReport> owned;
  if (!curve) {
    owned = RunSampleEfficiency(config);
    curve = std::span<const CellReport>(owned);
  }
  const std::size_t largest = *std::max_element(config.sample_grid.begin(),
                                                config.sample_grid.end());
  ScenarioConfig timing_scenario = config.scenario;
  ExperimentConfig timing_config = config;
  timing_config.n_test = config.timing_samples;
  const Dataset timing = TestSet(timing_config, timing_scenario);

  std::vector<ComplexityRow> rows;
  for (Method m : config.methods) {
    ComplexityRow row;
    row.method = m;
    std::vector<const CellReport*> cells;
    for (const CellReport& c : *curve) {
      if (c.method == m && c.figure == "sample-efficiency") cells.push_back(&c);
    }
    std::sort(cells.begin(), cells.end(), [](const CellReport* a, const CellReport* b) {
      return a->n_train_samples < b->n_train_samples;
    });
    for (const CellReport* c : cells) {
      if (c->mean_score >= config.target_score) {
        row.min_samples = c->n_train_samples;
        break;
      }
    }
    row.timed_samples = row.min_samples.value_or(largest);
    if (const std::optional<LayerKind> kind = LearnedKind(m)) {
      const NetworkSpec spec = config.SpecFor(m);
      row.parameter_count = CountParameters(spec);
      for (const CellReport* c : cells) {
        if (c->n_train_samples != row.timed_samples) continue;
        double sum = 0.0;
        for (const SeedResult& s : c->seeds) sum += s.train_seconds;
        if (!c->seeds.empty()) row.train_seconds = sum / c->seeds.size();
      }
      RandomSource rng(MixSeed(config.seed, kTimingTag));
      const NetworkParams params = InitializeParams(spec, rng);
      const double p_max = timing.config.p_max();
      const auto start = Clock::now();
      for (const ComplexMatrix& h : timing.samples) {
        const ComplexMatrix v = NetworkForward(h, spec, params, p_max);
        if (!AllFinite(v)) throw Error(ErrorCode::kNonFinite, "non-finite output");
      }
      row.inference_seconds = Seconds(start) / timing.size();
    } else {
      RandomSource rng(MixSeed(config.seed, kTimingTag));
      const auto start = Clock::now();
      for (const ComplexMatrix& h : timing.samples) {
        if (m == Method::kWmmse) {
          WmmseBestOf(h, timing.config, config.wmmse, rng);
        } else {
          RzfSweep(h, timing.config, config.rzf_points);
        }
      }
      row.inference_seconds = Seconds(start) / timing.size();
    }
    rows.push_back(row);
  }
  return rows;
}

void EmitPlotData(std::span<const CellReport> reports, const std::filesystem::path& dir,
                  std::span<const ComplexityRow> complexity) {
  if (reports.empty() && complexity.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no reports to emit");
  }
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + dir.string() + ": " + ec.message());

  std::vector<std::string> figures;
  for (const CellReport& c : reports) {
    if (std::find(figures.begin(), figures.end(), c.figure) == figures.end()) {
      figures.push_back(c.figure);
    }
  }
  nlohmann::json summary = nlohmann::json::object();
  for (const std::string& figure : figures) {
    std::string rows = std::string(kSeedCsvHeader) + "\n";
    std::string agg = std::string(kSummaryCsvHeader) + "\n";
    nlohmann::json cells = nlohmann::json::array();
    for (const CellReport& c : reports) {
      if (c.figure != figure) continue;
      const std::string method(MethodName(c.method));
      const std::string prefix = figure + "," + method + "," + ScenarioColumns(c) + "," +
                                 std::to_string(c.n_train_samples) + ",";
      std::size_t n_ok = 0;
      nlohmann::json seeds = nlohmann::json::array();
      for (const SeedResult& s : c.seeds) {
        n_ok += s.status == "ok";
        rows += prefix + std::to_string(s.seed) + "," + Csv(s.score) + "," +
                Csv(s.mean_rate) + "," + Csv(s.reference_mean_rate) + "," +
                std::to_string(c.parameter_count) + "," + s.status + "\n";
        nlohmann::json js = {{"seed", s.seed},
                             {"score", s.score},
                             {"mean_rate", s.mean_rate},
                             {"reference_mean_rate", s.reference_mean_rate},
                             {"train_seconds", s.train_seconds},
                             {"status", s.status}};
        if (!s.message.empty()) js["message"] = s.message;
        seeds.push_back(std::move(js));
      }
      agg += prefix + std::to_string(c.seeds.size()) + "," + std::to_string(n_ok) + "," +
             Csv(c.mean_score) + "," + Csv(c.std_score) + "," +
             std::to_string(c.parameter_count) + "\n";
      cells.push_back({{"method", method},
                       {"train_scenario", ScenarioJson(c.train_scenario)},
                       {"test_scenario", ScenarioJson(c.test_scenario)},
                       {"n_train_samples", c.n_train_samples},
                       {"mean_score", c.mean_score},
                       {"std_score", c.std_score},
                       {"parameter_count", c.parameter_count},
                       {"wall_seconds", c.wall_seconds},
                       {"seeds", std::move(seeds)}});
    }
    WriteText(dir / (figure + ".csv"), rows);
    WriteText(dir / (figure + "_summary.csv"), agg);
    summary[figure] = std::move(cells);
  }
  if (!complexity.empty()) {
    std::string rows = std::string(kComplexityCsvHeader) + "\n";
    nlohmann::json table = nlohmann::json::array();
    for (const ComplexityRow& r : complexity) {
      const std::string method(MethodName(r.method));
      rows += method + "," + std::to_string(r.parameter_count) + "," +
              (r.min_samples ? std::to_string(*r.min_samples) : std::string()) + "," +
              std::to_string(r.timed_samples) + "," + Csv(r.train_seconds) + "," +
              Csv(r.inference_seconds) + "\n";
      nlohmann::json jr = {{"method", method},
                           {"parameter_count", r.parameter_count},
                           {"timed_samples", r.timed_samples},
                           {"train_seconds", r.train_seconds},
                           {"inference_seconds", r.inference_seconds}};
      jr["min_samples"] = r.min_samples ? nlohmann::json(*r.min_samples) : nlohmann::json();
      table.push_back(std::move(jr));
    }
    WriteText(dir / "complexity.csv", rows);
    summary["complexity"] = std::move(table);
  }
  WriteText(dir / "summary.json", summary.dump(2) + "\n");
}

}  // namespace eqpd
