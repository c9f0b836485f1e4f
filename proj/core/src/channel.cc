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

#include "eqpd/channel.h"

#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include "eqpd/binary_io.h"
#include "eqpd/error.h"

namespace eqpd {

namespace binary {

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::kIo, "read failed: " + path);
  return bytes;
}

void WriteFile(const std::string& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.close();
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path);
}

}  // namespace binary

namespace {
constexpr char kMagic[4] = {'E', 'Q', 'P', 'D'};
}  // namespace

double ScenarioConfig::p_max() const {
  return noise_power * std::pow(10.0, snr_db / 10.0);
}

double ScenarioConfig::NoiseFor(std::size_t user) const {
  return user_noise.empty() ? noise_power : user_noise.at(user);
}

void ScenarioConfig::Validate() const {
  if (n_antennas == 0 || n_users == 0) {
    throw Error(ErrorCode::kInvalidDimension, "scenario needs N >= 1 and K >= 1");
  }
  if (!(noise_power > 0.0) || !std::isfinite(snr_db)) {
    throw Error(ErrorCode::kInvalidArgument, "noise power must be positive");
  }
  if (!user_noise.empty()) {
    if (user_noise.size() != n_users) {
      throw Error(ErrorCode::kInvalidArgument, "per-user noise needs K entries");
    }
    for (double v : user_noise) {
      if (!(v > 0.0)) {
        throw Error(ErrorCode::kInvalidArgument, "noise power must be positive");
      }
    }
  }
}

ScenarioConfig MakeScenario(std::size_t n_antennas, std::size_t n_users,
                            double snr_db) {
  ScenarioConfig config;
  config.n_antennas = n_antennas;
  config.n_users = n_users;
  config.snr_db = snr_db;
  config.noise_power = 1.0;
  config.Validate();
  return config;
}

KeyedConfig ScenarioToConfig(const ScenarioConfig& config, const std::string& prefix) {
  KeyedConfig out;
  out.Set(prefix + "n_antennas", std::to_string(config.n_antennas));
  out.Set(prefix + "n_users", std::to_string(config.n_users));
  out.Set(prefix + "snr_db", FormatDouble(config.snr_db));
  out.Set(prefix + "noise_power", FormatDouble(config.noise_power));
  if (!config.user_noise.empty()) {
    std::string list;
    for (double v : config.user_noise) {
      if (!list.empty()) list += ' ';
      list += FormatDouble(v);
    }
    out.Set(prefix + "user_noise", list);
  }
  return out;
}

ScenarioConfig ScenarioFromConfig(const KeyedConfig& config,
                                  const ScenarioConfig& defaults,
                                  const std::string& prefix) {
  ScenarioConfig out = defaults;
  out.n_antennas = config.GetUint(prefix + "n_antennas", defaults.n_antennas);
  out.n_users = config.GetUint(prefix + "n_users", defaults.n_users);
  out.snr_db = config.GetDouble(prefix + "snr_db", defaults.snr_db);
  out.noise_power = config.GetDouble(prefix + "noise_power", defaults.noise_power);
  if (config.Has(prefix + "user_noise")) {
    out.user_noise.clear();
    for (const std::string& item : config.GetStringList(prefix + "user_noise", {})) {
      KeyedConfig one;
      one.Set("v", item);
      out.user_noise.push_back(one.GetDouble("v", 0.0));
    }
  }
  out.Validate();
  return out;
}

Dataset Dataset::Prefix(std::size_t count) const {
  if (count > samples.size()) {
    throw Error(ErrorCode::kConfiguration,
                "requested " + std::to_string(count) + " samples from a dataset of " +
                    std::to_string(samples.size()));
  }
  Dataset out;
  out.config = config;
  out.seed = seed;
  out.samples.assign(samples.begin(), samples.begin() + count);
  return out;
}

Dataset GenerateRayleigh(const ScenarioConfig& config, std::size_t count,
                         std::uint64_t seed) {
  config.Validate();
  if (count == 0) throw Error(ErrorCode::kEmptyDataset, "sample count is zero");
  Dataset out;
  out.config = config;
  out.seed = seed;
  out.samples.reserve(count);
  RandomSource rng(seed);
  for (std::size_t s = 0; s < count; ++s) {
    out.samples.push_back(RandomGaussian(config.n_antennas, config.n_users, rng));
  }
  return out;
}

void SaveDataset(const Dataset& dataset, const std::filesystem::path& path) {
  const ScenarioConfig& c = dataset.config;
  std::string bytes;
  bytes.reserve(kDatasetHeaderBytes +
                dataset.size() * c.n_antennas * c.n_users * 16);
  bytes.append(kMagic, 4);
  binary::PutU32(bytes, kDatasetVersion);
  binary::PutU64(bytes, c.n_antennas);
  binary::PutU64(bytes, c.n_users);
  binary::PutU64(bytes, dataset.size());
  binary::PutU64(bytes, dataset.seed);
  binary::PutF64(bytes, c.snr_db);
  binary::PutF64(bytes, c.noise_power);
  bytes.append(8, '\0');
  for (const ComplexMatrix& h : dataset.samples) {
    if (h.rows() != c.n_antennas || h.cols() != c.n_users) {
      throw Error(ErrorCode::kInvalidDimension, "sample shape differs from config");
    }
    for (const Complex& e : h.entries()) {
      binary::PutF64(bytes, e.real());
      binary::PutF64(bytes, e.imag());
    }
  }
  binary::WriteFile(path.string(), bytes);
}

Dataset LoadDataset(const std::filesystem::path& path) {
  const std::string bytes = binary::ReadFile(path.string());
  if (bytes.size() < kDatasetHeaderBytes) {
    throw Error(bytes.empty() ? ErrorCode::kFormat : ErrorCode::kCorruptFile,
                "dataset header truncated: " + path.string());
  }
  binary::Reader reader(bytes);
  if (reader.Take(4) != std::string_view(kMagic, 4)) {
    throw Error(ErrorCode::kFormat, "bad magic in " + path.string());
  }
  const std::uint32_t version = reader.U32();
  if (version != kDatasetVersion) {
    throw Error(ErrorCode::kFormat,
                "unsupported dataset version " + std::to_string(version));
  }
  Dataset out;
  out.config.n_antennas = reader.U64();
  out.config.n_users = reader.U64();
  const std::uint64_t count = reader.U64();
  out.seed = reader.U64();
  out.config.snr_db = reader.F64();
  out.config.noise_power = reader.F64();
  reader.Take(8);
  out.config.Validate();

  const std::uint64_t per_sample = out.config.n_antennas * out.config.n_users;
  if (count == 0 || reader.remaining() / 16 / per_sample != count ||
      reader.remaining() != count * per_sample * 16) {
    throw Error(ErrorCode::kCorruptFile,
                "payload size does not match header dimensions");
  }
  out.samples.reserve(count);
  for (std::uint64_t s = 0; s < count; ++s) {
    ComplexMatrix h(out.config.n_antennas, out.config.n_users);
    for (Complex& e : h.entries()) {
      const double re = reader.F64();
      const double im = reader.F64();
      e = {re, im};
    }
    out.samples.push_back(std::move(h));
  }
  return out;
}

}  // namespace eqpd
