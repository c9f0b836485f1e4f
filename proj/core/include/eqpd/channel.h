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

#ifndef EQPD_CHANNEL_H_
#define EQPD_CHANNEL_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "eqpd/keyed_config.h"
#include "eqpd/numerics.h"

namespace eqpd {

// Downlink MU-MISO scenario: N transmit antennas, K single-antenna users.
struct ScenarioConfig {
  std::size_t n_antennas = 8;
  std::size_t n_users = 4;
  double snr_db = 10.0;
  double noise_power = 1.0;
  // Optional per-user noise powers; empty means every user sees noise_power.
  std::vector<double> user_noise;

  // Transmit budget: noise_power * 10^(snr_db / 10).
  double p_max() const;
  double NoiseFor(std::size_t user) const;
  // Throws kInvalidArgument on N or K of zero or non-positive powers.
  void Validate() const;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

ScenarioConfig MakeScenario(std::size_t n_antennas, std::size_t n_users,
                            double snr_db = 10.0);

// Keys <prefix>n_antennas, n_users, snr_db, noise_power and, when set,
// user_noise (space-separated).
KeyedConfig ScenarioToConfig(const ScenarioConfig& config,
                             const std::string& prefix = "scenario.");
ScenarioConfig ScenarioFromConfig(const KeyedConfig& config,
                                  const ScenarioConfig& defaults,
                                  const std::string& prefix = "scenario.");

struct Dataset {
  ScenarioConfig config;
  std::uint64_t seed = 0;
  // Channel matrices H, each n_antennas x n_users.
  std::vector<ComplexMatrix> samples;

  std::size_t size() const { return samples.size(); }
  // First `count` samples, same config and seed.
  Dataset Prefix(std::size_t count) const;
};

// i.i.d. Rayleigh fading: every entry of every H is CN(0, 1). Samples are
// drawn sequentially from one RandomSource(seed) in row-major order.
Dataset GenerateRayleigh(const ScenarioConfig& config, std::size_t count,
                         std::uint64_t seed);

// Binary layout (all fields little-endian):
//   0  char[4]  magic "EQPD"
//   4  u32      version (1)
//   8  u64      N
//  16  u64      K
//  24  u64      sample count
//  32  u64      seed
//  40  f64      snr_db
//  48  f64      noise_power
//  56  u8[8]    reserved, zero
//  64  f64 pairs (real, imag), row-major within a sample, sample-major.
inline constexpr std::uint32_t kDatasetVersion = 1;
inline constexpr std::size_t kDatasetHeaderBytes = 64;

void SaveDataset(const Dataset& dataset, const std::filesystem::path& path);
Dataset LoadDataset(const std::filesystem::path& path);

}  // namespace eqpd

#endif  // EQPD_CHANNEL_H_
