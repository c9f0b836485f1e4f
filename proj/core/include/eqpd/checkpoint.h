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

#ifndef EQPD_CHECKPOINT_H_
#define EQPD_CHECKPOINT_H_

#include <cstdint>
#include <filesystem>

#include "eqpd/channel.h"
#include "eqpd/keyed_config.h"
#include "eqpd/network.h"
#include "eqpd/training.h"

namespace eqpd {

struct Checkpoint {
  NetworkSpec spec;
  NetworkParams params;
  ScenarioConfig scenario;  // training scenario
  TrainConfig train;        // echo of the configuration that produced it
};

// Binary layout (little-endian):
//   char[4] "EQPC", u32 version, u64 header length, header bytes (keyed text
//   holding the network spec, parameter layout, scenario and training
//   config), u64 real-scalar count, f64 values in Flatten() order.
inline constexpr std::uint32_t kCheckpointVersion = 1;

void SaveCheckpoint(const Checkpoint& checkpoint, const std::filesystem::path& path);
Checkpoint LoadCheckpoint(const std::filesystem::path& path);

}  // namespace eqpd

#endif  // EQPD_CHECKPOINT_H_
