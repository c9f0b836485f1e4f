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

#include "eqpd/checkpoint.h"

#include <string>
#include <system_error>

#include "eqpd/binary_io.h"
#include "eqpd/error.h"

namespace eqpd {
namespace {

constexpr char kMagic[4] = {'E', 'Q', 'P', 'C'};

}  // namespace

void SaveCheckpoint(const Checkpoint& checkpoint, const std::filesystem::path& path) {
  KeyedConfig header = checkpoint.spec.ToConfig();
  header.Merge(checkpoint.train.ToConfig());
  header.Merge(ScenarioToConfig(checkpoint.scenario));
  for (const ParamSlice& s : ParamLayout(checkpoint.spec)) {
    header.Set("layout." + std::to_string(s.layer) + "." + s.coefficient,
               std::to_string(s.offset) + " " + std::to_string(s.count));
  }
  const std::string text = header.ToText();
  const std::vector<double> values = Flatten(checkpoint.params);
  if (values.size() != CountParameters(checkpoint.spec)) {
    throw Error(ErrorCode::kInvalidArgument, "parameters do not match spec");
  }

  std::string bytes(kMagic, 4);
  binary::PutU32(bytes, kCheckpointVersion);
  binary::PutU64(bytes, text.size());
  bytes += text;
  binary::PutU64(bytes, values.size());
  for (double v : values) binary::PutF64(bytes, v);
  binary::WriteFile(path.string(), bytes);
}

Checkpoint LoadCheckpoint(const std::filesystem::path& path) {
  const std::string bytes = binary::ReadFile(path.string());
  if (bytes.empty()) throw Error(ErrorCode::kFormat, "empty checkpoint " + path.string());
  binary::Reader reader(bytes);
  if (reader.Take(4) != std::string_view(kMagic, 4)) {
    throw Error(ErrorCode::kFormat, "bad checkpoint magic in " + path.string());
  }
  const std::uint32_t version = reader.U32();
  if (version != kCheckpointVersion) {
    throw Error(ErrorCode::kFormat, "unsupported checkpoint version " +
                                        std::to_string(version));
  }
  const std::uint64_t text_size = reader.U64();
  const KeyedConfig header = KeyedConfig::Parse(reader.Take(text_size));
  Checkpoint out;
  out.spec = NetworkSpec::FromConfig(header);
  out.train = TrainConfig::FromConfig(header, TrainConfig{});
  out.scenario = ScenarioFromConfig(header, ScenarioConfig{});

  const std::uint64_t count = reader.U64();
  if (count != CountParameters(out.spec) || reader.remaining() != count * 8) {
    throw Error(ErrorCode::kCorruptFile, "parameter blob does not match spec");
  }
  std::vector<double> values(count);
  for (double& v : values) v = reader.F64();
  out.params = Unflatten(out.spec, values);
  return out;
}

}  // namespace eqpd
