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

#ifndef EQPD_KEYED_CONFIG_H_
#define EQPD_KEYED_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace eqpd {

// Flat `key = value` text configuration. Blank lines and lines starting
// with '#' are ignored; keys are case-sensitive and the last occurrence
// wins. Values keep interior whitespace.
// Shortest decimal form that parses back to the same double.
std::string FormatDouble(double value);

class KeyedConfig {
 public:
  static KeyedConfig Parse(std::string_view text);
  static KeyedConfig Load(const std::filesystem::path& path);

  bool Has(const std::string& key) const { return values_.count(key) != 0; }
  void Set(const std::string& key, std::string value);
  // Copies every entry of `other` over this one.
  void Merge(const KeyedConfig& other);

  std::optional<std::string> Get(const std::string& key) const;
  std::string GetString(const std::string& key, const std::string& fallback) const;
  double GetDouble(const std::string& key, double fallback) const;
  std::int64_t GetInt(const std::string& key, std::int64_t fallback) const;
  std::uint64_t GetUint(const std::string& key, std::uint64_t fallback) const;
  bool GetBool(const std::string& key, bool fallback) const;
  // Comma- or whitespace-separated list of unsigned integers.
  std::vector<std::size_t> GetSizeList(const std::string& key,
                                       std::vector<std::size_t> fallback) const;
  std::vector<std::string> GetStringList(const std::string& key,
                                         std::vector<std::string> fallback) const;

  // Lines in key order.
  std::string ToText() const;
  const std::map<std::string, std::string>& entries() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace eqpd

#endif  // EQPD_KEYED_CONFIG_H_
