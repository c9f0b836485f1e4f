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

#include "eqpd/keyed_config.h"

#include <charconv>
#include <sstream>

#include "eqpd/binary_io.h"
#include "eqpd/error.h"

namespace eqpd {
namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> SplitList(const std::string& value) {
  std::vector<std::string> out;
  std::string token;
  for (char ch : value) {
    if (ch == ',' || ch == ' ' || ch == '\t') {
      if (!token.empty()) out.push_back(std::move(token));
      token.clear();
    } else {
      token.push_back(ch);
    }
  }
  if (!token.empty()) out.push_back(std::move(token));
  return out;
}

[[noreturn]] void BadValue(const std::string& key, const std::string& value,
                           const char* type) {
  throw Error(ErrorCode::kConfiguration,
              "key '" + key + "' has value '" + value + "', expected " + type);
}

}  // namespace

std::string FormatDouble(double value) {
  char buf[32];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

KeyedConfig KeyedConfig::Parse(std::string_view text) {
  KeyedConfig out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    line = Trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kConfiguration,
                  "line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string_view key = Trim(line.substr(0, eq));
    if (key.empty()) {
      throw Error(ErrorCode::kConfiguration,
                  "line " + std::to_string(line_no) + ": empty key");
    }
    out.values_[std::string(key)] = std::string(Trim(line.substr(eq + 1)));
  }
  return out;
}

KeyedConfig KeyedConfig::Load(const std::filesystem::path& path) {
  return Parse(binary::ReadFile(path.string()));
}

void KeyedConfig::Set(const std::string& key, std::string value) {
  values_[key] = std::move(value);
}

void KeyedConfig::Merge(const KeyedConfig& other) {
  for (const auto& [k, v] : other.values_) values_[k] = v;
}

std::optional<std::string> KeyedConfig::Get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::string KeyedConfig::GetString(const std::string& key,
                                   const std::string& fallback) const {
  return Get(key).value_or(fallback);
}

double KeyedConfig::GetDouble(const std::string& key, double fallback) const {
  const auto v = Get(key);
  if (!v) return fallback;
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc() || ptr != v->data() + v->size()) BadValue(key, *v, "a number");
  return out;
}

std::int64_t KeyedConfig::GetInt(const std::string& key,
                                 std::int64_t fallback) const {
  const auto v = Get(key);
  if (!v) return fallback;
  std::int64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc() || ptr != v->data() + v->size()) BadValue(key, *v, "an integer");
  return out;
}

std::uint64_t KeyedConfig::GetUint(const std::string& key,
                                   std::uint64_t fallback) const {
  const auto v = Get(key);
  if (!v) return fallback;
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc() || ptr != v->data() + v->size()) {
    BadValue(key, *v, "an unsigned integer");
  }
  return out;
}

bool KeyedConfig::GetBool(const std::string& key, bool fallback) const {
  const auto v = Get(key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes" || *v == "on") return true;
  if (*v == "false" || *v == "0" || *v == "no" || *v == "off") return false;
  BadValue(key, *v, "a boolean");
}

std::vector<std::size_t> KeyedConfig::GetSizeList(
    const std::string& key, std::vector<std::size_t> fallback) const {
  const auto v = Get(key);
  if (!v) return fallback;
  std::vector<std::size_t> out;
  for (const std::string& token : SplitList(*v)) {
    std::size_t x = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), x);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
      BadValue(key, *v, "a list of counts");
    }
    out.push_back(x);
  }
  return out;
}

std::vector<std::string> KeyedConfig::GetStringList(
    const std::string& key, std::vector<std::string> fallback) const {
  const auto v = Get(key);
  if (!v) return fallback;
  return SplitList(*v);
}

std::string KeyedConfig::ToText() const {
  std::ostringstream out;
  for (const auto& [k, v] : values_) out << k << " = " << v << '\n';
  return out.str();
}

}  // namespace eqpd
