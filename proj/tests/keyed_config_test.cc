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


#include <cmath>
#include <limits>

#include "eqpd/error.h"
#include "eqpd/keyed_config.h"
#include "gtest/gtest.h"

namespace eqpd {
namespace {

TEST(KeyedConfigTest, ParsesCommentsBlanksAndWhitespace) {
  const KeyedConfig c = KeyedConfig::Parse(
      "# comment\n\n  a = 1  \nname = two words\r\nempty =\nx=3\nx=4\n");
  EXPECT_EQ(c.GetInt("a", 0), 1);
  EXPECT_EQ(c.GetString("name", ""), "two words");
  EXPECT_EQ(c.GetString("empty", "fallback"), "");
  EXPECT_EQ(c.GetInt("x", 0), 4);
  EXPECT_FALSE(c.Has("missing"));
  EXPECT_EQ(c.GetDouble("missing", 2.5), 2.5);
}

TEST(KeyedConfigTest, MalformedLinesThrow) {
  EXPECT_THROW(KeyedConfig::Parse("no equals sign\n"), Error);
  EXPECT_THROW(KeyedConfig::Parse(" = value\n"), Error);
}

TEST(KeyedConfigTest, TypedGettersRejectGarbage) {
  const KeyedConfig c = KeyedConfig::Parse("d = 1.5x\nu = -3\nb = maybe\nl = 1,two\n");
  EXPECT_THROW(c.GetDouble("d", 0.0), Error);
  EXPECT_THROW(c.GetUint("u", 0), Error);
  EXPECT_EQ(c.GetInt("u", 0), -3);
  EXPECT_THROW(c.GetBool("b", false), Error);
  EXPECT_THROW(c.GetSizeList("l", {}), Error);
  try {
    c.GetBool("b", false);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfiguration);
  }
}

TEST(KeyedConfigTest, ListsAndBooleans) {
  const KeyedConfig c = KeyedConfig::Parse("l = 15, 100 1000\ns = upnn,penn\nt = yes\nf = off\n");
  EXPECT_EQ(c.GetSizeList("l", {}), (std::vector<std::size_t>{15, 100, 1000}));
  EXPECT_EQ(c.GetStringList("s", {}), (std::vector<std::string>{"upnn", "penn"}));
  EXPECT_TRUE(c.GetBool("t", false));
  EXPECT_FALSE(c.GetBool("f", true));
}

TEST(KeyedConfigTest, TextRoundTripAndMerge) {
  KeyedConfig a;
  a.Set("z", "1");
  a.Set("a", "x y");
  KeyedConfig b;
  b.Set("a", "override");
  b.Set("m", "2");
  a.Merge(b);
  const KeyedConfig back = KeyedConfig::Parse(a.ToText());
  EXPECT_EQ(back.entries(), a.entries());
  EXPECT_EQ(back.GetString("a", ""), "override");
  EXPECT_EQ(a.ToText(), "a = override\nm = 2\nz = 1\n");
}

TEST(FormatDoubleTest, RoundTripsExactly) {
  for (double v : {0.1, 1e-2, 4e-4, 1.0 / 3.0, -2.5e300, 5e-324,
                   std::numeric_limits<double>::max()}) {
    KeyedConfig c;
    c.Set("v", FormatDouble(v));
    EXPECT_EQ(c.GetDouble("v", 0.0), v);
  }
  EXPECT_EQ(FormatDouble(0.01), "0.01");
}

}  // namespace
}  // namespace eqpd
