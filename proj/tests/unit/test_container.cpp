// Copyright 2026 The qlight Authors
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

#include <filesystem>
#include <fstream>
#include <limits>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "qlight/common.hpp"
#include "qlight/container.hpp"

namespace qlight {
namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("qlight_container_" + name)).string();
}

TEST(Container, PropertyRoundTripIsBitExact) {
  gen::Engine rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    ColumnTable t;
    const int cols = gen::integer(rng, 0, 5);
    const int rows = gen::integer(rng, 0, 300);
    for (int c = 0; c < cols; ++c) {
      std::vector<double> v(static_cast<std::size_t>(rows));
      for (auto& x : v) x = gen::uniform(rng, -1e6, 1e6);
      t.add("col" + std::to_string(c), std::move(v));
    }
    if (cols > 0 && rows > 1) {
      t.columns[0][0] = std::numeric_limits<double>::infinity();
      t.columns[0][1] = -0.0;
    }
    t.metadata = "{\"trial\":" + std::to_string(trial) + "}";
    const std::string path = temp_path("roundtrip.bin");
    write_columns(path, t);
    const ColumnTable back = read_columns(path);
    EXPECT_EQ(back.names, t.names);
    EXPECT_EQ(back.metadata, t.metadata);
    ASSERT_EQ(back.columns.size(), t.columns.size());
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
      ASSERT_EQ(back.columns[c].size(), t.columns[c].size());
      for (std::size_t r = 0; r < t.columns[c].size(); ++r) {
        EXPECT_EQ(std::signbit(back.columns[c][r]), std::signbit(t.columns[c][r]));
        EXPECT_EQ(back.columns[c][r], t.columns[c][r]);
      }
    }
    std::filesystem::remove(path);
  }
}

TEST(Container, RejectsRaggedAndDuplicateColumns) {
  ColumnTable ragged;
  ragged.add("a", {1.0, 2.0});
  ragged.add("b", {1.0});
  EXPECT_THROW(ragged.validate(), DomainError);
  EXPECT_THROW(write_columns(temp_path("ragged.bin"), ragged), DomainError);
  ColumnTable dup;
  dup.add("a", {1.0});
  dup.add("a", {2.0});
  EXPECT_THROW(dup.validate(), DomainError);
  EXPECT_THROW(dup.column("b"), DomainError);
}

TEST(Container, RejectsTruncatedAndForeignFiles) {
  ColumnTable t;
  t.add("x", std::vector<double>(64, 1.5));
  const std::string path = temp_path("truncated.bin");
  write_columns(path, t);
  const auto size = std::filesystem::file_size(path);
  std::filesystem::resize_file(path, size - 8);
  EXPECT_THROW(read_columns(path), Error);
  std::filesystem::resize_file(path, 4);
  EXPECT_THROW(read_columns(path), Error);
  {
    std::ofstream out(path, std::ios::trunc);
    out << "freq_hz,re,im\n";
  }
  EXPECT_THROW(read_columns(path), Error);
  std::filesystem::remove(path);
  EXPECT_THROW(read_columns(temp_path("absent.bin")), Error);
}

}  // namespace
}  // namespace qlight
