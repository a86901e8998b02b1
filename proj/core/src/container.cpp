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

#include "qlight/container.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <set>

#include "qlight/common.hpp"

namespace qlight {

static_assert(std::endian::native == std::endian::little, "container IO assumes a little-endian host");

namespace {

constexpr std::array<char, 8> kMagic{'Q', 'L', 'C', 'O', 'L', 'S', '\0', '\1'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint8_t kDtypeF64 = 1;

template <typename T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw Error("column container truncated");
  return v;
}

}  // namespace

void ColumnTable::validate() const {
  if (names.size() != columns.size()) throw DomainError("column names and data disagree");
  std::set<std::string> seen;
  for (std::size_t k = 0; k < names.size(); ++k) {
    if (names[k].empty() || names[k].size() > 0xffff) throw DomainError("invalid column name");
    if (!seen.insert(names[k]).second) throw DomainError("duplicate column '" + names[k] + "'");
    if (columns[k].size() != rows()) throw DomainError("ragged column '" + names[k] + "'");
  }
}

const std::vector<double>& ColumnTable::column(const std::string& name) const {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw DomainError("no column '" + name + "'");
  return columns[static_cast<std::size_t>(it - names.begin())];
}

void ColumnTable::add(std::string name, std::vector<double> values) {
  names.push_back(std::move(name));
  columns.push_back(std::move(values));
}

void write_columns(const std::string& path, const ColumnTable& table) {
  table.validate();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(out, kVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(table.names.size()));
  put<std::uint64_t>(out, table.rows());
  for (const auto& name : table.names) {
    put<std::uint16_t>(out, static_cast<std::uint16_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    put<std::uint8_t>(out, kDtypeF64);
  }
  put<std::uint64_t>(out, table.metadata.size());
  out.write(table.metadata.data(), static_cast<std::streamsize>(table.metadata.size()));
  for (const auto& col : table.columns) {
    out.write(reinterpret_cast<const char*>(col.data()), static_cast<std::streamsize>(col.size() * sizeof(double)));
  }
  if (!out) throw Error("write to '" + path + "' failed");
}

ColumnTable read_columns(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw Error("'" + path + "' is not a column container");
  if (get<std::uint32_t>(in) != kVersion) throw Error("unsupported column container version");
  const auto n_cols = get<std::uint32_t>(in);
  const auto n_rows = get<std::uint64_t>(in);
  ColumnTable table;
  for (std::uint32_t k = 0; k < n_cols; ++k) {
    std::string name(get<std::uint16_t>(in), '\0');
    in.read(name.data(), static_cast<std::streamsize>(name.size()));
    if (get<std::uint8_t>(in) != kDtypeF64) throw Error("unsupported column dtype");
    table.names.push_back(std::move(name));
  }
  const auto meta_len = get<std::uint64_t>(in);
  if (meta_len > (1ULL << 32)) throw Error("column container metadata too large");
  table.metadata.resize(meta_len);
  in.read(table.metadata.data(), static_cast<std::streamsize>(meta_len));
  if (!in) throw Error("column container truncated");
  for (std::uint32_t k = 0; k < n_cols; ++k) {
    std::vector<double> col(n_rows);
    in.read(reinterpret_cast<char*>(col.data()), static_cast<std::streamsize>(n_rows * sizeof(double)));
    if (!in) throw Error("column container truncated");
    table.columns.push_back(std::move(col));
  }
  table.validate();
  return table;
}

}  // namespace qlight
