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

// Column-oriented binary container. Layout (little-endian):
//
//   magic     8 bytes  "QLCOLS\0\1"
//   version   u32      1
//   n_columns u32
//   n_rows    u64
//   per column: u16 name length, name bytes (UTF-8), u8 dtype (1 = f64)
//   u64 metadata length, metadata bytes (JSON text, may be empty)
//   data: column after column, n_rows f64 each

#ifndef QLIGHT_CONTAINER_HPP
#define QLIGHT_CONTAINER_HPP

#include <string>
#include <vector>

namespace qlight {

struct ColumnTable {
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
  std::string metadata;

  std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
  /// Throws DomainError on ragged or duplicate columns.
  void validate() const;
  const std::vector<double>& column(const std::string& name) const;
  void add(std::string name, std::vector<double> values);
};

void write_columns(const std::string& path, const ColumnTable& table);
/// Throws Error on a malformed or truncated file.
ColumnTable read_columns(const std::string& path);

}  // namespace qlight

#endif  // QLIGHT_CONTAINER_HPP
