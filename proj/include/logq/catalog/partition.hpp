// Licensed to the Apache Software Foundation (ASF) under one
// or more contributor license agreements.  See the NOTICE file
// distributed with this work for additional information
// regarding copyright ownership.  The ASF licenses this file
// to you under the Apache License, Version 2.0 (the
// "License"); you may not use this file except in compliance
// with the License.  You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing,
// software distributed under the License is distributed on an
// "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, either express or implied.  See the License for the
// specific language governing permissions and limitations
// under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace logq::catalog {

struct ByteRange {
  std::uint64_t offset = 0;
  std::uint64_t length = 0;

  std::uint64_t end() const { return offset + length; }
  bool operator==(const ByteRange&) const = default;
};

// Variable-width text values stored back to back with an offsets array
// (offsets.size() == rows + 1).
class TextColumn {
 public:
  TextColumn() : offsets_{0} {}

  std::size_t size() const { return offsets_.size() - 1; }

  std::string_view at(std::size_t row) const {
    return std::string_view(data_).substr(offsets_[row], offsets_[row + 1] - offsets_[row]);
  }

  void append(std::string_view value) {
    data_.append(value);
    offsets_.push_back(data_.size());
  }

  void reserve(std::size_t rows, std::size_t bytes) {
    offsets_.reserve(rows + 1);
    data_.reserve(bytes);
  }

  void shrink_to_fit() {
    data_.shrink_to_fit();
    offsets_.shrink_to_fit();
  }

  std::size_t memory_bytes() const {
    return data_.capacity() + offsets_.capacity() * sizeof(std::uint64_t);
  }

 private:
  std::string data_;
  std::vector<std::uint64_t> offsets_;
};

// One newline-aligned slice of a table, stored column-wise. Columns the
// producer did not need may be left unmaterialized. Never mutated after
// construction; shared read-only across fragments.
class ColumnarPartition {
 public:
  ColumnarPartition(std::size_t partition_id, ByteRange source_range, std::size_t row_count,
                    std::vector<TextColumn> columns, std::vector<bool> materialized);

  std::size_t partition_id() const { return partition_id_; }
  std::size_t row_count() const { return row_count_; }
  const ByteRange& source_range() const { return source_range_; }
  std::size_t width() const { return columns_.size(); }

  bool has_column(std::size_t ordinal) const { return materialized_[ordinal]; }
  const TextColumn& column(std::size_t ordinal) const;

  std::size_t memory_bytes() const;

 private:
  std::size_t partition_id_;
  ByteRange source_range_;
  std::size_t row_count_;
  std::vector<TextColumn> columns_;
  std::vector<bool> materialized_;
};

}  // namespace logq::catalog
