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
#include <filesystem>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "logq/catalog/partition.hpp"
#include "logq/catalog/schema.hpp"

// Log CSV: fields separated by 0x2C, records terminated by 0x0A, first line
// is a header and is skipped, no quoting or escaping.
namespace logq::catalog {

inline constexpr char kFieldSeparator = ',';
inline constexpr char kRecordTerminator = '\n';

// Random-access byte source for CSV data.
class ByteSource {
 public:
  virtual ~ByteSource() = default;
  virtual std::uint64_t size() const = 0;
  // Reads exactly out.size() bytes at offset; throws Error(kIo) on failure.
  virtual void read(std::uint64_t offset, std::span<char> out) const = 0;
  // Human-readable origin for error messages.
  virtual std::string describe() const = 0;
};

class FileSource final : public ByteSource {
 public:
  explicit FileSource(std::filesystem::path path);
  ~FileSource() override;
  FileSource(const FileSource&) = delete;
  FileSource& operator=(const FileSource&) = delete;

  std::uint64_t size() const override { return size_; }
  void read(std::uint64_t offset, std::span<char> out) const override;
  std::string describe() const override { return path_.string(); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  int fd_ = -1;
  std::uint64_t size_ = 0;
};

class MemorySource final : public ByteSource {
 public:
  MemorySource(std::string bytes, std::string label = "<memory>")
      : bytes_(std::move(bytes)), label_(std::move(label)) {}

  std::uint64_t size() const override { return bytes_.size(); }
  void read(std::uint64_t offset, std::span<char> out) const override;
  std::string describe() const override { return label_; }
  const std::string& bytes() const { return bytes_; }

 private:
  std::string bytes_;
  std::string label_;
};

// Byte length of the header line including its terminator; the whole source
// when there is no terminator.
std::uint64_t header_length(const ByteSource& source);

// Splits the data region (everything after the header line) into ranges of
// roughly target_partition_bytes. Every boundary but the last falls right
// after a record terminator.
std::vector<ByteRange> split_csv(const ByteSource& source, std::uint64_t target_partition_bytes);

// Which schema columns to materialize; empty means all.
using ColumnMask = std::vector<bool>;

// Parses a newline-aligned byte range. first_line is the 1-based ordinal
// reported for the first line in error messages.
ColumnarPartition parse_csv_range(std::string_view bytes, const TableSchema& schema,
                                  std::size_t partition_id, ByteRange source_range = {},
                                  const ColumnMask& needed = {}, std::size_t first_line = 1);

// Inverse of parse_csv_range for fully materialized partitions.
std::string serialize_partition(const ColumnarPartition& partition);

// Streams a range from the source in bounded chunks, handing each parsed
// batch to `sink` along with the partition-relative ordinal of its first row.
// Stops early when the sink returns false.
using BatchSink = std::function<bool(const ColumnarPartition& batch, std::size_t first_row)>;
void stream_csv_range(const ByteSource& source, ByteRange range, const TableSchema& schema,
                      std::size_t partition_id, const ColumnMask& needed, const BatchSink& sink,
                      std::size_t chunk_bytes = std::size_t{1} << 20);

}  // namespace logq::catalog
