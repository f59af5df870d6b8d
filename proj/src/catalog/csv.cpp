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

#include "logq/catalog/csv.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>

#include "logq/common/error.hpp"
#include "logq/simd/kernels.hpp"

namespace logq::catalog {

FileSource::FileSource(std::filesystem::path path) : path_(std::move(path)) {
  fd_ = ::open(path_.c_str(), O_RDONLY | O_CLOEXEC);
  if (fd_ < 0) {
    throw Error(ErrorCode::kIo, "cannot open " + path_.string() + ": " + std::strerror(errno));
  }
  struct stat st {};
  if (::fstat(fd_, &st) != 0) {
    int err = errno;
    ::close(fd_);
    throw Error(ErrorCode::kIo, "cannot stat " + path_.string() + ": " + std::strerror(err));
  }
  size_ = static_cast<std::uint64_t>(st.st_size);
}

FileSource::~FileSource() {
  if (fd_ >= 0) ::close(fd_);
}

void FileSource::read(std::uint64_t offset, std::span<char> out) const {
  std::size_t done = 0;
  while (done < out.size()) {
    ssize_t n = ::pread(fd_, out.data() + done, out.size() - done,
                        static_cast<off_t>(offset + done));
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorCode::kIo, "read " + path_.string() + ": " + std::strerror(errno));
    }
    if (n == 0) {
      throw Error(ErrorCode::kIo, "short read on " + path_.string() + " at offset " +
                                      std::to_string(offset + done));
    }
    done += static_cast<std::size_t>(n);
  }
}

void MemorySource::read(std::uint64_t offset, std::span<char> out) const {
  if (offset > bytes_.size() || out.size() > bytes_.size() - offset) {
    throw Error(ErrorCode::kIo, "read past end of " + label_);
  }
  std::memcpy(out.data(), bytes_.data() + offset, out.size());
}

namespace {

constexpr std::size_t kScanWindow = 64 * 1024;

// Offset of the first terminator at or after `from`, or source.size().
std::uint64_t find_terminator(const ByteSource& source, std::uint64_t from) {
  std::string window;
  const std::uint64_t size = source.size();
  while (from < size) {
    std::size_t n = static_cast<std::size_t>(std::min<std::uint64_t>(kScanWindow, size - from));
    window.resize(n);
    source.read(from, window);
    if (const void* hit = std::memchr(window.data(), kRecordTerminator, n)) {
      return from + static_cast<std::uint64_t>(static_cast<const char*>(hit) - window.data());
    }
    from += n;
  }
  return size;
}

std::size_t count_fields(std::string_view line) {
  return static_cast<std::size_t>(std::count(line.begin(), line.end(), kFieldSeparator)) + 1;
}

[[noreturn]] void field_count_error(std::string_view bytes, std::size_t line_start,
                                    std::size_t line_ordinal, std::size_t expected) {
  std::string_view rest = bytes.substr(line_start);
  std::string_view line = rest.substr(0, rest.find(kRecordTerminator));
  throw Error(ErrorCode::kIngest, "line " + std::to_string(line_ordinal) + ": expected " +
                                      std::to_string(expected) + " fields, found " +
                                      std::to_string(count_fields(line)));
}

ColumnarPartition parse_impl(std::string_view bytes, const TableSchema& schema,
                             std::size_t partition_id, ByteRange source_range,
                             const ColumnMask& needed, std::size_t first_line, bool at_range_end);

}  // namespace

std::uint64_t header_length(const ByteSource& source) {
  std::uint64_t nl = find_terminator(source, 0);
  return nl == source.size() ? nl : nl + 1;
}

std::vector<ByteRange> split_csv(const ByteSource& source, std::uint64_t target_partition_bytes) {
  if (target_partition_bytes == 0) {
    throw Error(ErrorCode::kBadRequest, "target partition size must be at least one byte");
  }
  std::vector<ByteRange> ranges;
  const std::uint64_t size = source.size();
  std::uint64_t start = header_length(source);
  while (start < size) {
    std::uint64_t end;
    if (size - start <= target_partition_bytes) {
      end = size;
    } else {
      // The range must end right after a terminator at or beyond the target.
      std::uint64_t nl = find_terminator(source, start + target_partition_bytes - 1);
      end = nl == size ? size : nl + 1;
    }
    ranges.push_back({start, end - start});
    start = end;
  }
  return ranges;
}

ColumnarPartition parse_csv_range(std::string_view bytes, const TableSchema& schema,
                                  std::size_t partition_id, ByteRange source_range,
                                  const ColumnMask& needed, std::size_t first_line) {
  return parse_impl(bytes, schema, partition_id, source_range, needed, first_line, true);
}

namespace {

ColumnarPartition parse_impl(std::string_view bytes, const TableSchema& schema,
                             std::size_t partition_id, ByteRange source_range,
                             const ColumnMask& needed, std::size_t first_line, bool at_range_end) {
  const std::size_t width = schema.width();
  std::vector<bool> mask = needed.empty() ? std::vector<bool>(width, true) : needed;
  if (mask.size() != width) throw Error(ErrorCode::kInternal, "column mask width mismatch");

  std::vector<TextColumn> columns(width);
  {
    const auto approx_rows = static_cast<std::size_t>(
        simd::count_byte(std::span<const char>(bytes.data(), bytes.size()), kRecordTerminator));
    for (std::size_t c = 0; c < width; ++c) {
      if (mask[c]) columns[c].reserve(approx_rows + 1, bytes.size() / width);
    }
  }

  std::size_t rows = 0;
  std::size_t field = 0;
  std::size_t field_start = 0;
  std::size_t line_start = 0;
  std::size_t line_ordinal = first_line;

  auto end_line = [&](std::size_t pos) {
    if (field + 1 != width) field_count_error(bytes, line_start, line_ordinal, width);
    if (mask[field]) columns[field].append(bytes.substr(field_start, pos - field_start));
    ++rows;
    field = 0;
    field_start = line_start = pos + 1;
    ++line_ordinal;
  };

  std::vector<std::uint32_t> hits;
  constexpr std::size_t kBlock = 256 * 1024;
  for (std::size_t block = 0; block < bytes.size(); block += kBlock) {
    const std::size_t len = std::min(kBlock, bytes.size() - block);
    hits.clear();
    simd::index_two_bytes(std::span<const char>(bytes.data() + block, len), kFieldSeparator,
                          kRecordTerminator, hits);
    for (std::uint32_t rel : hits) {
      const std::size_t pos = block + rel;
      if (bytes[pos] == kFieldSeparator) {
        if (field + 1 >= width) field_count_error(bytes, line_start, line_ordinal, width);
        if (mask[field]) columns[field].append(bytes.substr(field_start, pos - field_start));
        ++field;
        field_start = pos + 1;
      } else if (at_range_end && pos == line_start && pos + 1 == bytes.size()) {
        // Trailing empty line.
        line_start = field_start = bytes.size();
      } else {
        end_line(pos);
      }
    }
  }
  if (line_start < bytes.size()) end_line(bytes.size());

  for (auto& c : columns) c.shrink_to_fit();
  return ColumnarPartition(partition_id, source_range, rows, std::move(columns), std::move(mask));
}

}  // namespace

std::string serialize_partition(const ColumnarPartition& partition) {
  std::string out;
  for (std::size_t r = 0; r < partition.row_count(); ++r) {
    for (std::size_t c = 0; c < partition.width(); ++c) {
      if (c != 0) out.push_back(kFieldSeparator);
      out.append(partition.column(c).at(r));
    }
    out.push_back(kRecordTerminator);
  }
  return out;
}

void stream_csv_range(const ByteSource& source, ByteRange range, const TableSchema& schema,
                      std::size_t partition_id, const ColumnMask& needed, const BatchSink& sink,
                      std::size_t chunk_bytes) {
  if (chunk_bytes == 0) chunk_bytes = 1;
  std::string buffer;
  std::uint64_t next = range.offset;
  const std::uint64_t end = range.end();
  std::size_t rows_done = 0;
  std::size_t lines_done = 0;

  while (next < end || !buffer.empty()) {
    if (next < end) {
      std::size_t n = static_cast<std::size_t>(std::min<std::uint64_t>(chunk_bytes, end - next));
      std::size_t old = buffer.size();
      buffer.resize(old + n);
      source.read(next, std::span<char>(buffer.data() + old, n));
      next += n;
    }
    std::size_t cut;
    if (next >= end) {
      cut = buffer.size();
    } else {
      auto nl = buffer.rfind(kRecordTerminator);
      if (nl == std::string::npos) continue;  // line longer than a chunk; read more
      cut = nl + 1;
    }
    std::string_view batch_bytes(buffer.data(), cut);
    const auto batch_lines =
        static_cast<std::size_t>(simd::count_byte(std::span<const char>(batch_bytes.data(), cut),
                                                  kRecordTerminator));
    ColumnarPartition batch = [&] {
      try {
        return parse_impl(batch_bytes, schema, partition_id, range, needed, lines_done + 1,
                          next >= end);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kIngest) throw;
        throw Error(ErrorCode::kIngest,
                    source.describe() + " partition " + std::to_string(partition_id) + ": " + e.what());
      }
    }();
    lines_done += batch_lines;
    bool keep_going = batch.row_count() == 0 || sink(batch, rows_done);
    rows_done += batch.row_count();
    buffer.erase(0, cut);
    if (!keep_going) return;
  }
}

}  // namespace logq::catalog
