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

#include "logq/engine/fragment.hpp"

#include "logq/common/error.hpp"

namespace logq::engine {

FragmentInput FragmentInput::cached(catalog::PartitionRef partition) {
  FragmentInput in;
  in.partition_id = partition->partition_id();
  in.row_count = partition->row_count();
  in.range = partition->source_range();
  in.resident = std::move(partition);
  return in;
}

FragmentInput FragmentInput::disk(const catalog::ByteSource& source,
                                  const catalog::PartitionDescriptor& descriptor,
                                  const catalog::TableSchema& schema) {
  FragmentInput in;
  in.partition_id = descriptor.partition_id;
  in.row_count = descriptor.row_count;
  in.source = &source;
  in.range = descriptor.range;
  in.schema = &schema;
  return in;
}

namespace {

class FragmentRunner {
 public:
  FragmentRunner(const PhysicalPlan& plan, const HashIndex* build)
      : plan_(plan), build_(build), budget_(plan.fragment_budget()) {
    if (!plan.count) columns_.resize(plan.outputs.size());
    done_ = !plan.count && budget_ == 0;
  }

  // Returns false once the fragment needs no more input.
  bool consume(const catalog::ColumnarPartition& batch) {
    const std::size_t rows = batch.row_count();
    for (std::size_t r = 0; r < rows && !done_; ++r) {
      ++rows_scanned_;
      if (!probe_passes(batch, r)) continue;
      if (plan_.join) {
        std::string_view key = batch.column(plan_.join->probe_key).at(r);
        for (std::uint64_t b : build_->lookup(key)) {
          if (!build_passes(b)) continue;
          emit(batch, r, b);
          if (done_) break;
        }
      } else {
        emit(batch, r, 0);
      }
    }
    return !done_;
  }

  FragmentResult finish(std::uint64_t query_id, std::size_t partition_id) {
    FragmentResult out;
    out.query_id = query_id;
    out.partition_id = partition_id;
    out.rows_scanned = rows_scanned_;
    if (plan_.count) {
      out.payload = PartialCount{count_};
    } else {
      out.payload = RowsPayload{std::move(columns_), static_cast<std::size_t>(count_)};
    }
    return out;
  }

 private:
  bool probe_passes(const catalog::ColumnarPartition& batch, std::size_t r) const {
    for (const auto& f : plan_.probe_filter) {
      if (!sql::compare(batch.column(f.column.ordinal).at(r), f.op, f.literal)) return false;
    }
    return true;
  }

  bool build_passes(std::uint64_t b) const {
    for (const auto& f : plan_.build_filter) {
      if (!sql::compare(build_->value(b, f.column.ordinal), f.op, f.literal)) return false;
    }
    return true;
  }

  void emit(const catalog::ColumnarPartition& batch, std::size_t r, std::uint64_t b) {
    ++count_;
    if (!plan_.count) {
      for (std::size_t i = 0; i < plan_.outputs.size(); ++i) {
        const auto& slot = plan_.outputs[i];
        std::string_view v = slot.side == PlanSide::kProbe ? batch.column(slot.ordinal).at(r)
                                                           : build_->value(b, slot.ordinal);
        columns_[i].emplace_back(v);
      }
      done_ = count_ >= budget_;
    }
  }

  const PhysicalPlan& plan_;
  const HashIndex* build_;
  const std::uint64_t budget_;
  bool done_ = false;
  std::uint64_t count_ = 0;
  std::uint64_t rows_scanned_ = 0;
  std::vector<std::vector<std::string>> columns_;
};

}  // namespace

FragmentResult execute_fragment(const PhysicalPlan& plan, const FragmentInput& input,
                                const HashIndex* build, std::uint64_t query_id) {
  if (plan.join.has_value() != (build != nullptr)) {
    throw Error(ErrorCode::kInternal, "join plans need a build index, others must not have one");
  }

  if (plan.metadata_count) {
    FragmentResult out;
    out.query_id = query_id;
    out.partition_id = input.partition_id;
    out.payload = PartialCount{input.row_count};
    return out;
  }

  FragmentRunner runner(plan, build);
  std::uint64_t disk_rows = 0;

  if (plan.mode == StorageMode::kCached) {
    if (!input.resident) {
      throw Error(ErrorCode::kNotCached, "partition " + std::to_string(input.partition_id) + " of " +
                                             plan.scan_table + " is not resident");
    }
    runner.consume(*input.resident);
  } else {
    if (input.source == nullptr || input.schema == nullptr) {
      throw Error(ErrorCode::kInternal, "disk fragment without a source");
    }
    catalog::ColumnMask mask(plan.scan_width, false);
    for (std::size_t c : plan.scan_columns) mask[c] = true;
    try {
      catalog::stream_csv_range(*input.source, input.range, *input.schema, input.partition_id,
                                mask, [&](const catalog::ColumnarPartition& batch, std::size_t) {
                                  disk_rows += batch.row_count();
                                  return runner.consume(batch);
                                });
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kIo) throw;
      throw Error(ErrorCode::kIo,
                  "partition " + std::to_string(input.partition_id) + ": " + e.what());
    }
  }

  FragmentResult out = runner.finish(query_id, input.partition_id);
  out.disk_rows = disk_rows;
  return out;
}

}  // namespace logq::engine
