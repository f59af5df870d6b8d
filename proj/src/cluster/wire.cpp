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

#include "logq/cluster/wire.hpp"

#include <type_traits>

namespace logq::cluster {

using nlohmann::json;

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

[[noreturn]] void bad(const std::string& what) {
  throw Error(ErrorCode::kProtocol, "malformed message: " + what);
}

template <class T>
T field(const json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) bad(std::string("missing field ") + name);
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    bad(std::string("bad field ") + name);
  }
}

json ranges_to_json(const std::vector<RangeAssignment>& ranges) {
  json out = json::array();
  for (const auto& r : ranges) {
    out.push_back({{"id", r.partition_id},
                   {"offset", r.range.offset},
                   {"length", r.range.length},
                   {"rows", r.row_count}});
  }
  return out;
}

std::vector<RangeAssignment> ranges_from_json(const json& j) {
  if (!j.is_array()) bad("partitions must be an array");
  std::vector<RangeAssignment> out;
  for (const auto& r : j) {
    out.push_back({field<std::size_t>(r, "id"),
                   {field<std::uint64_t>(r, "offset"), field<std::uint64_t>(r, "length")},
                   field<std::uint64_t>(r, "rows")});
  }
  return out;
}

json filter_to_json(const std::vector<engine::FilterTerm>& terms) {
  json out = json::array();
  for (const auto& t : terms) {
    out.push_back({{"side", t.column.side == engine::PlanSide::kProbe ? "probe" : "build"},
                   {"ordinal", t.column.ordinal},
                   {"op", sql::op_text(t.op)},
                   {"literal", t.literal}});
  }
  return out;
}

engine::PlanSide side_from(const std::string& s) {
  if (s == "probe") return engine::PlanSide::kProbe;
  if (s == "build") return engine::PlanSide::kBuild;
  bad("unknown side " + s);
}

sql::CompareOp op_from(const std::string& s) {
  using sql::CompareOp;
  for (CompareOp op : {CompareOp::kEq, CompareOp::kNe, CompareOp::kLt, CompareOp::kLe,
                       CompareOp::kGt, CompareOp::kGe}) {
    if (sql::op_text(op) == s) return op;
  }
  bad("unknown operator " + s);
}

std::vector<engine::FilterTerm> filter_from_json(const json& j) {
  std::vector<engine::FilterTerm> out;
  for (const auto& t : j) {
    out.push_back({{side_from(field<std::string>(t, "side")), field<std::size_t>(t, "ordinal")},
                   op_from(field<std::string>(t, "op")),
                   field<std::string>(t, "literal")});
  }
  return out;
}

engine::StorageMode mode_field(const json& j, const char* name) {
  auto m = engine::mode_from_name(field<std::string>(j, name));
  if (!m) bad(std::string("unknown mode in ") + name);
  return *m;
}

json fragment_to_json(const engine::FragmentResult& f) {
  json out{{"query_id", f.query_id},
           {"partition_id", f.partition_id},
           {"rows_scanned", f.rows_scanned},
           {"disk_rows", f.disk_rows}};
  if (const auto* c = std::get_if<engine::PartialCount>(&f.payload)) {
    out["count"] = c->value;
  } else {
    const auto& rows = std::get<engine::RowsPayload>(f.payload);
    out["columns"] = rows.columns;
    out["row_count"] = rows.row_count;
  }
  return out;
}

engine::FragmentResult fragment_from_json(const json& j) {
  engine::FragmentResult f;
  f.query_id = field<std::uint64_t>(j, "query_id");
  f.partition_id = field<std::size_t>(j, "partition_id");
  f.rows_scanned = field<std::uint64_t>(j, "rows_scanned");
  f.disk_rows = field<std::uint64_t>(j, "disk_rows");
  if (j.contains("count")) {
    f.payload = engine::PartialCount{field<std::uint64_t>(j, "count")};
  } else {
    engine::RowsPayload rows;
    rows.columns = field<std::vector<std::vector<std::string>>>(j, "columns");
    rows.row_count = field<std::size_t>(j, "row_count");
    for (const auto& c : rows.columns) {
      if (c.size() != rows.row_count) bad("fragment column length mismatch");
    }
    f.payload = std::move(rows);
  }
  return f;
}

}  // namespace

json schema_to_json(const catalog::TableSchema& schema) {
  json cols = json::array();
  for (const auto& c : schema.columns()) {
    cols.push_back({{"name", c.name}, {"type", catalog::type_name(c.type)}});
  }
  return {{"name", schema.name()}, {"columns", cols}, {"primary_key", schema.primary_key()}};
}

catalog::TableSchema schema_from_json(const json& j) {
  std::vector<catalog::ColumnDef> cols;
  for (const auto& c : field<json>(j, "columns")) {
    auto type = catalog::type_from_name(field<std::string>(c, "type"));
    if (!type) bad("unknown column type");
    cols.push_back({field<std::string>(c, "name"), *type});
  }
  try {
    return catalog::TableSchema(field<std::string>(j, "name"), std::move(cols),
                                field<std::vector<std::string>>(j, "primary_key"));
  } catch (const Error& e) {
    bad(e.what());
  }
}

json plan_to_json(const engine::PhysicalPlan& p) {
  json outputs = json::array();
  for (const auto& o : p.outputs) {
    outputs.push_back({{"side", o.side == engine::PlanSide::kProbe ? "probe" : "build"},
                       {"ordinal", o.ordinal}});
  }
  json out{{"mode", engine::mode_name(p.mode)},
           {"scan_table", p.scan_table},
           {"scan_width", p.scan_width},
           {"scan_columns", p.scan_columns},
           {"probe_filter", filter_to_json(p.probe_filter)},
           {"build_filter", filter_to_json(p.build_filter)},
           {"count", p.count},
           {"metadata_count", p.metadata_count},
           {"outputs", outputs},
           {"output_names", p.output_names}};
  out["join"] = p.join ? json{{"build_table", p.join->build_table},
                              {"probe_key", p.join->probe_key},
                              {"build_key", p.join->build_key}}
                       : json(nullptr);
  out["limit"] = p.limit ? json(*p.limit) : json(nullptr);
  out["row_cap"] = p.row_cap ? json(*p.row_cap) : json(nullptr);
  return out;
}

engine::PhysicalPlan plan_from_json(const json& j) {
  engine::PhysicalPlan p;
  p.mode = mode_field(j, "mode");
  p.scan_table = field<std::string>(j, "scan_table");
  p.scan_width = field<std::size_t>(j, "scan_width");
  p.scan_columns = field<std::vector<std::size_t>>(j, "scan_columns");
  p.probe_filter = filter_from_json(field<json>(j, "probe_filter"));
  p.build_filter = filter_from_json(field<json>(j, "build_filter"));
  p.count = field<bool>(j, "count");
  p.metadata_count = field<bool>(j, "metadata_count");
  for (const auto& o : field<json>(j, "outputs")) {
    p.outputs.push_back({side_from(field<std::string>(o, "side")), field<std::size_t>(o, "ordinal")});
  }
  p.output_names = field<std::vector<std::string>>(j, "output_names");
  if (const auto& jj = field<json>(j, "join"); !jj.is_null()) {
    p.join = engine::JoinStep{field<std::string>(jj, "build_table"),
                              field<std::size_t>(jj, "probe_key"),
                              field<std::size_t>(jj, "build_key")};
  }
  if (const auto& l = field<json>(j, "limit"); !l.is_null()) p.limit = l.get<std::uint64_t>();
  if (const auto& c = field<json>(j, "row_cap"); !c.is_null()) p.row_cap = c.get<std::uint64_t>();
  for (std::size_t c : p.scan_columns) {
    if (c >= p.scan_width) bad("scan column out of range");
  }
  return p;
}

json result_to_json(const engine::QueryResult& r) {
  return {{"columns", r.columns},
          {"rows", r.rows},
          {"row_count", r.row_count},
          {"elapsed_ms", r.elapsed_ms},
          {"mode", r.mode},
          {"rows_scanned", r.rows_scanned},
          {"disk_rows", r.disk_rows}};
}

engine::QueryResult result_from_json(const json& j) {
  engine::QueryResult r;
  r.columns = field<std::vector<std::string>>(j, "columns");
  r.rows = field<std::vector<std::vector<std::string>>>(j, "rows");
  r.row_count = field<std::size_t>(j, "row_count");
  r.elapsed_ms = field<double>(j, "elapsed_ms");
  r.mode = field<std::string>(j, "mode");
  r.rows_scanned = field<std::uint64_t>(j, "rows_scanned");
  r.disk_rows = field<std::uint64_t>(j, "disk_rows");
  return r;
}

std::string_view kind_name(const WireMessage& message) {
  return std::visit(
      Overloaded{
          [](const Register&) { return std::string_view("Register"); },
          [](const Ack&) { return std::string_view("Ack"); },
          [](const AssignLoad&) { return std::string_view("AssignLoad"); },
          [](const Broadcast&) { return std::string_view("Broadcast"); },
          [](const Cache&) { return std::string_view("Cache"); },
          [](const Exec&) { return std::string_view("Exec"); },
          [](const Fragment&) { return std::string_view("Fragment"); },
          [](const Err&) { return std::string_view("Err"); },
          [](const Heartbeat&) { return std::string_view("Heartbeat"); },
          [](const Shutdown&) { return std::string_view("Shutdown"); },
          [](const Submit&) { return std::string_view("Submit"); },
          [](const Result&) { return std::string_view("Result"); },
          [](const StatusRequest&) { return std::string_view("StatusRequest"); },
          [](const Status&) { return std::string_view("Status"); },
          [](const Load&) { return std::string_view("Load"); },
      },
      message);
}

json to_json(const WireMessage& message) {
  json body = std::visit(
      Overloaded{
          [](const Register& m) -> json {
            return {{"worker_id", m.worker_id}, {"address", m.address}, {"cores", m.cores}};
          },
          [](const Ack& m) -> json { return {{"seq", m.seq}, {"detail", m.detail}}; },
          [](const AssignLoad& m) -> json {
            return {{"seq", m.seq},
                    {"table", m.table},
                    {"schema", schema_to_json(m.schema)},
                    {"source", m.source},
                    {"partitions", ranges_to_json(m.partitions)}};
          },
          [](const Broadcast& m) -> json {
            return {{"seq", m.seq},
                    {"table", m.table},
                    {"schema", schema_to_json(m.schema)},
                    {"content", m.content},
                    {"partitions", ranges_to_json(m.partitions)}};
          },
          [](const Cache& m) -> json { return {{"seq", m.seq}, {"table", m.table}}; },
          [](const Exec& m) -> json {
            return {{"query_id", m.query_id}, {"plan", plan_to_json(m.plan)},
                    {"partitions", m.partitions}};
          },
          [](const Fragment& m) -> json { return {{"result", fragment_to_json(m.result)}}; },
          [](const Err& m) -> json {
            json j{{"query_id", m.query_id},
                   {"seq", m.seq},
                   {"code", code_name(m.code)},
                   {"message", m.message}};
            j["partition_id"] = m.partition_id ? json(*m.partition_id) : json(nullptr);
            j["position"] = m.position ? json(*m.position) : json(nullptr);
            return j;
          },
          [](const Heartbeat&) -> json { return json::object(); },
          [](const Shutdown&) -> json { return json::object(); },
          [](const Submit& m) -> json {
            json j{{"request_id", m.request_id}, {"sql", m.sql}};
            j["mode"] = m.mode ? json(engine::mode_name(*m.mode)) : json(nullptr);
            return j;
          },
          [](const Result& m) -> json {
            return {{"request_id", m.request_id}, {"result", result_to_json(m.result)}};
          },
          [](const StatusRequest&) -> json { return json::object(); },
          [](const Status& m) -> json { return {{"status", m.document}}; },
          [](const Load& m) -> json {
            json j{{"seq", m.seq}, {"table", m.table}, {"source", m.source}, {"cache", m.cache}};
            j["schema"] = m.schema ? schema_to_json(*m.schema) : json(nullptr);
            return j;
          },
      },
      message);
  body["v"] = kProtocolVersion;
  body["kind"] = kind_name(message);
  return body;
}

WireMessage from_json(const json& j) {
  if (!j.is_object()) bad("payload is not an object");
  if (field<int>(j, "v") != kProtocolVersion) {
    throw Error(ErrorCode::kProtocol, "unsupported protocol version " + j["v"].dump());
  }
  const auto kind = field<std::string>(j, "kind");
  if (kind == "Register") {
    return Register{field<std::string>(j, "worker_id"), field<std::string>(j, "address"),
                    field<std::uint32_t>(j, "cores")};
  }
  if (kind == "Ack") return Ack{field<std::uint64_t>(j, "seq"), field<std::string>(j, "detail")};
  if (kind == "AssignLoad") {
    return AssignLoad{field<std::uint64_t>(j, "seq"), field<std::string>(j, "table"),
                      schema_from_json(field<json>(j, "schema")), field<std::string>(j, "source"),
                      ranges_from_json(field<json>(j, "partitions"))};
  }
  if (kind == "Broadcast") {
    return Broadcast{field<std::uint64_t>(j, "seq"), field<std::string>(j, "table"),
                     schema_from_json(field<json>(j, "schema")), field<std::string>(j, "content"),
                     ranges_from_json(field<json>(j, "partitions"))};
  }
  if (kind == "Cache") return Cache{field<std::uint64_t>(j, "seq"), field<std::string>(j, "table")};
  if (kind == "Exec") {
    return Exec{field<std::uint64_t>(j, "query_id"), plan_from_json(field<json>(j, "plan")),
                field<std::vector<std::size_t>>(j, "partitions")};
  }
  if (kind == "Fragment") return Fragment{fragment_from_json(field<json>(j, "result"))};
  if (kind == "Err") {
    Err e;
    e.query_id = field<std::uint64_t>(j, "query_id");
    e.seq = field<std::uint64_t>(j, "seq");
    auto code = code_from_name(field<std::string>(j, "code"));
    if (!code) bad("unknown error code");
    e.code = *code;
    e.message = field<std::string>(j, "message");
    if (const auto& p = field<json>(j, "partition_id"); !p.is_null()) e.partition_id = p.get<std::size_t>();
    if (const auto& p = field<json>(j, "position"); !p.is_null()) e.position = p.get<std::size_t>();
    return e;
  }
  if (kind == "Heartbeat") return Heartbeat{};
  if (kind == "Shutdown") return Shutdown{};
  if (kind == "Submit") {
    Submit s{field<std::uint64_t>(j, "request_id"), field<std::string>(j, "sql"), std::nullopt};
    if (!field<json>(j, "mode").is_null()) s.mode = mode_field(j, "mode");
    return s;
  }
  if (kind == "Result") {
    return Result{field<std::uint64_t>(j, "request_id"), result_from_json(field<json>(j, "result"))};
  }
  if (kind == "StatusRequest") return StatusRequest{};
  if (kind == "Status") return Status{field<json>(j, "status")};
  if (kind == "Load") {
    Load l{field<std::uint64_t>(j, "seq"), field<std::string>(j, "table"),
           field<std::string>(j, "source"), std::nullopt, field<bool>(j, "cache")};
    if (const auto& s = field<json>(j, "schema"); !s.is_null()) l.schema = schema_from_json(s);
    return l;
  }
  bad("unknown kind " + kind);
}

std::string encode_payload(const WireMessage& message) {
  try {
    return to_json(message).dump();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kProtocol, std::string("cannot encode message: ") + e.what());
  }
}

WireMessage decode_payload(std::string_view payload) {
  json j;
  try {
    j = json::parse(payload);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kProtocol, std::string("payload is not JSON: ") + e.what());
  }
  return from_json(j);
}

void write_be32(std::uint32_t value, char* out) {
  out[0] = static_cast<char>((value >> 24) & 0xFF);
  out[1] = static_cast<char>((value >> 16) & 0xFF);
  out[2] = static_cast<char>((value >> 8) & 0xFF);
  out[3] = static_cast<char>(value & 0xFF);
}

std::uint32_t read_be32(const char* in) {
  auto b = [in](int i) { return static_cast<std::uint32_t>(static_cast<unsigned char>(in[i])); };
  return (b(0) << 24) | (b(1) << 16) | (b(2) << 8) | b(3);
}

std::string encode_frame(const WireMessage& message) {
  std::string payload = encode_payload(message);
  if (payload.size() > kMaxFrameBytes) {
    throw Error(ErrorCode::kProtocol, "message of " + std::to_string(payload.size()) +
                                          " bytes exceeds the frame limit");
  }
  std::string frame(4, '\0');
  write_be32(static_cast<std::uint32_t>(payload.size()), frame.data());
  frame += payload;
  return frame;
}

WireMessage decode_frame(std::string_view frame) {
  if (frame.size() < 4) throw Error(ErrorCode::kProtocol, "frame shorter than its header");
  std::uint32_t len = read_be32(frame.data());
  if (len != frame.size() - 4) {
    throw Error(ErrorCode::kProtocol, "frame length " + std::to_string(len) + " does not match " +
                                          std::to_string(frame.size() - 4) + " payload bytes");
  }
  return decode_payload(frame.substr(4));
}

}  // namespace logq::cluster
