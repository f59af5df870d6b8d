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

#include "logq/bench/generator.hpp"

#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "logq/common/error.hpp"

namespace logq::bench {

namespace {

// Raw engine output reduced by modulo: the standard distributions are not
// specified bit-for-bit, and files must match across toolchains.
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}
  std::uint64_t below(std::uint64_t n) { return rng_() % n; }
  std::uint64_t raw() { return rng_(); }

 private:
  std::mt19937_64 rng_;
};

struct Civil {
  int year;
  unsigned month;
  unsigned day;
};

// Days since 1970-01-01 to a proleptic Gregorian date.
Civil civil_from_days(std::int64_t z) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp < 10 ? mp + 3 : mp - 9;
  return {static_cast<int>(y + (m <= 2)), m, d};
}

// 2015-12-01 00:00:00 UTC.
constexpr std::uint64_t kEpochMicros = 1448928000ull * 1'000'000;

std::string timestamp(std::uint64_t micros) {
  const std::uint64_t secs = micros / 1'000'000;
  const Civil c = civil_from_days(static_cast<std::int64_t>(secs / 86400));
  const unsigned sod = static_cast<unsigned>(secs % 86400);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u %02u:%02u:%02u.%06u", c.year, c.month, c.day,
                sod / 3600, sod / 60 % 60, sod % 60, static_cast<unsigned>(micros % 1'000'000));
  return buf;
}

std::string compact_time(std::uint64_t micros) {
  std::string t = timestamp(micros);  // YYYY-MM-DD HH:MM:SS.ffffff
  return t.substr(0, 4) + t.substr(5, 2) + t.substr(8, 2) + "_" + t.substr(11, 2) +
         t.substr(14, 2) + t.substr(17, 2);
}

std::string hex32(Draw& draw) {
  char buf[33];
  std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(draw.raw()),
                static_cast<unsigned long long>(draw.raw()));
  return buf;
}

// "LTE_PHY_Serv_Cell_Measuremnt" -> "/LTE/PHY/Serv_Cell_Measuremnt"
std::string msg_path(const std::string& type) {
  std::string out = "/" + type;
  for (int i = 0, replaced = 0; i < static_cast<int>(out.size()) && replaced < 2; ++i) {
    if (out[i] == '_') {
      out[i] = '/';
      ++replaced;
    }
  }
  return out;
}

void check_field(const std::string& value, const char* pool) {
  if (value.empty() || value.find_first_of(",\n") != std::string::npos) {
    throw Error(ErrorCode::kBadRequest, std::string(pool) + " value '" + value +
                                            "' is empty or contains a separator");
  }
}

struct FileRow {
  std::string path;
  std::uint64_t start_micros = 0;
  std::uint64_t next_micros = 0;
  std::uint64_t next_line = 1;
};

class Writer {
 public:
  explicit Writer(const std::filesystem::path& path) : path_(path), out_(path, std::ios::binary) {
    if (!out_) throw Error(ErrorCode::kIo, "cannot write " + path.string());
    buffer_.reserve(kFlush + 4096);
  }
  void line(std::initializer_list<std::string_view> fields) {
    bool first = true;
    for (auto f : fields) {
      if (!first) buffer_ += ',';
      buffer_ += f;
      first = false;
    }
    buffer_ += '\n';
    if (buffer_.size() >= kFlush) flush();
  }
  std::uint64_t close() {
    flush();
    out_.close();
    if (!out_) throw Error(ErrorCode::kIo, "cannot write " + path_.string());
    return written_;
  }

 private:
  static constexpr std::size_t kFlush = 1 << 20;
  void flush() {
    out_.write(buffer_.data(), static_cast<std::streamsize>(buffer_.size()));
    if (!out_) throw Error(ErrorCode::kIo, "cannot write " + path_.string());
    written_ += buffer_.size();
    buffer_.clear();
  }
  std::filesystem::path path_;
  std::ofstream out_;
  std::string buffer_;
  std::uint64_t written_ = 0;
};

}  // namespace

nlohmann::json GroundTruth::to_json() const {
  return {{"tfile_rows", tfile_rows}, {"tmsg_rows", tmsg_rows}, {"join_count", join_count},
          {"tfile_bytes", tfile_bytes}, {"tmsg_bytes", tmsg_bytes}, {"seed", seed}};
}

GroundTruth GroundTruth::from_json(const nlohmann::json& j) {
  GroundTruth g;
  g.tfile_rows = j.at("tfile_rows").get<std::uint64_t>();
  g.tmsg_rows = j.at("tmsg_rows").get<std::uint64_t>();
  g.join_count = j.at("join_count").get<std::uint64_t>();
  g.tfile_bytes = j.at("tfile_bytes").get<std::uint64_t>();
  g.tmsg_bytes = j.at("tmsg_bytes").get<std::uint64_t>();
  g.seed = j.at("seed").get<std::uint64_t>();
  return g;
}

GroundTruth generate(const GenSpec& spec, const std::filesystem::path& out_dir) {
  if (spec.tfile_rows == 0 && spec.tmsg_rows > 0) {
    throw Error(ErrorCode::kBadRequest, "tMsg rows need at least one tFile row to reference");
  }
  if (spec.carriers.empty() || spec.phones.empty() || spec.msg_types.empty()) {
    throw Error(ErrorCode::kBadRequest, "value pools must be non-empty");
  }
  for (const auto& v : spec.carriers) check_field(v, "carrier");
  for (const auto& v : spec.phones) check_field(v, "phone");
  for (const auto& v : spec.msg_types) check_field(v, "message type");

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + out_dir.string() + ": " + ec.message());

  Draw draw(spec.seed);
  GroundTruth truth;
  truth.seed = spec.seed;

  std::vector<FileRow> files;
  files.reserve(spec.tfile_rows);
  std::set<std::string> seen;
  Writer tfile(out_dir / "tFile.csv");
  tfile.line({"Filepath", "Phone", "Carrier", "Timestamp"});
  while (files.size() < spec.tfile_rows) {
    const auto& carrier = spec.carriers[draw.below(spec.carriers.size())];
    const auto& phone = spec.phones[draw.below(spec.phones.size())];
    // Traces start somewhere in a 60-day window.
    const std::uint64_t start = kEpochMicros + draw.below(60ull * 86400) * 1'000'000;
    char imei[16];
    std::snprintf(imei, sizeof imei, "%014llu",
                  static_cast<unsigned long long>(draw.below(100'000'000'000'000ull)));
    std::string path = "/data/milog/" + carrier + "_" + phone + "/diag_log_" + compact_time(start) +
                       "_" + imei + "_" + phone + "_" + carrier + ".mi2log";
    if (!seen.insert(path).second) continue;
    // The trace's own timestamp trails its name by up to a few hours.
    const std::uint64_t opened = start + draw.below(6ull * 3600 * 1'000'000);
    tfile.line({path, phone, carrier, timestamp(opened)});
    files.push_back({std::move(path), opened, opened, 1});
  }
  truth.tfile_rows = files.size();
  truth.tfile_bytes = tfile.close();

  Writer tmsg(out_dir / "tMsg.csv");
  tmsg.line({"Filepath", "Timestamp", "MsgType", "MsgHash", "MsgPath", "LineNo"});
  for (std::uint64_t i = 0; i < spec.tmsg_rows; ++i) {
    FileRow& f = files[draw.below(files.size())];
    const auto& type = spec.msg_types[draw.below(spec.msg_types.size())];
    f.next_micros += draw.below(2'000'000);
    const std::string line_no = std::to_string(f.next_line++);
    tmsg.line({f.path, timestamp(f.next_micros), type, hex32(draw), msg_path(type), line_no});
  }
  truth.tmsg_rows = spec.tmsg_rows;
  truth.join_count = spec.tmsg_rows;
  truth.tmsg_bytes = tmsg.close();

  std::ofstream gt(out_dir / "ground_truth.json");
  gt << truth.to_json().dump(2) << '\n';
  if (!gt) throw Error(ErrorCode::kIo, "cannot write ground_truth.json");
  return truth;
}

GroundTruth read_ground_truth(const std::filesystem::path& data_dir) {
  std::ifstream in(data_dir / "ground_truth.json");
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + (data_dir / "ground_truth.json").string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return GroundTruth::from_json(nlohmann::json::parse(ss.str()));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kIo, std::string("bad ground_truth.json: ") + e.what());
  }
}

}  // namespace logq::bench
