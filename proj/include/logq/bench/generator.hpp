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

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace logq::bench {

struct GenSpec {
  std::uint64_t tfile_rows = 2'000;
  std::uint64_t tmsg_rows = 2'000'000;
  std::uint64_t seed = 1;
  std::vector<std::string> carriers = {"Verizon", "AT&T", "T-Mobile", "Sprint"};
  std::vector<std::string> phones = {"LGE-VS985", "LGE-D855", "SAMSUNG-SM-G900A",
                                     "Motorola-XT1096", "HTC-One_M8", "Google-Nexus_6"};
  std::vector<std::string> msg_types = {
      "LTE_PHY_Serv_Cell_Measuremnt",   "LTE_RRC_OTA_Packet",
      "LTE_RRC_Serv_Cell_Info",         "LTE_NAS_EMM_OTA_Incoming_Packet",
      "LTE_NAS_ESM_OTA_Outgoing_Packet", "LTE_MAC_UL_Tx_Statistics",
      "LTE_PHY_PDSCH_Packet",           "LTE_PHY_Connected_Mode_Intra_Freq_Meas",
      "WCDMA_RRC_OTA_Packet",           "UMTS_NAS_OTA_Packet"};
};

struct GroundTruth {
  std::uint64_t tfile_rows = 0;
  std::uint64_t tmsg_rows = 0;
  // Rows of tMsg JOIN tFile ON Filepath.
  std::uint64_t join_count = 0;
  std::uint64_t tfile_bytes = 0;
  std::uint64_t tmsg_bytes = 0;
  std::uint64_t seed = 0;

  nlohmann::json to_json() const;
  static GroundTruth from_json(const nlohmann::json& j);
};

// Writes tFile.csv, tMsg.csv and ground_truth.json into out_dir (created if
// missing). Output depends only on the GenSpec. Every tMsg.Filepath is one of
// the (unique) tFile paths, so the join count equals tmsg_rows.
GroundTruth generate(const GenSpec& spec, const std::filesystem::path& out_dir);

GroundTruth read_ground_truth(const std::filesystem::path& data_dir);

}  // namespace logq::bench
