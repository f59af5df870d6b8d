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

#include "logq/service/templates.hpp"

namespace logq::service {

const std::vector<std::string>& query_templates() {
  static const std::vector<std::string> templates = {
      "SELECT * FROM tFile;",
      "SELECT * FROM tMsg;",
      "SELECT Filepath, Phone, Carrier, Timestamp FROM tFile;",
      "SELECT Filepath, Timestamp, MsgType, MsgHash, MsgPath, LineNo FROM tMsg;",
      "SELECT * FROM tFile LIMIT 10;",
      "SELECT * FROM tMsg LIMIT 10;",
      "SELECT Phone, Carrier FROM tFile LIMIT 10;",
  };
  return templates;
}

}  // namespace logq::service
