//
// Copyright 2026 The mtbench Authors
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
//

#include "mt/jsonl.h"

#include <fstream>
#include <sstream>

#include "mt/error.h"

namespace mt {

std::vector<Json> ReadJsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<Json> records;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      records.push_back(Json::parse(line));
    } catch (const Json::parse_error& e) {
      Fail(ErrorCode::kInvalidArgument, path.string() + ":" +
                                            std::to_string(line_number) +
                                            ": " + e.what());
    }
  }
  return records;
}

void WriteJsonl(const std::filesystem::path& path,
                const std::vector<Json>& records) {
  std::ostringstream out;
  for (const Json& record : records) out << record.dump() << '\n';
  WriteFile(path, out.str());
}

void AppendJsonl(const std::filesystem::path& path, const Json& record) {
  std::ofstream out(path, std::ios::app | std::ios::binary);
  if (!out) Fail(ErrorCode::kIo, "cannot append to " + path.string());
  out << record.dump() << '\n';
  out.flush();
  if (!out) Fail(ErrorCode::kIo, "write failed for " + path.string());
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteFile(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorCode::kIo, "cannot write " + path.string());
  out << contents;
  if (!out) Fail(ErrorCode::kIo, "write failed for " + path.string());
}

}  // namespace mt
