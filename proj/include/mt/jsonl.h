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

#ifndef MT_JSONL_H_
#define MT_JSONL_H_

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

namespace mt {

using Json = nlohmann::json;

// Reads one JSON object per non-empty line. Throws kIo when the file cannot
// be opened and kInvalidArgument (with the line number) on malformed lines.
std::vector<Json> ReadJsonl(const std::filesystem::path& path);

// Writes records with LF line endings, replacing the file.
void WriteJsonl(const std::filesystem::path& path,
                const std::vector<Json>& records);

// Appends one record and flushes before returning.
void AppendJsonl(const std::filesystem::path& path, const Json& record);

std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, const std::string& contents);

}  // namespace mt

#endif  // MT_JSONL_H_
