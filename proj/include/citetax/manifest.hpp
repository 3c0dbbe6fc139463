// Copyright 2026 The citetax Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CITETAX_MANIFEST_HPP_
#define CITETAX_MANIFEST_HPP_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace citetax {

inline constexpr const char* kToolVersion = "0.1.0";

// What produced an output directory. Written as manifest.json; the
// started_at and wall_seconds fields are the only run-dependent values.
struct RunManifest {
  std::string command;
  std::map<std::string, std::string> config;
  std::vector<std::filesystem::path> inputs;
  std::optional<std::uint64_t> seed;
  std::chrono::system_clock::time_point started_at = std::chrono::system_clock::now();
};

// Lowercase hex SHA-256 of a file's bytes. Throws DataError if unreadable.
std::string sha256_file(const std::filesystem::path& path);

// Writes `<dir>/manifest.json`. Directory inputs are digested file by file.
void write_manifest(const std::filesystem::path& dir, const RunManifest& manifest);

}  // namespace citetax

#endif  // CITETAX_MANIFEST_HPP_
