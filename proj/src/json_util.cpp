// Copyright 2026 The pdnoise Authors.
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

#include "pdnoise/json_util.hpp"

#include <cstdio>
#include <fstream>

#include "pdnoise/error.hpp"

namespace pdnoise {

nlohmann::json schema_header(std::string_view format, int major, int minor) {
  return {{"format", std::string(format)},
          {"version", std::to_string(major) + "." + std::to_string(minor)}};
}

void check_schema(const nlohmann::json& j, std::string_view format, int major) {
  if (!j.is_object() || !j.contains("format") || !j.contains("version")) {
    throw FormatError("missing format/version header (expected " + std::string(format) + ")");
  }
  if (j.at("format").get<std::string>() != format) {
    throw FormatError("expected format '" + std::string(format) + "', got '" +
                      j.at("format").get<std::string>() + "'");
  }
  const auto version = j.at("version").get<std::string>();
  int file_major = 0;
  if (std::sscanf(version.c_str(), "%d", &file_major) != 1) {
    throw FormatError("unparseable version '" + version + "'");
  }
  if (file_major > major) {
    throw FormatError(std::string(format) + " version " + version +
                      " is newer than supported major " + std::to_string(major));
  }
  if (file_major < 1) throw FormatError("invalid version '" + version + "'");
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  write_text(path, j.dump(2) + "\n");
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error("write failed: " + path.string());
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace pdnoise
