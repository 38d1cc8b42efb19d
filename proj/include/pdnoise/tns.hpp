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

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pdnoise::tns {

// Binary tensor container, version 1.
//
//   offset 0   4 bytes   magic "TNS1"
//   offset 4   u32       dtype code (1 = f32, 2 = f64)
//   offset 8   u32       ndim
//   offset 12  u32[ndim] dims
//   ...        payload   row-major, product(dims) elements
//
// All integers and floats are little-endian. A different magic (including a
// newer "TNS2") or an unknown dtype is rejected.

enum class DType : std::uint32_t { kF32 = 1, kF64 = 2 };

inline constexpr std::size_t dtype_size(DType d) { return d == DType::kF32 ? 4 : 8; }

struct Tensor {
  DType dtype = DType::kF64;
  std::vector<std::uint32_t> dims;
  std::vector<double> values;

  std::size_t element_count() const;
};

std::string encode(const Tensor& t);
Tensor decode(std::string_view bytes);

void write(const std::filesystem::path& path, const Tensor& t);
Tensor read(const std::filesystem::path& path);

/// Convenience for the common f64 case.
void write_f64(const std::filesystem::path& path, std::vector<std::uint32_t> dims,
               std::span<const double> values);

}  // namespace pdnoise::tns
