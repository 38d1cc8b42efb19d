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

#include "pdnoise/tns.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "pdnoise/error.hpp"

namespace pdnoise::tns {
namespace {

static_assert(std::endian::native == std::endian::little,
              "tns encoding assumes a little-endian host");

constexpr char kMagic[4] = {'T', 'N', 'S', '1'};

void put_u32(std::string& out, std::uint32_t v) {
  char buf[4];
  std::memcpy(buf, &v, 4);
  out.append(buf, 4);
}

std::uint32_t get_u32(std::string_view bytes, std::size_t& pos) {
  if (pos + 4 > bytes.size()) throw FormatError("tns: truncated header");
  std::uint32_t v;
  std::memcpy(&v, bytes.data() + pos, 4);
  pos += 4;
  return v;
}

}  // namespace

std::size_t Tensor::element_count() const {
  std::size_t n = 1;
  for (auto d : dims) n *= d;
  return n;
}

std::string encode(const Tensor& t) {
  if (t.values.size() != t.element_count()) {
    throw ShapeMismatch("tns: value count " + std::to_string(t.values.size()) +
                        " does not match dims product " +
                        std::to_string(t.element_count()));
  }
  std::string out;
  out.reserve(12 + 4 * t.dims.size() + t.values.size() * dtype_size(t.dtype));
  out.append(kMagic, 4);
  put_u32(out, static_cast<std::uint32_t>(t.dtype));
  put_u32(out, static_cast<std::uint32_t>(t.dims.size()));
  for (auto d : t.dims) put_u32(out, d);
  if (t.dtype == DType::kF64) {
    out.append(reinterpret_cast<const char*>(t.values.data()), t.values.size() * 8);
  } else {
    for (double v : t.values) {
      const float f = static_cast<float>(v);
      char buf[4];
      std::memcpy(buf, &f, 4);
      out.append(buf, 4);
    }
  }
  return out;
}

Tensor decode(std::string_view bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw FormatError("tns: bad magic (expected TNS1)");
  }
  std::size_t pos = 4;
  Tensor t;
  const auto code = get_u32(bytes, pos);
  if (code != 1 && code != 2) {
    throw FormatError("tns: unknown dtype code " + std::to_string(code));
  }
  t.dtype = static_cast<DType>(code);
  const auto ndim = get_u32(bytes, pos);
  if (ndim > 16) throw FormatError("tns: implausible ndim " + std::to_string(ndim));
  t.dims.resize(ndim);
  for (auto& d : t.dims) d = get_u32(bytes, pos);
  const std::size_t count = t.element_count();
  const std::size_t payload = count * dtype_size(t.dtype);
  if (bytes.size() - pos != payload) {
    throw FormatError("tns: payload is " + std::to_string(bytes.size() - pos) +
                      " bytes, expected " + std::to_string(payload));
  }
  t.values.resize(count);
  if (t.dtype == DType::kF64) {
    std::memcpy(t.values.data(), bytes.data() + pos, payload);
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      float f;
      std::memcpy(&f, bytes.data() + pos + 4 * i, 4);
      t.values[i] = f;
    }
  }
  return t;
}

void write(const std::filesystem::path& path, const Tensor& t) {
  const std::string bytes = encode(t);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write failed: " + path.string());
}

Tensor read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return decode(bytes);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_f64(const std::filesystem::path& path, std::vector<std::uint32_t> dims,
               std::span<const double> values) {
  Tensor t;
  t.dims = std::move(dims);
  t.values.assign(values.begin(), values.end());
  write(path, t);
}

}  // namespace pdnoise::tns
