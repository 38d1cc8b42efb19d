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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pdnoise {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  /// Short machine-readable category, used in the CLI's error JSON.
  virtual const char* kind() const noexcept { return "error"; }
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "invalid_argument"; }
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "shape_mismatch"; }
};

/// Raised when a Cholesky pivot is not strictly positive.
class NotSpd : public Error {
 public:
  NotSpd(std::size_t node, double pivot)
      : Error("matrix is not SPD: non-positive pivot " + std::to_string(pivot) +
              " at node " + std::to_string(node)),
        node_(node),
        pivot_(pivot) {}
  const char* kind() const noexcept override { return "not_spd"; }
  std::size_t node() const noexcept { return node_; }
  double pivot() const noexcept { return pivot_; }

 private:
  std::size_t node_;
  double pivot_;
};

class InvalidRate : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "invalid_rate"; }
};

class FormatError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "format_error"; }
};

class TrainingDiverged : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "training_diverged"; }
};

}  // namespace pdnoise
