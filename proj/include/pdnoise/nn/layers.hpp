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
#include <string>
#include <utility>
#include <vector>

#include "pdnoise/nn/tensor.hpp"
#include "pdnoise/rng.hpp"

namespace pdnoise::nn {

enum class Padding { kReplication, kZero };

const char* to_string(Padding p);
Padding padding_from_string(const std::string& s);

/// Output length of a k-wide window with k/2 padding on each side.
/// For stride 2 this is ceil(in / 2).
inline std::size_t conv_output_size(std::size_t in, std::size_t stride, std::size_t kernel = 3) {
  return (in + 2 * (kernel / 2) - kernel) / stride + 1;
}

/// 2-D cross-correlation with square kernel, "same"-style padding of k/2 and
/// stride 1 or 2. Weights are (out, in, k, k).
class Conv2d {
 public:
  Conv2d() = default;
  Conv2d(std::string name, std::size_t in_channels, std::size_t out_channels, std::size_t stride,
         Padding padding, std::size_t kernel = 3);

  Tensor forward(const Tensor& x) const;
  /// Accumulates parameter gradients and returns dL/dx.
  Tensor backward(const Tensor& x, const Tensor& grad_out);

  /// Uniform in +-sqrt(gain / fan_in); bias zero.
  void init(Rng& rng, double gain);

  std::size_t in_channels() const { return in_; }
  std::size_t out_channels() const { return out_; }
  std::size_t stride() const { return stride_; }
  std::size_t kernel() const { return kernel_; }
  Padding padding() const { return padding_; }

  Parameter weight;
  Parameter bias;

 private:
  std::size_t in_ = 0, out_ = 0, stride_ = 1, kernel_ = 3;
  Padding padding_ = Padding::kReplication;
};

/// Stride-2 transposed convolution with zero padding; the exact adjoint of a
/// zero-padded stride-2 Conv2d. Output size is 2H - 1 or 2H per axis, chosen
/// by the caller (output padding). Weights are (in, out, k, k).
class ConvTranspose2d {
 public:
  ConvTranspose2d() = default;
  ConvTranspose2d(std::string name, std::size_t in_channels, std::size_t out_channels, std::size_t kernel = 3);

  Tensor forward(const Tensor& x, std::size_t out_h, std::size_t out_w) const;
  Tensor backward(const Tensor& x, const Tensor& grad_out);
  void init(Rng& rng, double gain);

  std::size_t in_channels() const { return in_; }
  std::size_t out_channels() const { return out_; }
  std::size_t kernel() const { return kernel_; }

  Parameter weight;
  Parameter bias;

 private:
  std::size_t in_ = 0, out_ = 0, kernel_ = 3;
};

Tensor relu(const Tensor& x);
/// Gradient through ReLU given the forward output.
Tensor relu_backward(const Tensor& out, const Tensor& grad_out);

Tensor concat_channels(const Tensor& a, const Tensor& b);
/// Splits a channel-concatenated gradient back into its (a, b) parts.
std::pair<Tensor, Tensor> split_channels(const Tensor& grad, std::size_t a_channels);

/// sum |pred - target|.
double l1_loss(const Tensor& pred, const Tensor& target);
/// sign(pred - target), 0 where equal.
Tensor l1_loss_backward(const Tensor& pred, const Tensor& target);

}  // namespace pdnoise::nn
