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

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "pdnoise/features.hpp"
#include "pdnoise/nn/layers.hpp"
#include "pdnoise/nn/tensor.hpp"

namespace pdnoise {

struct ModelConfig {
  std::size_t m = 0;
  std::size_t n = 0;
  std::size_t bumps = 0;
  std::size_t distance_channels = 8;  // C1
  std::size_t fusion_channels = 8;    // C2
  std::size_t noise_channels = 16;    // C3
  std::size_t depth = 2;              // stride-2 levels of both U-Nets
  /// Feed the normalized current maps straight into the aggregation instead
  /// of the learned encoder-decoder.
  bool fusion_bypass = false;
  /// Temporal compression applied to raw traces at inference.
  double rate = 0.3;
  double rate_step = 0.05;
  std::uint64_t seed = 1;

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

void validate_config(const ModelConfig& config);
nlohmann::json to_json(const ModelConfig& config);
ModelConfig model_config_from_json(const nlohmann::json& j);

/// U-Net: per level a stride-2 conv and a stride-1 conv, mirrored by a
/// stride-2 deconv and a stride-1 conv over [upsampled, skip] channels, then a
/// linear single-kernel output conv. Convs use replication padding, deconvs
/// zero padding; every layer but the output is followed by ReLU.
class UNet {
 public:
  struct Cache {
    std::vector<nn::Tensor> skip;        // skip[0] = input, skip[l+1] = level l output
    std::vector<nn::Tensor> down;        // after stride-2 conv + ReLU
    std::vector<nn::Tensor> up_in;       // input of each deconv
    std::vector<nn::Tensor> up;          // after deconv + ReLU
    std::vector<nn::Tensor> cat;         // [up, skip]
    std::vector<nn::Tensor> refined;     // after the stride-1 conv + ReLU of each up level
    nn::Tensor head_in;
  };

  UNet() = default;
  UNet(const std::string& name, std::size_t in_channels, std::size_t width, std::size_t depth);

  nn::Tensor forward(const nn::Tensor& x, Cache* cache) const;
  /// Accumulates parameter gradients; returns dL/dx.
  nn::Tensor backward(const Cache& cache, const nn::Tensor& grad_out);

  std::vector<nn::Parameter*> parameters();
  std::vector<const nn::Conv2d*> convs() const;
  std::vector<const nn::ConvTranspose2d*> deconvs() const;
  void init(Rng& rng);
  std::size_t in_channels() const { return in_; }

 private:
  std::size_t in_ = 0, width_ = 0, depth_ = 0;
  std::vector<nn::Conv2d> down_, down_refine_, up_refine_;
  std::vector<nn::ConvTranspose2d> up_;
  nn::Conv2d head_;
};

/// Four-layer single-channel encoder-decoder applied to each current map.
class FusionNet {
 public:
  struct Cache {
    nn::Tensor input, enc, enc_refine, dec;
  };

  FusionNet() = default;
  FusionNet(const std::string& name, std::size_t width);

  nn::Tensor forward(const nn::Tensor& maps, Cache* cache) const;
  nn::Tensor backward(const Cache& cache, const nn::Tensor& grad_out);
  std::vector<nn::Parameter*> parameters();
  void init(Rng& rng);

  nn::Conv2d enc, enc_refine;
  nn::ConvTranspose2d dec;
  nn::Conv2d head;
};

/// Per-tile temporal statistics of the fused maps.
struct FusedCurrents {
  nn::Tensor max;   // (1, 1, m, n)
  nn::Tensor mean;  // (max + min) / 2
  nn::Tensor msd;   // mean + 3 * population std
};

/// Aggregates a (K, 1, m, n) stack. Exactly invariant to the order of the K
/// maps: extrema are order-free and sums run over per-tile sorted values.
FusedCurrents aggregate_maps(const nn::Tensor& maps);
/// Gradient of the aggregation w.r.t. the stack.
nn::Tensor aggregate_backward(const nn::Tensor& maps, const FusedCurrents& grad);

/// The three-subnet worst-case noise model. Inputs are raw samples (A, um);
/// normalization is applied internally and outputs are volts.
class Model {
 public:
  struct Trace {
    UNet::Cache distance;
    nn::Tensor distance_out;  // D~
    FusionNet::Cache fusion;
    nn::Tensor fused_maps;    // F[j]
    FusedCurrents fused;
    nn::Tensor noise_in;      // [D~, I_max, I_mean, I_msd]
    UNet::Cache noise;
    nn::Tensor out;           // network units
  };

  explicit Model(const ModelConfig& config);

  const ModelConfig& config() const { return config_; }
  Normalization normalization;

  /// D~ from a normalized (1, B, m, n) distance tensor.
  nn::Tensor distance_reduce(const nn::Tensor& distance, UNet::Cache* cache = nullptr) const;
  /// Fused statistics from a normalized (K, 1, m, n) map stack.
  FusedCurrents fuse_currents(const nn::Tensor& maps, FusionNet::Cache* cache = nullptr,
                              nn::Tensor* fused_maps = nullptr) const;
  /// Noise map in network units from the four (1, 1, m, n) feature maps.
  nn::Tensor predict_noise(const nn::Tensor& distance_reduced, const FusedCurrents& fused,
                           UNet::Cache* cache = nullptr, nn::Tensor* noise_in = nullptr) const;

  /// Full forward pass; fills `trace` when given.
  NoiseMap forward(const Sample& raw, Trace* trace = nullptr) const;

  /// L = sum over tiles of |v - v_hat| in volts for one sample, and adds
  /// weight * dL/dtheta into every Parameter::grad.
  double accumulate_gradients(const Sample& raw, double weight);
  /// Loss only.
  double loss(const Sample& raw) const;

  std::vector<nn::Parameter*> parameters();
  std::vector<const nn::Parameter*> parameters() const;
  void zero_grad();

  UNet& distance_net() { return distance_; }
  FusionNet& fusion_net() { return fusion_; }
  UNet& noise_net() { return noise_; }

  /// Layer manifest entries for checkpoints.
  nlohmann::json layer_manifest() const;

 private:
  void check_input(const Sample& raw) const;

  ModelConfig config_;
  UNet distance_;
  FusionNet fusion_;
  UNet noise_;
};

/// Tensor views of sample data.
nn::Tensor distance_input(const DistanceTensor& d);
nn::Tensor map_stack(const TileCurrentMaps& maps);

inline constexpr int kCheckpointSchemaMajor = 1;

/// Directory with manifest.json plus one .tns blob per parameter.
void save_model(const Model& model, const std::filesystem::path& dir);
Model load_model(const std::filesystem::path& dir);

}  // namespace pdnoise
