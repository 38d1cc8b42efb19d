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

#include "pdnoise/predictor.hpp"

#include <algorithm>
#include <cmath>

#include "pdnoise/error.hpp"
#include "pdnoise/json_util.hpp"
#include "pdnoise/tns.hpp"

namespace pdnoise {

using nn::Tensor;

namespace {

constexpr double kReluGain = 6.0;    // He-uniform
constexpr double kLinearGain = 3.0;  // LeCun-uniform

}  // namespace

void validate_config(const ModelConfig& c) {
  if (c.m < 4 || c.n < 4) throw InvalidArgument("model config: m and n must be >= 4");
  if (c.bumps < 1) throw InvalidArgument("model config: need at least one bump channel");
  if (c.distance_channels < 1 || c.fusion_channels < 1 || c.noise_channels < 1) {
    throw InvalidArgument("model config: channel widths must be >= 1");
  }
  if (c.depth < 1) throw InvalidArgument("model config: depth must be >= 1");
  if (!(c.rate > 0.0 && c.rate < 1.0) || !(c.rate_step > 0.0)) {
    throw InvalidArgument("model config: compression rate must lie in (0, 1) with a positive step");
  }
}

nlohmann::json to_json(const ModelConfig& c) {
  nlohmann::json j = schema_header("model-config", kCheckpointSchemaMajor);
  j["m"] = c.m;
  j["n"] = c.n;
  j["bumps"] = c.bumps;
  j["distance_channels"] = c.distance_channels;
  j["fusion_channels"] = c.fusion_channels;
  j["noise_channels"] = c.noise_channels;
  j["depth"] = c.depth;
  j["fusion"] = {{"bypass_network", c.fusion_bypass}};
  j["rate"] = c.rate;
  j["rate_step"] = c.rate_step;
  j["seed"] = c.seed;
  return j;
}

ModelConfig model_config_from_json(const nlohmann::json& j) {
  check_schema(j, "model-config", kCheckpointSchemaMajor);
  ModelConfig c;
  auto opt = [&j](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::remove_reference_t<decltype(field)>>();
  };
  opt("m", c.m);
  opt("n", c.n);
  opt("bumps", c.bumps);
  opt("distance_channels", c.distance_channels);
  opt("fusion_channels", c.fusion_channels);
  opt("noise_channels", c.noise_channels);
  opt("depth", c.depth);
  if (j.contains("fusion")) c.fusion_bypass = j.at("fusion").value("bypass_network", false);
  opt("rate", c.rate);
  opt("rate_step", c.rate_step);
  opt("seed", c.seed);
  return c;
}

// ---------------------------------------------------------------------------
// UNet

UNet::UNet(const std::string& name, std::size_t in_channels, std::size_t width, std::size_t depth)
    : in_(in_channels), width_(width), depth_(depth) {
  using nn::Padding;
  for (std::size_t l = 0; l < depth; ++l) {
    const std::string lv = std::to_string(l);
    down_.emplace_back(name + ".down" + lv, l == 0 ? in_channels : width, width, 2, Padding::kReplication);
    down_refine_.emplace_back(name + ".down" + lv + "_refine", width, width, 1, Padding::kReplication);
    up_.emplace_back(name + ".up" + lv, width, width);
    const std::size_t skip_channels = l == 0 ? in_channels : width;
    up_refine_.emplace_back(name + ".up" + lv + "_refine", width + skip_channels, width, 1, Padding::kReplication);
  }
  head_ = nn::Conv2d(name + ".out", width, 1, 1, Padding::kReplication);
}

void UNet::init(Rng& rng) {
  for (std::size_t l = 0; l < depth_; ++l) {
    down_[l].init(rng, kReluGain);
    down_refine_[l].init(rng, kReluGain);
  }
  for (std::size_t l = depth_; l-- > 0;) {
    up_[l].init(rng, kReluGain);
    up_refine_[l].init(rng, kReluGain);
  }
  head_.init(rng, kLinearGain);
}

Tensor UNet::forward(const Tensor& x, Cache* cache) const {
  Cache local;
  Cache& c = cache ? *cache : local;
  c = Cache{};
  c.skip.push_back(x);
  Tensor h = x;
  for (std::size_t l = 0; l < depth_; ++l) {
    Tensor a = nn::relu(down_[l].forward(h));
    h = nn::relu(down_refine_[l].forward(a));
    c.down.push_back(std::move(a));
    c.skip.push_back(h);
  }
  c.up_in.resize(depth_);
  c.up.resize(depth_);
  c.cat.resize(depth_);
  c.refined.resize(depth_);
  for (std::size_t l = depth_; l-- > 0;) {
    const Tensor& skip = c.skip[l];
    c.up_in[l] = h;
    c.up[l] = nn::relu(up_[l].forward(h, skip.dim(2), skip.dim(3)));
    c.cat[l] = nn::concat_channels(c.up[l], skip);
    h = nn::relu(up_refine_[l].forward(c.cat[l]));
    c.refined[l] = h;
  }
  c.head_in = h;
  Tensor out = head_.forward(h);
  if (!cache) c = Cache{};
  return out;
}

Tensor UNet::backward(const Cache& c, const Tensor& grad_out) {
  Tensor g = head_.backward(c.head_in, grad_out);
  std::vector<Tensor> skip_grad(depth_ + 1);
  for (std::size_t l = 0; l < depth_; ++l) {
    g = nn::relu_backward(c.refined[l], g);
    g = up_refine_[l].backward(c.cat[l], g);
    auto [g_up, g_skip] = nn::split_channels(g, width_);
    skip_grad[l] = std::move(g_skip);
    g_up = nn::relu_backward(c.up[l], g_up);
    g = up_[l].backward(c.up_in[l], g_up);
  }
  for (std::size_t l = depth_; l-- > 0;) {
    if (l + 1 < depth_) {
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += skip_grad[l + 1][i];
    }
    g = nn::relu_backward(c.skip[l + 1], g);
    g = down_refine_[l].backward(c.down[l], g);
    g = nn::relu_backward(c.down[l], g);
    g = down_[l].backward(c.skip[l], g);
  }
  for (std::size_t i = 0; i < g.size(); ++i) g[i] += skip_grad[0][i];
  return g;
}

std::vector<nn::Parameter*> UNet::parameters() {
  std::vector<nn::Parameter*> p;
  auto add = [&p](auto& layer) {
    p.push_back(&layer.weight);
    p.push_back(&layer.bias);
  };
  for (std::size_t l = 0; l < depth_; ++l) {
    add(down_[l]);
    add(down_refine_[l]);
  }
  for (std::size_t l = depth_; l-- > 0;) {
    add(up_[l]);
    add(up_refine_[l]);
  }
  add(head_);
  return p;
}

std::vector<const nn::Conv2d*> UNet::convs() const {
  std::vector<const nn::Conv2d*> out;
  for (std::size_t l = 0; l < depth_; ++l) {
    out.push_back(&down_[l]);
    out.push_back(&down_refine_[l]);
  }
  for (std::size_t l = depth_; l-- > 0;) out.push_back(&up_refine_[l]);
  out.push_back(&head_);
  return out;
}

std::vector<const nn::ConvTranspose2d*> UNet::deconvs() const {
  std::vector<const nn::ConvTranspose2d*> out;
  for (std::size_t l = depth_; l-- > 0;) out.push_back(&up_[l]);
  return out;
}

// ---------------------------------------------------------------------------
// FusionNet

FusionNet::FusionNet(const std::string& name, std::size_t width)
    : enc(name + ".enc", 1, width, 2, nn::Padding::kReplication),
      enc_refine(name + ".enc_refine", width, width, 1, nn::Padding::kReplication),
      dec(name + ".dec", width, width),
      head(name + ".out", width, 1, 1, nn::Padding::kReplication) {}

void FusionNet::init(Rng& rng) {
  enc.init(rng, kReluGain);
  enc_refine.init(rng, kReluGain);
  dec.init(rng, kReluGain);
  head.init(rng, kLinearGain);
}

Tensor FusionNet::forward(const Tensor& maps, Cache* cache) const {
  Tensor e = nn::relu(enc.forward(maps));
  Tensor r = nn::relu(enc_refine.forward(e));
  Tensor d = nn::relu(dec.forward(r, maps.dim(2), maps.dim(3)));
  Tensor out = head.forward(d);
  if (cache) {
    cache->input = maps;
    cache->enc = std::move(e);
    cache->enc_refine = std::move(r);
    cache->dec = std::move(d);
  }
  return out;
}

Tensor FusionNet::backward(const Cache& c, const Tensor& grad_out) {
  Tensor g = head.backward(c.dec, grad_out);
  g = dec.backward(c.enc_refine, nn::relu_backward(c.dec, g));
  g = enc_refine.backward(c.enc, nn::relu_backward(c.enc_refine, g));
  return enc.backward(c.input, nn::relu_backward(c.enc, g));
}

std::vector<nn::Parameter*> FusionNet::parameters() {
  return {&enc.weight, &enc.bias, &enc_refine.weight, &enc_refine.bias,
          &dec.weight, &dec.bias, &head.weight,       &head.bias};
}

// ---------------------------------------------------------------------------
// Aggregation

FusedCurrents aggregate_maps(const Tensor& maps) {
  if (maps.rank() != 4 || maps.dim(1) != 1 || maps.dim(0) < 1) {
    throw InvalidArgument("aggregate: expected a nonempty (K, 1, m, n) stack, got " + nn::shape_string(maps.shape()));
  }
  const std::size_t K = maps.dim(0), H = maps.dim(2), W = maps.dim(3), plane = H * W;
  FusedCurrents f{Tensor({1, 1, H, W}), Tensor({1, 1, H, W}), Tensor({1, 1, H, W})};
  std::vector<double> column(K);
  const double count = static_cast<double>(K);
  for (std::size_t t = 0; t < plane; ++t) {
    for (std::size_t j = 0; j < K; ++j) column[j] = maps[j * plane + t];
    std::sort(column.begin(), column.end());
    double sum = 0.0;
    for (double v : column) sum += v;
    const double mean = sum / count;
    double sq = 0.0;
    for (double v : column) sq += (v - mean) * (v - mean);
    f.max[t] = column.back();
    f.mean[t] = 0.5 * (column.back() + column.front());
    f.msd[t] = mean + 3.0 * std::sqrt(sq / count);
  }
  return f;
}

Tensor aggregate_backward(const Tensor& maps, const FusedCurrents& grad) {
  const std::size_t K = maps.dim(0), plane = maps.dim(2) * maps.dim(3);
  const double count = static_cast<double>(K);
  Tensor g(maps.shape());
  for (std::size_t t = 0; t < plane; ++t) {
    std::size_t arg_max = 0, arg_min = 0;
    double sum = 0.0;
    for (std::size_t j = 0; j < K; ++j) {
      const double v = maps[j * plane + t];
      if (v > maps[arg_max * plane + t]) arg_max = j;
      if (v < maps[arg_min * plane + t]) arg_min = j;
      sum += v;
    }
    const double mean = sum / count;
    double sq = 0.0;
    for (std::size_t j = 0; j < K; ++j) {
      const double d = maps[j * plane + t] - mean;
      sq += d * d;
    }
    const double sigma = std::sqrt(sq / count);
    const double g_msd = grad.msd[t];
    for (std::size_t j = 0; j < K; ++j) {
      double v = g_msd / count;
      if (sigma > 0.0) v += g_msd * 3.0 * (maps[j * plane + t] - mean) / (count * sigma);
      g[j * plane + t] = v;
    }
    g[arg_max * plane + t] += grad.max[t] + 0.5 * grad.mean[t];
    g[arg_min * plane + t] += 0.5 * grad.mean[t];
  }
  return g;
}

// ---------------------------------------------------------------------------
// Model

Model::Model(const ModelConfig& config) : config_(config) {
  validate_config(config);
  distance_ = UNet("distance", config.bumps, config.distance_channels, config.depth);
  fusion_ = FusionNet("fusion", config.fusion_channels);
  noise_ = UNet("noise", 4, config.noise_channels, config.depth);
  Rng rng(config.seed);
  distance_.init(rng);
  fusion_.init(rng);
  noise_.init(rng);
}

Tensor distance_input(const DistanceTensor& d) {
  Tensor t({1, d.bumps, d.m, d.n});
  std::copy(d.values.begin(), d.values.end(), t.data());
  return t;
}

Tensor map_stack(const TileCurrentMaps& maps) {
  Tensor t({maps.stamps, 1, maps.m, maps.n});
  std::copy(maps.values.begin(), maps.values.end(), t.data());
  return t;
}

Tensor Model::distance_reduce(const Tensor& distance, UNet::Cache* cache) const {
  if (distance.rank() != 4 || distance.dim(1) != config_.bumps || distance.dim(2) != config_.m ||
      distance.dim(3) != config_.n) {
    throw ShapeMismatch("distance_reduce: expected (1, " + std::to_string(config_.bumps) + ", " +
                        std::to_string(config_.m) + ", " + std::to_string(config_.n) + "), got " +
                        nn::shape_string(distance.shape()));
  }
  return distance_.forward(distance, cache);
}

FusedCurrents Model::fuse_currents(const Tensor& maps, FusionNet::Cache* cache, Tensor* fused_maps) const {
  if (maps.rank() != 4 || maps.dim(0) < 1) throw InvalidArgument("fuse_currents: empty map sequence");
  if (maps.dim(1) != 1 || maps.dim(2) != config_.m || maps.dim(3) != config_.n) {
    throw ShapeMismatch("fuse_currents: map shape " + nn::shape_string(maps.shape()));
  }
  Tensor f = config_.fusion_bypass ? maps : fusion_.forward(maps, cache);
  FusedCurrents out = aggregate_maps(f);
  if (fused_maps) *fused_maps = std::move(f);
  return out;
}

Tensor Model::predict_noise(const Tensor& distance_reduced, const FusedCurrents& fused, UNet::Cache* cache,
                            Tensor* noise_in) const {
  const std::vector<std::size_t> plane{1, 1, config_.m, config_.n};
  for (const Tensor* t : {&distance_reduced, &fused.max, &fused.mean, &fused.msd}) {
    if (t->shape() != plane) throw ShapeMismatch("predict_noise: feature map shape " + nn::shape_string(t->shape()));
  }
  Tensor x = nn::concat_channels(nn::concat_channels(distance_reduced, fused.max),
                                 nn::concat_channels(fused.mean, fused.msd));
  Tensor out = noise_.forward(x, cache);
  if (noise_in) *noise_in = std::move(x);
  return out;
}

void Model::check_input(const Sample& raw) const {
  check_sample(raw);
  if (!normalization.fitted) throw InvalidArgument("model: normalization statistics are missing");
  if (raw.distance->bumps != config_.bumps) {
    throw ShapeMismatch("model: sample has " + std::to_string(raw.distance->bumps) + " bumps, model expects " +
                        std::to_string(config_.bumps));
  }
  if (raw.maps.m != config_.m || raw.maps.n != config_.n) throw ShapeMismatch("model: tiling mismatch");
}

NoiseMap Model::forward(const Sample& raw, Trace* trace) const {
  check_input(raw);
  Tensor dist = distance_input(*raw.distance);
  for (auto& v : dist.values()) v *= normalization.distance_scale;
  Tensor maps = map_stack(raw.maps);
  for (auto& v : maps.values()) v *= normalization.current_scale;

  Trace local;
  Trace& t = trace ? *trace : local;
  const bool keep = trace != nullptr;
  t.distance_out = distance_reduce(dist, keep ? &t.distance : nullptr);
  t.fused = fuse_currents(maps, keep && !config_.fusion_bypass ? &t.fusion : nullptr, keep ? &t.fused_maps : nullptr);
  t.out = predict_noise(t.distance_out, t.fused, keep ? &t.noise : nullptr, keep ? &t.noise_in : nullptr);

  NoiseMap v(config_.m, config_.n);
  for (std::size_t i = 0; i < v.values.size(); ++i) v.values[i] = normalization.noise_scale * t.out[i];
  return v;
}

double Model::loss(const Sample& raw) const {
  if (!raw.truth) throw InvalidArgument("loss: sample has no ground truth");
  const NoiseMap v = forward(raw);
  double s = 0.0;
  for (std::size_t i = 0; i < v.values.size(); ++i) s += std::abs(v.values[i] - raw.truth->values[i]);
  return s;
}

double Model::accumulate_gradients(const Sample& raw, double weight) {
  if (!raw.truth) throw InvalidArgument("accumulate_gradients: sample has no ground truth");
  Trace t;
  const NoiseMap v = forward(raw, &t);
  Tensor g_out(t.out.shape());
  double loss = 0.0;
  for (std::size_t i = 0; i < v.values.size(); ++i) {
    const double d = v.values[i] - raw.truth->values[i];
    loss += std::abs(d);
    g_out[i] = weight * normalization.noise_scale * (d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0));
  }
  const Tensor g_in = noise_.backward(t.noise, g_out);
  const std::size_t plane = config_.m * config_.n;
  FusedCurrents g_fused{Tensor({1, 1, config_.m, config_.n}), Tensor({1, 1, config_.m, config_.n}),
                        Tensor({1, 1, config_.m, config_.n})};
  Tensor g_dist({1, 1, config_.m, config_.n});
  std::copy_n(g_in.data(), plane, g_dist.data());
  std::copy_n(g_in.data() + plane, plane, g_fused.max.data());
  std::copy_n(g_in.data() + 2 * plane, plane, g_fused.mean.data());
  std::copy_n(g_in.data() + 3 * plane, plane, g_fused.msd.data());
  distance_.backward(t.distance, g_dist);
  if (!config_.fusion_bypass) {
    fusion_.backward(t.fusion, aggregate_backward(t.fused_maps, g_fused));
  }
  return loss;
}

std::vector<nn::Parameter*> Model::parameters() {
  auto p = distance_.parameters();
  for (auto* q : fusion_.parameters()) p.push_back(q);
  for (auto* q : noise_.parameters()) p.push_back(q);
  return p;
}

std::vector<const nn::Parameter*> Model::parameters() const {
  auto mutable_params = const_cast<Model*>(this)->parameters();
  return {mutable_params.begin(), mutable_params.end()};
}

void Model::zero_grad() {
  for (auto* p : parameters()) p->zero_grad();
}

nlohmann::json Model::layer_manifest() const {
  auto layers = nlohmann::json::array();
  auto conv_entry = [](const nn::Conv2d& c) {
    return nlohmann::json{{"name", c.weight.name.substr(0, c.weight.name.size() - 7)},
                          {"kind", "conv"},
                          {"in_channels", c.in_channels()},
                          {"out_channels", c.out_channels()},
                          {"kernel", c.kernel()},
                          {"stride", c.stride()},
                          {"padding", nn::to_string(c.padding())}};
  };
  auto deconv_entry = [](const nn::ConvTranspose2d& d) {
    return nlohmann::json{{"name", d.weight.name.substr(0, d.weight.name.size() - 7)},
                          {"kind", "deconv"},
                          {"in_channels", d.in_channels()},
                          {"out_channels", d.out_channels()},
                          {"kernel", d.kernel()},
                          {"stride", 2},
                          {"padding", "zero"}};
  };
  for (const auto* c : distance_.convs()) layers.push_back(conv_entry(*c));
  for (const auto* d : distance_.deconvs()) layers.push_back(deconv_entry(*d));
  layers.push_back(conv_entry(fusion_.enc));
  layers.push_back(conv_entry(fusion_.enc_refine));
  layers.push_back(deconv_entry(fusion_.dec));
  layers.push_back(conv_entry(fusion_.head));
  for (const auto* c : noise_.convs()) layers.push_back(conv_entry(*c));
  for (const auto* d : noise_.deconvs()) layers.push_back(deconv_entry(*d));
  return layers;
}

void save_model(const Model& model, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  nlohmann::json j = schema_header("pdnoise-checkpoint", kCheckpointSchemaMajor);
  j["config"] = to_json(model.config());
  const auto& norm = model.normalization;
  j["normalization"] = {{"fitted", norm.fitted},
                        {"current_scale", norm.current_scale},
                        {"distance_scale", norm.distance_scale},
                        {"noise_scale", norm.noise_scale}};
  j["layers"] = model.layer_manifest();
  auto params = nlohmann::json::array();
  for (const auto* p : model.parameters()) {
    const std::string file = p->name + ".tns";
    std::vector<std::uint32_t> dims;
    for (auto d : p->value.shape()) dims.push_back(static_cast<std::uint32_t>(d));
    tns::write_f64(dir / file, dims, p->value.values());
    params.push_back({{"name", p->name}, {"file", file}, {"shape", p->value.shape()}});
  }
  j["parameters"] = std::move(params);
  write_json(dir / "manifest.json", j);
}

Model load_model(const std::filesystem::path& dir) {
  const auto j = read_json(dir / "manifest.json");
  check_schema(j, "pdnoise-checkpoint", kCheckpointSchemaMajor);
  Model model(model_config_from_json(j.at("config")));
  const auto& nj = j.at("normalization");
  model.normalization.fitted = nj.at("fitted").get<bool>();
  model.normalization.current_scale = nj.at("current_scale").get<double>();
  model.normalization.distance_scale = nj.at("distance_scale").get<double>();
  model.normalization.noise_scale = nj.at("noise_scale").get<double>();

  auto params = model.parameters();
  const auto& entries = j.at("parameters");
  if (entries.size() != params.size()) {
    throw FormatError("checkpoint lists " + std::to_string(entries.size()) + " parameters, model has " +
                      std::to_string(params.size()));
  }
  for (std::size_t k = 0; k < params.size(); ++k) {
    const auto& e = entries[k];
    if (e.at("name").get<std::string>() != params[k]->name) {
      throw FormatError("checkpoint parameter " + std::to_string(k) + " is '" + e.at("name").get<std::string>() +
                        "', expected '" + params[k]->name + "'");
    }
    auto t = tns::read(dir / e.at("file").get<std::string>());
    std::vector<std::size_t> shape(t.dims.begin(), t.dims.end());
    if (shape != params[k]->value.shape()) {
      throw FormatError("checkpoint parameter " + params[k]->name + " has shape " + nn::shape_string(shape));
    }
    std::copy(t.values.begin(), t.values.end(), params[k]->value.data());
  }
  return model;
}

}  // namespace pdnoise
