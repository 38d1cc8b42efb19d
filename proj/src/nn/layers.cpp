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

#include "pdnoise/nn/layers.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "pdnoise/error.hpp"

namespace pdnoise::nn {
namespace {

// Target width of one im2col panel, in columns.
constexpr std::size_t kPanelColumns = 1024;

// Sliding-window geometry between an "image" (in_h x in_w) and the grid of
// window positions (out_h x out_w).
struct Window {
  std::size_t in_h, in_w, out_h, out_w, stride, kernel;
  Padding padding;

  std::size_t positions() const { return out_h * out_w; }
  std::size_t pixels() const { return in_h * in_w; }

  // Source pixel for window offset `off` at position `o` along an axis, or -1.
  long source(std::size_t o, std::size_t off, std::size_t extent) const {
    const long i = static_cast<long>(o * stride + off) - static_cast<long>(kernel / 2);
    if (i >= 0 && i < static_cast<long>(extent)) return i;
    if (padding == Padding::kZero) return -1;
    return std::clamp<long>(i, 0, static_cast<long>(extent) - 1);
  }
};

struct AxisTable {
  std::vector<long> row;  // [offset * out_h + oy]
  std::vector<long> col;  // [offset * out_w + ox]
  // Per column offset, the window positions [lo, hi) whose source pixel
  // lo * stride + offset - k/2 .. lies inside the image (no padding needed).
  std::vector<std::size_t> col_lo, col_hi;
};

AxisTable make_table(const Window& g) {
  AxisTable t;
  t.row.resize(g.kernel * g.out_h);
  t.col.resize(g.kernel * g.out_w);
  t.col_lo.resize(g.kernel);
  t.col_hi.resize(g.kernel);
  const long half = static_cast<long>(g.kernel / 2);
  for (std::size_t k = 0; k < g.kernel; ++k) {
    for (std::size_t o = 0; o < g.out_h; ++o) t.row[k * g.out_h + o] = g.source(o, k, g.in_h);
    for (std::size_t o = 0; o < g.out_w; ++o) t.col[k * g.out_w + o] = g.source(o, k, g.in_w);
    std::size_t lo = 0;
    while (lo < g.out_w && static_cast<long>(lo * g.stride + k) - half < 0) ++lo;
    std::size_t hi = lo;
    while (hi < g.out_w && static_cast<long>(hi * g.stride + k) - half < static_cast<long>(g.in_w)) ++hi;
    t.col_lo[k] = lo;
    t.col_hi[k] = hi;
  }
  return t;
}

// Gathers one output row of window positions from an image row.
void gather_row(const double* src, const Window& g, const AxisTable& t, std::size_t kx, double* d) {
  const long* col = t.col.data() + kx * g.out_w;
  const std::size_t lo = t.col_lo[kx], hi = t.col_hi[kx];
  for (std::size_t ox = 0; ox < lo; ++ox) d[ox] = col[ox] < 0 ? 0.0 : src[col[ox]];
  if (hi > lo) {
    const double* s = src + (lo * g.stride + kx - g.kernel / 2);
    if (g.stride == 1) {
      std::copy_n(s, hi - lo, d + lo);
    } else {
      for (std::size_t ox = lo; ox < hi; ++ox) d[ox] = s[(ox - lo) * 2];
    }
  }
  for (std::size_t ox = std::max(lo, hi); ox < g.out_w; ++ox) d[ox] = col[ox] < 0 ? 0.0 : src[col[ox]];
}

void scatter_row_add(const double* sv, const Window& g, const AxisTable& t, std::size_t kx, double* dst) {
  const long* col = t.col.data() + kx * g.out_w;
  const std::size_t lo = t.col_lo[kx], hi = t.col_hi[kx];
  for (std::size_t ox = 0; ox < lo; ++ox) {
    if (col[ox] >= 0) dst[col[ox]] += sv[ox];
  }
  if (hi > lo) {
    double* d = dst + (lo * g.stride + kx - g.kernel / 2);
    if (g.stride == 1) {
      for (std::size_t ox = lo; ox < hi; ++ox) d[ox - lo] += sv[ox];
    } else {
      for (std::size_t ox = lo; ox < hi; ++ox) d[(ox - lo) * 2] += sv[ox];
    }
  }
  for (std::size_t ox = std::max(lo, hi); ox < g.out_w; ++ox) {
    if (col[ox] >= 0) dst[col[ox]] += sv[ox];
  }
}

// cols[(c, ky, kx)][s * P + p] for `count` samples of a (., channels, in_h, in_w) tensor.
void im2col(const double* x, std::size_t channels, std::size_t count, const Window& g, const AxisTable& t,
            double* cols) {
  const std::size_t kk = g.kernel;
  const std::size_t P = g.positions();
  const std::size_t Q = count * P;
  for (std::size_t c = 0; c < channels; ++c) {
    for (std::size_t ky = 0; ky < kk; ++ky) {
      for (std::size_t kx = 0; kx < kk; ++kx) {
        double* dst = cols + ((c * kk + ky) * kk + kx) * Q;
        for (std::size_t s = 0; s < count; ++s) {
          const double* img = x + (s * channels + c) * g.pixels();
          for (std::size_t oy = 0; oy < g.out_h; ++oy) {
            const long iy = t.row[ky * g.out_h + oy];
            double* d = dst + s * P + oy * g.out_w;
            if (iy < 0) {
              std::fill(d, d + g.out_w, 0.0);
            } else {
              gather_row(img + static_cast<std::size_t>(iy) * g.in_w, g, t, kx, d);
            }
          }
        }
      }
    }
  }
}

// Adjoint of im2col: accumulates columns back onto the image.
void col2im_add(const double* cols, std::size_t channels, std::size_t count, const Window& g,
                const AxisTable& t, double* x) {
  const std::size_t kk = g.kernel;
  const std::size_t P = g.positions();
  const std::size_t Q = count * P;
  for (std::size_t c = 0; c < channels; ++c) {
    for (std::size_t ky = 0; ky < kk; ++ky) {
      for (std::size_t kx = 0; kx < kk; ++kx) {
        const double* src_row = cols + ((c * kk + ky) * kk + kx) * Q;
        for (std::size_t s = 0; s < count; ++s) {
          double* img = x + (s * channels + c) * g.pixels();
          for (std::size_t oy = 0; oy < g.out_h; ++oy) {
            const long iy = t.row[ky * g.out_h + oy];
            if (iy < 0) continue;
            scatter_row_add(src_row + s * P + oy * g.out_w, g, t, kx,
                            img + static_cast<std::size_t>(iy) * g.in_w);
          }
        }
      }
    }
  }
}

using v8d = double __attribute__((vector_size(64), aligned(8)));

constexpr std::size_t kTileCols = 16;

v8d load8(const double* p) { return *reinterpret_cast<const v8d*>(p); }
void store8(double* p, v8d v) { *reinterpret_cast<v8d*>(p) = v; }

// Rows x 16 output tile, accumulated over r in ascending order.
template <std::size_t Rows>
void axpy_tile(std::size_t R, const double* a, std::size_t rs, std::size_t cs, const double* b, std::size_t ldb,
               double* out, std::size_t ldo) {
  v8d acc[Rows][2] = {};
  for (std::size_t r = 0; r < R; ++r) {
    const v8d b0 = load8(b + r * ldb);
    const v8d b1 = load8(b + r * ldb + 8);
    for (std::size_t i = 0; i < Rows; ++i) {
      const double c = a[i * rs + r * cs];
      acc[i][0] += c * b0;
      acc[i][1] += c * b1;
    }
  }
  for (std::size_t i = 0; i < Rows; ++i) {
    store8(out + i * ldo, acc[i][0]);
    store8(out + i * ldo + 8, acc[i][1]);
  }
}

void axpy_columns(std::size_t M, std::size_t R, const double* a, std::size_t rs, std::size_t cs, const double* b,
                  std::size_t ldb, double* out, std::size_t ldo) {
  std::size_t i = 0;
  for (; i + 4 <= M; i += 4) axpy_tile<4>(R, a + i * rs, rs, cs, b, ldb, out + i * ldo, ldo);
  switch (M - i) {
    case 3: axpy_tile<3>(R, a + i * rs, rs, cs, b, ldb, out + i * ldo, ldo); break;
    case 2: axpy_tile<2>(R, a + i * rs, rs, cs, b, ldb, out + i * ldo, ldo); break;
    case 1: axpy_tile<1>(R, a + i * rs, rs, cs, b, ldb, out + i * ldo, ldo); break;
    default: break;
  }
}

// out[i][q] = sum_r a(i, r) * b[r][q], a(i, r) = a[i * rs + r * cs]. Every
// column goes through the same 16-wide tile (the ragged end is zero-padded),
// so a result does not depend on where its column sits in the panel.
void product_axpy(std::size_t M, std::size_t R, std::size_t Q, const double* a, std::size_t rs, std::size_t cs,
                  const double* b, double* out) {
  const std::size_t full = Q - Q % kTileCols;
  for (std::size_t q0 = 0; q0 < full; q0 += kTileCols) axpy_columns(M, R, a, rs, cs, b + q0, Q, out + q0, Q);
  if (full == Q) return;
  const std::size_t w = Q - full;
  std::vector<double> pad_b(R * kTileCols, 0.0), pad_out(M * kTileCols);
  for (std::size_t r = 0; r < R; ++r) std::copy_n(b + r * Q + full, w, pad_b.data() + r * kTileCols);
  axpy_columns(M, R, a, rs, cs, pad_b.data(), kTileCols, pad_out.data(), kTileCols);
  for (std::size_t i = 0; i < M; ++i) std::copy_n(pad_out.data() + i * kTileCols, w, out + i * Q + full);
}

// out[i][r] += sum_q a[i][q] * b[r][q] with eight fixed lanes (lane j takes
// q = j mod 8 in order), reduced pairwise, then the ragged tail in order.
void product_dot_add(std::size_t M, std::size_t R, std::size_t Q, const double* a, const double* b,
                     double* out) {
  const std::size_t body = Q - Q % 8;
  auto finish = [&](std::size_t i, std::size_t r, v8d lane) {
    double s = ((lane[0] + lane[1]) + (lane[2] + lane[3])) + ((lane[4] + lane[5]) + (lane[6] + lane[7]));
    for (std::size_t q = body; q < Q; ++q) s += a[i * Q + q] * b[r * Q + q];
    out[i * R + r] += s;
  };
  for (std::size_t i = 0; i < M; ++i) {
    const double* ai = a + i * Q;
    std::size_t r = 0;
    for (; r + 4 <= R; r += 4) {
      v8d acc[4] = {};
      const double* br = b + r * Q;
      for (std::size_t q = 0; q < body; q += 8) {
        const v8d x = load8(ai + q);
        for (std::size_t j = 0; j < 4; ++j) acc[j] += x * load8(br + j * Q + q);
      }
      for (std::size_t j = 0; j < 4; ++j) finish(i, r + j, acc[j]);
    }
    for (; r < R; ++r) {
      v8d acc = {};
      for (std::size_t q = 0; q < body; q += 8) acc += load8(ai + q) * load8(b + r * Q + q);
      finish(i, r, acc);
    }
  }
}

// (count, C, P) block of a batch tensor  <->  (C, count * P) panel.
void gather(const double* x, std::size_t channels, std::size_t count, std::size_t P, double* panel) {
  const std::size_t Q = count * P;
  for (std::size_t s = 0; s < count; ++s) {
    for (std::size_t c = 0; c < channels; ++c) {
      std::copy_n(x + (s * channels + c) * P, P, panel + c * Q + s * P);
    }
  }
}

void scatter(const double* panel, std::size_t channels, std::size_t count, std::size_t P, double* x) {
  const std::size_t Q = count * P;
  for (std::size_t s = 0; s < count; ++s) {
    for (std::size_t c = 0; c < channels; ++c) {
      std::copy_n(panel + c * Q + s * P, P, x + (s * channels + c) * P);
    }
  }
}

std::size_t panel_samples(std::size_t positions) {
  return std::max<std::size_t>(1, kPanelColumns / std::max<std::size_t>(positions, 1));
}

void require_rank4(const Tensor& x, std::size_t channels, const char* who) {
  if (x.rank() != 4 || x.dim(1) != channels) {
    throw ShapeMismatch(std::string(who) + ": expected (N, " + std::to_string(channels) + ", H, W), got " +
                        shape_string(x.shape()));
  }
}

void init_uniform(Parameter& w, Parameter& b, std::size_t fan_in, Rng& rng, double gain) {
  const double bound = std::sqrt(gain / static_cast<double>(fan_in));
  for (auto& v : w.value.values()) v = rng.uniform(-bound, bound);
  b.value.fill(0.0);
  w.zero_grad();
  b.zero_grad();
}

}  // namespace

const char* to_string(Padding p) { return p == Padding::kReplication ? "replication" : "zero"; }

Padding padding_from_string(const std::string& s) {
  if (s == "replication") return Padding::kReplication;
  if (s == "zero") return Padding::kZero;
  throw FormatError("unknown padding mode '" + s + "'");
}

Conv2d::Conv2d(std::string name, std::size_t in_channels, std::size_t out_channels, std::size_t stride,
               Padding padding, std::size_t kernel)
    : weight(name + ".weight", {out_channels, in_channels, kernel, kernel}),
      bias(name + ".bias", {out_channels}),
      in_(in_channels),
      out_(out_channels),
      stride_(stride),
      kernel_(kernel),
      padding_(padding) {
  if (stride != 1 && stride != 2) throw InvalidArgument("conv: stride must be 1 or 2");
  if (kernel % 2 == 0) throw InvalidArgument("conv: kernel size must be odd");
}

void Conv2d::init(Rng& rng, double gain) { init_uniform(weight, bias, in_ * kernel_ * kernel_, rng, gain); }

Tensor Conv2d::forward(const Tensor& x) const {
  require_rank4(x, in_, "conv2d");
  const std::size_t N = x.dim(0), H = x.dim(2), W = x.dim(3);
  const Window g{H, W, conv_output_size(H, stride_, kernel_), conv_output_size(W, stride_, kernel_), stride_,
                 kernel_, padding_};
  const auto table = make_table(g);
  const std::size_t P = g.positions();
  const std::size_t R = in_ * kernel_ * kernel_;
  const std::size_t chunk = panel_samples(P);
  Tensor y({N, out_, g.out_h, g.out_w});
  std::vector<double> cols(R * chunk * P), panel(out_ * chunk * P);
  for (std::size_t s0 = 0; s0 < N; s0 += chunk) {
    const std::size_t cnt = std::min(chunk, N - s0);
    const std::size_t Q = cnt * P;
    im2col(x.data() + s0 * in_ * H * W, in_, cnt, g, table, cols.data());
    product_axpy(out_, R, Q, weight.value.data(), R, 1, cols.data(), panel.data());
    for (std::size_t co = 0; co < out_; ++co) {
      double* row = panel.data() + co * Q;
      const double b = bias.value[co];
      for (std::size_t q = 0; q < Q; ++q) row[q] += b;
    }
    scatter(panel.data(), out_, cnt, P, y.data() + s0 * out_ * P);
  }
  return y;
}

Tensor Conv2d::backward(const Tensor& x, const Tensor& grad_out) {
  require_rank4(x, in_, "conv2d backward");
  const std::size_t N = x.dim(0), H = x.dim(2), W = x.dim(3);
  const Window g{H, W, conv_output_size(H, stride_, kernel_), conv_output_size(W, stride_, kernel_), stride_,
                 kernel_, padding_};
  if (grad_out.shape() != std::vector<std::size_t>{N, out_, g.out_h, g.out_w}) {
    throw ShapeMismatch("conv2d backward: grad shape " + shape_string(grad_out.shape()));
  }
  const auto table = make_table(g);
  const std::size_t P = g.positions();
  const std::size_t R = in_ * kernel_ * kernel_;
  const std::size_t chunk = panel_samples(P);
  Tensor dx(x.shape());
  std::vector<double> cols(R * chunk * P), dcols(R * chunk * P), dy(out_ * chunk * P);
  for (std::size_t s0 = 0; s0 < N; s0 += chunk) {
    const std::size_t cnt = std::min(chunk, N - s0);
    const std::size_t Q = cnt * P;
    gather(grad_out.data() + s0 * out_ * P, out_, cnt, P, dy.data());
    for (std::size_t co = 0; co < out_; ++co) {
      double s = 0.0;
      for (std::size_t q = 0; q < Q; ++q) s += dy[co * Q + q];
      bias.grad[co] += s;
    }
    im2col(x.data() + s0 * in_ * H * W, in_, cnt, g, table, cols.data());
    product_dot_add(out_, R, Q, dy.data(), cols.data(), weight.grad.data());
    product_axpy(R, out_, Q, weight.value.data(), 1, R, dy.data(), dcols.data());
    col2im_add(dcols.data(), in_, cnt, g, table, dx.data() + s0 * in_ * H * W);
  }
  return dx;
}

ConvTranspose2d::ConvTranspose2d(std::string name, std::size_t in_channels, std::size_t out_channels,
                                 std::size_t kernel)
    : weight(name + ".weight", {in_channels, out_channels, kernel, kernel}),
      bias(name + ".bias", {out_channels}),
      in_(in_channels),
      out_(out_channels),
      kernel_(kernel) {
  if (kernel % 2 == 0) throw InvalidArgument("deconv: kernel size must be odd");
}

void ConvTranspose2d::init(Rng& rng, double gain) {
  // Each output pixel sees about in * k * k / 4 taps at stride 2.
  init_uniform(weight, bias, std::max<std::size_t>(1, in_ * kernel_ * kernel_ / 4), rng, gain);
}

Tensor ConvTranspose2d::forward(const Tensor& x, std::size_t out_h, std::size_t out_w) const {
  require_rank4(x, in_, "deconv2d");
  const std::size_t N = x.dim(0), H = x.dim(2), W = x.dim(3);
  if (conv_output_size(out_h, 2, kernel_) != H || conv_output_size(out_w, 2, kernel_) != W) {
    throw ShapeMismatch("deconv2d: output " + std::to_string(out_h) + "x" + std::to_string(out_w) +
                        " is not reachable from input " + std::to_string(H) + "x" + std::to_string(W));
  }
  const Window g{out_h, out_w, H, W, 2, kernel_, Padding::kZero};
  const auto table = make_table(g);
  const std::size_t P = H * W;
  const std::size_t R = out_ * kernel_ * kernel_;
  const std::size_t chunk = panel_samples(P);
  Tensor y({N, out_, out_h, out_w});
  std::vector<double> xm(in_ * chunk * P), cols(R * chunk * P);
  for (std::size_t s0 = 0; s0 < N; s0 += chunk) {
    const std::size_t cnt = std::min(chunk, N - s0);
    const std::size_t Q = cnt * P;
    gather(x.data() + s0 * in_ * P, in_, cnt, P, xm.data());
    product_axpy(R, in_, Q, weight.value.data(), 1, R, xm.data(), cols.data());
    col2im_add(cols.data(), out_, cnt, g, table, y.data() + s0 * out_ * out_h * out_w);
  }
  const std::size_t plane = out_h * out_w;
  for (std::size_t s = 0; s < N; ++s) {
    for (std::size_t co = 0; co < out_; ++co) {
      double* p = y.data() + (s * out_ + co) * plane;
      const double b = bias.value[co];
      for (std::size_t i = 0; i < plane; ++i) p[i] += b;
    }
  }
  return y;
}

Tensor ConvTranspose2d::backward(const Tensor& x, const Tensor& grad_out) {
  require_rank4(x, in_, "deconv2d backward");
  require_rank4(grad_out, out_, "deconv2d backward");
  const std::size_t N = x.dim(0), H = x.dim(2), W = x.dim(3);
  const std::size_t out_h = grad_out.dim(2), out_w = grad_out.dim(3);
  if (grad_out.dim(0) != N || conv_output_size(out_h, 2, kernel_) != H ||
      conv_output_size(out_w, 2, kernel_) != W) {
    throw ShapeMismatch("deconv2d backward: grad shape " + shape_string(grad_out.shape()));
  }
  const Window g{out_h, out_w, H, W, 2, kernel_, Padding::kZero};
  const auto table = make_table(g);
  const std::size_t P = H * W;
  const std::size_t R = out_ * kernel_ * kernel_;
  const std::size_t chunk = panel_samples(P);
  const std::size_t plane = out_h * out_w;
  for (std::size_t s = 0; s < N; ++s) {
    for (std::size_t co = 0; co < out_; ++co) {
      const double* p = grad_out.data() + (s * out_ + co) * plane;
      double sum = 0.0;
      for (std::size_t i = 0; i < plane; ++i) sum += p[i];
      bias.grad[co] += sum;
    }
  }
  Tensor dx(x.shape());
  std::vector<double> xm(in_ * chunk * P), dcols(R * chunk * P), dxm(in_ * chunk * P);
  for (std::size_t s0 = 0; s0 < N; s0 += chunk) {
    const std::size_t cnt = std::min(chunk, N - s0);
    const std::size_t Q = cnt * P;
    im2col(grad_out.data() + s0 * out_ * plane, out_, cnt, g, table, dcols.data());
    gather(x.data() + s0 * in_ * P, in_, cnt, P, xm.data());
    product_dot_add(in_, R, Q, xm.data(), dcols.data(), weight.grad.data());
    product_axpy(in_, R, Q, weight.value.data(), R, 1, dcols.data(), dxm.data());
    scatter(dxm.data(), in_, cnt, P, dx.data() + s0 * in_ * P);
  }
  return dx;
}

Tensor relu(const Tensor& x) {
  Tensor y = x;
  for (auto& v : y.values()) v = v > 0.0 ? v : 0.0;
  return y;
}

Tensor relu_backward(const Tensor& out, const Tensor& grad_out) {
  if (out.shape() != grad_out.shape()) throw ShapeMismatch("relu backward: shape mismatch");
  Tensor g = grad_out;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!(out[i] > 0.0)) g[i] = 0.0;
  }
  return g;
}

Tensor concat_channels(const Tensor& a, const Tensor& b) {
  if (a.rank() != 4 || b.rank() != 4 || a.dim(0) != b.dim(0) || a.dim(2) != b.dim(2) || a.dim(3) != b.dim(3)) {
    throw ShapeMismatch("concat: " + shape_string(a.shape()) + " vs " + shape_string(b.shape()));
  }
  const std::size_t N = a.dim(0), ca = a.dim(1), cb = b.dim(1), plane = a.dim(2) * a.dim(3);
  Tensor y({N, ca + cb, a.dim(2), a.dim(3)});
  for (std::size_t s = 0; s < N; ++s) {
    std::copy_n(a.data() + s * ca * plane, ca * plane, y.data() + s * (ca + cb) * plane);
    std::copy_n(b.data() + s * cb * plane, cb * plane, y.data() + (s * (ca + cb) + ca) * plane);
  }
  return y;
}

std::pair<Tensor, Tensor> split_channels(const Tensor& grad, std::size_t a_channels) {
  if (grad.rank() != 4 || grad.dim(1) < a_channels) throw ShapeMismatch("split: bad channel count");
  const std::size_t N = grad.dim(0), c = grad.dim(1), cb = c - a_channels, plane = grad.dim(2) * grad.dim(3);
  Tensor a({N, a_channels, grad.dim(2), grad.dim(3)});
  Tensor b({N, cb, grad.dim(2), grad.dim(3)});
  for (std::size_t s = 0; s < N; ++s) {
    std::copy_n(grad.data() + s * c * plane, a_channels * plane, a.data() + s * a_channels * plane);
    std::copy_n(grad.data() + (s * c + a_channels) * plane, cb * plane, b.data() + s * cb * plane);
  }
  return {std::move(a), std::move(b)};
}

double l1_loss(const Tensor& pred, const Tensor& target) {
  if (pred.size() != target.size()) throw ShapeMismatch("l1 loss: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) s += std::abs(pred[i] - target[i]);
  return s;
}

Tensor l1_loss_backward(const Tensor& pred, const Tensor& target) {
  if (pred.size() != target.size()) throw ShapeMismatch("l1 loss backward: size mismatch");
  Tensor g(pred.shape());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - target[i];
    g[i] = d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0);
  }
  return g;
}

}  // namespace pdnoise::nn
