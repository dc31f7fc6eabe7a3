// Copyright 2026 The CloudAdapt Authors.
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

#include "network.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "cloudadapt/common/error.h"

namespace cloudadapt::internal {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// ---------------------------------------------------------------------------
// Construction

class NetworkBuilder {
 public:
  explicit NetworkBuilder(const ArchConfig& arch)
      : arch_(arch), c_(arch.input_channels), h_(arch.input_height), w_(arch.input_width) {}

  Network Build() {
    if (arch_.family == ArchFamily::kPlain) {
      for (const ConvBlockSpec& b : arch_.conv_blocks) {
        net_.layers.push_back({Conv(c_, b.filters, b.kernel, 1)});
        net_.layers.push_back({Bn(b.filters)});
        net_.layers.push_back({ReluOp{}});
        if (b.pool > 1) net_.layers.push_back({Pool(b.pool)});
      }
      if (arch_.global_pool) GlobalPool(net_.layers);
    } else {
      const StemSpec& s = arch_.stem;
      net_.layers.push_back({Conv(c_, s.filters, s.kernel, s.stride)});
      net_.layers.push_back({Bn(s.filters)});
      net_.layers.push_back({ReluOp{}});
      if (s.pool > 1) net_.layers.push_back({Pool(s.pool)});
      for (const ResidualStageSpec& stage : arch_.stages) {
        for (int b = 0; b < stage.blocks; ++b) {
          net_.layers.push_back({Block(stage, b == 0 ? stage.stride : 1)});
        }
      }
      GlobalPool(net_.layers);
    }
    int features = c_ * h_ * w_;
    for (size_t i = 0; i < arch_.fc.size(); ++i) {
      net_.layers.push_back({Linear(features, arch_.fc[i])});
      features = arch_.fc[i];
      if (i + 1 < arch_.fc.size()) net_.layers.push_back({ReluOp{}});
    }
    net_.num_params = next_;
    return std::move(net_);
  }

 private:
  size_t Alloc(ParamKind kind, size_t length, size_t fan_in) {
    net_.records.push_back({layer_id_, kind, next_, length});
    net_.fan_in.push_back(fan_in);
    const size_t off = next_;
    next_ += length;
    return off;
  }

  ConvOp Conv(int in, int out, int kernel, int stride) {
    ConvOp op;
    op.in_ch = in;
    op.out_ch = out;
    op.kernel = kernel;
    op.stride = stride;
    op.pad = kernel / 2;
    const size_t fan_in = static_cast<size_t>(in) * kernel * kernel;
    op.w_off = Alloc(ParamKind::kConvWeight, fan_in * out, fan_in);
    op.has_bias = arch_.conv_bias;
    if (op.has_bias) op.b_off = Alloc(ParamKind::kConvBias, out, 0);
    ++layer_id_;
    c_ = out;
    h_ = (h_ + 2 * op.pad - kernel) / stride + 1;
    w_ = (w_ + 2 * op.pad - kernel) / stride + 1;
    CheckSpatial();
    return op;
  }

  BnOp Bn(int channels) {
    BnOp op;
    op.channels = channels;
    op.bn_index = static_cast<int>(net_.bn_channels.size());
    net_.bn_gamma_offsets.push_back(Alloc(ParamKind::kBnGamma, channels, 0));
    net_.bn_beta_offsets.push_back(Alloc(ParamKind::kBnBeta, channels, 0));
    net_.bn_channels.push_back(channels);
    ++layer_id_;
    return op;
  }

  MaxPoolOp Pool(int pool) {
    h_ /= pool;
    w_ /= pool;
    CheckSpatial();
    return MaxPoolOp{pool};
  }

  void GlobalPool(std::vector<Layer>& layers) {
    layers.push_back({GlobalAvgPoolOp{}});
    h_ = w_ = 1;
  }

  LinearOp Linear(int in, int out) {
    LinearOp op;
    op.in_features = in;
    op.out_features = out;
    op.w_off = Alloc(ParamKind::kFcWeight, static_cast<size_t>(in) * out, in);
    op.b_off = Alloc(ParamKind::kFcBias, out, 0);
    ++layer_id_;
    return op;
  }

  ResidualOp Block(const ResidualStageSpec& stage, int stride) {
    const int in = c_;
    const int h_in = h_, w_in = w_;
    const int out = stage.out_channels;
    ResidualOp block;
    if (arch_.block_kind == ResidualBlockKind::kBasic) {
      block.body.push_back({Conv(in, out, 3, stride)});
      block.body.push_back({Bn(out)});
      block.body.push_back({ReluOp{}});
      block.body.push_back({Conv(out, out, 3, 1)});
      block.body.push_back({Bn(out)});
    } else {
      block.body.push_back({Conv(in, stage.width, 1, 1)});
      block.body.push_back({Bn(stage.width)});
      block.body.push_back({ReluOp{}});
      block.body.push_back({Conv(stage.width, stage.width, 3, stride)});
      block.body.push_back({Bn(stage.width)});
      block.body.push_back({ReluOp{}});
      block.body.push_back({Conv(stage.width, out, 1, 1)});
      block.body.push_back({Bn(out)});
    }
    if (stride != 1 || in != out) {
      const int h_body = h_, w_body = w_;
      c_ = in;
      h_ = h_in;
      w_ = w_in;
      block.shortcut.push_back({Conv(in, out, 1, stride)});
      block.shortcut.push_back({Bn(out)});
      if (h_ != h_body || w_ != w_body) {
        throw DimensionError("residual branch shapes disagree");
      }
    }
    return block;
  }

  void CheckSpatial() const {
    if (h_ < 1 || w_ < 1) {
      throw DimensionError("pooled spatial size reaches " + std::to_string(h_) + "x" +
                           std::to_string(w_));
    }
  }

  const ArchConfig& arch_;
  Network net_;
  size_t next_ = 0;
  int layer_id_ = 0;
  int c_, h_, w_;
};

// ---------------------------------------------------------------------------
// Forward kernels

Tensor ConvForward(const ConvOp& op, const Tensor& x, std::span<const float> params) {
  const int oh = (x.h + 2 * op.pad - op.kernel) / op.stride + 1;
  const int ow = (x.w + 2 * op.pad - op.kernel) / op.stride + 1;
  Tensor y(x.n, op.out_ch, oh, ow);
  const float* wts = params.data() + op.w_off;
  const int k = op.kernel, s = op.stride, p = op.pad;
  for (int n = 0; n < x.n; ++n) {
    for (int oc = 0; oc < op.out_ch; ++oc) {
      double* out = y.channel(n, oc);
      if (op.has_bias) std::fill(out, out + y.plane(), static_cast<double>(params[op.b_off + oc]));
      for (int ic = 0; ic < op.in_ch; ++ic) {
        const double* in = x.channel(n, ic);
        const float* wk = wts + (static_cast<size_t>(oc) * op.in_ch + ic) * k * k;
        for (int kh = 0; kh < k; ++kh) {
          for (int kw = 0; kw < k; ++kw) {
            const double wv = wk[kh * k + kw];
            // Valid output columns: 0 <= ox*s + kw - p < x.w.
            const int ox_lo = std::max(0, (p - kw + s - 1) / s);
            const int ox_hi = std::min(ow, (x.w - 1 + p - kw) / s + 1);
            for (int oy = 0; oy < oh; ++oy) {
              const int iy = oy * s + kh - p;
              if (iy < 0 || iy >= x.h) continue;
              const double* irow = in + static_cast<size_t>(iy) * x.w + (kw - p);
              double* orow = out + static_cast<size_t>(oy) * ow;
              if (s == 1) {
                for (int ox = ox_lo; ox < ox_hi; ++ox) orow[ox] += wv * irow[ox];
              } else {
                for (int ox = ox_lo; ox < ox_hi; ++ox) orow[ox] += wv * irow[ox * s];
              }
            }
          }
        }
      }
    }
  }
  return y;
}

Tensor BnForward(const BnOp& op, const Tensor& x, const ForwardContext& ctx, LayerTape* tape) {
  const BnState& st = ctx.bn[op.bn_index];
  const float* gamma = ctx.params.data() + st.gamma_offset;
  const float* beta = ctx.params.data() + st.beta_offset;
  const size_t plane = x.plane();
  const double count = static_cast<double>(x.n) * plane;
  Tensor y(x.n, x.c, x.h, x.w);
  Tensor xhat;
  if (tape) xhat = Tensor(x.n, x.c, x.h, x.w);
  std::vector<double> inv_std(x.c);
  BatchMoments moments;
  if (ctx.mode == StatsMode::kTrainStats) {
    moments.mean.assign(x.c, 0.0);
    moments.var.assign(x.c, 0.0);
  }
  for (int ch = 0; ch < x.c; ++ch) {
    double mean, var;
    if (ctx.mode == StatsMode::kTrainStats) {
      double sum = 0.0;
      for (int n = 0; n < x.n; ++n) {
        const double* in = x.channel(n, ch);
        for (size_t i = 0; i < plane; ++i) sum += in[i];
      }
      mean = sum / count;
      double sq = 0.0;
      for (int n = 0; n < x.n; ++n) {
        const double* in = x.channel(n, ch);
        for (size_t i = 0; i < plane; ++i) {
          const double d = in[i] - mean;
          sq += d * d;
        }
      }
      var = sq / count;
      moments.mean[ch] = mean;
      moments.var[ch] = var;
    } else {
      mean = st.running_mean[ch];
      var = st.running_var[ch];
    }
    const double inv = 1.0 / std::sqrt(var + st.epsilon);
    inv_std[ch] = inv;
    const double g = gamma[ch], b = beta[ch];
    for (int n = 0; n < x.n; ++n) {
      const double* in = x.channel(n, ch);
      double* out = y.channel(n, ch);
      double* xh = tape ? xhat.channel(n, ch) : nullptr;
      for (size_t i = 0; i < plane; ++i) {
        const double normalized = (in[i] - mean) * inv;
        if (xh) xh[i] = normalized;
        out[i] = g * normalized + b;
      }
    }
  }
  if (ctx.mode == StatsMode::kTrainStats && ctx.moments) {
    (*ctx.moments)[op.bn_index] = std::move(moments);
  }
  if (tape) {
    tape->aux = std::move(xhat);
    tape->inv_std = std::move(inv_std);
  }
  return y;
}

Tensor MaxPoolForward(const MaxPoolOp& op, const Tensor& x, LayerTape* tape) {
  const int oh = x.h / op.pool, ow = x.w / op.pool;
  Tensor y(x.n, x.c, oh, ow);
  if (tape) tape->argmax.assign(y.v.size(), 0);
  size_t o = 0;
  for (int n = 0; n < x.n; ++n) {
    for (int ch = 0; ch < x.c; ++ch) {
      const double* in = x.channel(n, ch);
      const size_t base = static_cast<size_t>(in - x.v.data());
      for (int oy = 0; oy < oh; ++oy) {
        for (int ox = 0; ox < ow; ++ox, ++o) {
          size_t best = static_cast<size_t>(oy * op.pool) * x.w + ox * op.pool;
          for (int dy = 0; dy < op.pool; ++dy) {
            for (int dx = 0; dx < op.pool; ++dx) {
              const size_t idx = static_cast<size_t>(oy * op.pool + dy) * x.w + ox * op.pool + dx;
              if (in[idx] > in[best]) best = idx;
            }
          }
          y.v[o] = in[best];
          if (tape) tape->argmax[o] = base + best;
        }
      }
    }
  }
  return y;
}

Tensor GlobalAvgPoolForward(const Tensor& x) {
  Tensor y(x.n, x.c, 1, 1);
  const size_t plane = x.plane();
  for (int n = 0; n < x.n; ++n) {
    for (int ch = 0; ch < x.c; ++ch) {
      const double* in = x.channel(n, ch);
      double sum = 0.0;
      for (size_t i = 0; i < plane; ++i) sum += in[i];
      y.v[static_cast<size_t>(n) * x.c + ch] = sum / static_cast<double>(plane);
    }
  }
  return y;
}

Tensor LinearForward(const LinearOp& op, const Tensor& x, std::span<const float> params) {
  const size_t in_f = static_cast<size_t>(x.c) * x.h * x.w;
  if (in_f != static_cast<size_t>(op.in_features)) {
    throw DimensionError("linear layer expects " + std::to_string(op.in_features) +
                         " features, got " + std::to_string(in_f));
  }
  Tensor y(x.n, op.out_features, 1, 1);
  const float* wts = params.data() + op.w_off;
  const float* bias = params.data() + op.b_off;
  for (int n = 0; n < x.n; ++n) {
    const double* in = x.v.data() + static_cast<size_t>(n) * in_f;
    for (int o = 0; o < op.out_features; ++o) {
      const float* row = wts + static_cast<size_t>(o) * in_f;
      double acc = bias[o];
      for (size_t i = 0; i < in_f; ++i) acc += row[i] * in[i];
      y.v[static_cast<size_t>(n) * op.out_features + o] = acc;
    }
  }
  return y;
}

void ReluInPlace(Tensor& x) {
  for (double& v : x.v) v = v > 0.0 ? v : 0.0;
}

// ---------------------------------------------------------------------------
// Backward kernels

bool HasScopedParams(const Layer& layer, const ParamScope& scope) {
  return std::visit(
      Overloaded{
          [&](const ConvOp&) { return scope.conv; },
          [&](const BnOp&) { return scope.bn_affine; },
          [&](const LinearOp&) { return scope.fc; },
          [&](const ResidualOp& r) {
            auto any = [&](const std::vector<Layer>& ls) {
              return std::any_of(ls.begin(), ls.end(),
                                 [&](const Layer& l) { return HasScopedParams(l, scope); });
            };
            return any(r.body) || any(r.shortcut);
          },
          [](const auto&) { return false; },
      },
      layer.op);
}

Tensor ConvBackward(const ConvOp& op, const LayerTape& tape, const Tensor& dy,
                    const BackwardContext& ctx, bool need_din) {
  const Tensor& x = tape.input;
  const bool need_dw = ctx.scope.conv;
  Tensor dx;
  if (need_din) dx = Tensor(x.n, x.c, x.h, x.w);
  const float* wts = ctx.params.data() + op.w_off;
  double* gw = ctx.grad.data() + op.w_off;
  const int k = op.kernel, s = op.stride, p = op.pad;
  const int oh = dy.h, ow = dy.w;

  if (need_dw && op.has_bias) {
    double* gb = ctx.grad.data() + op.b_off;
    for (int n = 0; n < dy.n; ++n) {
      for (int oc = 0; oc < op.out_ch; ++oc) {
        const double* g = dy.channel(n, oc);
        double sum = 0.0;
        for (size_t i = 0; i < dy.plane(); ++i) sum += g[i];
        gb[oc] += sum;
      }
    }
  }
  if (!need_dw && !need_din) return dx;

  for (int n = 0; n < x.n; ++n) {
    for (int oc = 0; oc < op.out_ch; ++oc) {
      const double* g = dy.channel(n, oc);
      for (int ic = 0; ic < op.in_ch; ++ic) {
        const double* in = x.channel(n, ic);
        double* din = need_din ? dx.channel(n, ic) : nullptr;
        const size_t wbase = (static_cast<size_t>(oc) * op.in_ch + ic) * k * k;
        for (int kh = 0; kh < k; ++kh) {
          for (int kw = 0; kw < k; ++kw) {
            const double wv = wts[wbase + kh * k + kw];
            const int ox_lo = std::max(0, (p - kw + s - 1) / s);
            const int ox_hi = std::min(ow, (x.w - 1 + p - kw) / s + 1);
            double acc = 0.0;
            for (int oy = 0; oy < oh; ++oy) {
              const int iy = oy * s + kh - p;
              if (iy < 0 || iy >= x.h) continue;
              const size_t irow = static_cast<size_t>(iy) * x.w + (kw - p);
              const double* grow = g + static_cast<size_t>(oy) * ow;
              if (need_dw) {
                for (int ox = ox_lo; ox < ox_hi; ++ox) acc += grow[ox] * in[irow + ox * s];
              }
              if (din) {
                for (int ox = ox_lo; ox < ox_hi; ++ox) din[irow + ox * s] += wv * grow[ox];
              }
            }
            if (need_dw) gw[wbase + kh * k + kw] += acc;
          }
        }
      }
    }
  }
  return dx;
}

Tensor BnBackward(const BnOp& op, const LayerTape& tape, const Tensor& dy,
                  const BackwardContext& ctx, bool need_din) {
  const BnState& st = ctx.bn[op.bn_index];
  const Tensor& xhat = tape.aux;
  const size_t plane = dy.plane();
  const double count = static_cast<double>(dy.n) * plane;
  Tensor dx;
  if (need_din) dx = Tensor(dy.n, dy.c, dy.h, dy.w);
  for (int ch = 0; ch < dy.c; ++ch) {
    double sum_dy = 0.0, sum_dy_xhat = 0.0;
    for (int n = 0; n < dy.n; ++n) {
      const double* g = dy.channel(n, ch);
      const double* xh = xhat.channel(n, ch);
      for (size_t i = 0; i < plane; ++i) {
        sum_dy += g[i];
        sum_dy_xhat += g[i] * xh[i];
      }
    }
    if (ctx.scope.bn_affine) {
      ctx.grad[st.gamma_offset + ch] += sum_dy_xhat;
      ctx.grad[st.beta_offset + ch] += sum_dy;
    }
    if (!need_din) continue;
    const double gamma = ctx.params[st.gamma_offset + ch];
    const double inv = tape.inv_std[ch];
    if (ctx.mode == StatsMode::kTrainStats) {
      const double scale = gamma * inv / count;
      for (int n = 0; n < dy.n; ++n) {
        const double* g = dy.channel(n, ch);
        const double* xh = xhat.channel(n, ch);
        double* d = dx.channel(n, ch);
        for (size_t i = 0; i < plane; ++i) {
          d[i] = scale * (count * g[i] - sum_dy - xh[i] * sum_dy_xhat);
        }
      }
    } else {
      const double scale = gamma * inv;
      for (int n = 0; n < dy.n; ++n) {
        const double* g = dy.channel(n, ch);
        double* d = dx.channel(n, ch);
        for (size_t i = 0; i < plane; ++i) d[i] = scale * g[i];
      }
    }
  }
  return dx;
}

Tensor LinearBackward(const LinearOp& op, const LayerTape& tape, const Tensor& dy,
                      const BackwardContext& ctx, bool need_din) {
  const Tensor& x = tape.input;
  const size_t in_f = static_cast<size_t>(op.in_features);
  const float* wts = ctx.params.data() + op.w_off;
  Tensor dx;
  if (need_din) dx = Tensor(x.n, x.c, x.h, x.w);
  for (int n = 0; n < x.n; ++n) {
    const double* in = x.v.data() + static_cast<size_t>(n) * in_f;
    double* din = need_din ? dx.v.data() + static_cast<size_t>(n) * in_f : nullptr;
    for (int o = 0; o < op.out_features; ++o) {
      const double g = dy.v[static_cast<size_t>(n) * op.out_features + o];
      if (ctx.scope.fc) {
        double* gw = ctx.grad.data() + op.w_off + static_cast<size_t>(o) * in_f;
        for (size_t i = 0; i < in_f; ++i) gw[i] += g * in[i];
        ctx.grad[op.b_off + o] += g;
      }
      if (din) {
        const float* row = wts + static_cast<size_t>(o) * in_f;
        for (size_t i = 0; i < in_f; ++i) din[i] += row[i] * g;
      }
    }
  }
  return dx;
}

Tensor RunLayer(const Layer& layer, Tensor x, const ForwardContext& ctx, LayerTape* tape) {
  return std::visit(
      Overloaded{
          [&](const ConvOp& op) {
            Tensor y = ConvForward(op, x, ctx.params);
            if (tape) tape->input = std::move(x);
            return y;
          },
          [&](const BnOp& op) { return BnForward(op, x, ctx, tape); },
          [&](const ReluOp&) {
            if (tape) tape->input = x;
            ReluInPlace(x);
            return std::move(x);
          },
          [&](const MaxPoolOp& op) {
            Tensor y = MaxPoolForward(op, x, tape);
            if (tape) tape->input = Tensor(x.n, x.c, x.h, x.w);  // shape only
            return y;
          },
          [&](const GlobalAvgPoolOp&) {
            Tensor y = GlobalAvgPoolForward(x);
            if (tape) {
              tape->input.n = x.n;
              tape->input.c = x.c;
              tape->input.h = x.h;
              tape->input.w = x.w;
            }
            return y;
          },
          [&](const LinearOp& op) {
            Tensor y = LinearForward(op, x, ctx.params);
            if (tape) tape->input = std::move(x);
            return y;
          },
          [&](const ResidualOp& op) {
            Tensor body = RunLayers(op.body, x, ctx, tape ? &tape->body : nullptr);
            Tensor shortcut = op.shortcut.empty()
                                  ? std::move(x)
                                  : RunLayers(op.shortcut, std::move(x), ctx,
                                              tape ? &tape->shortcut : nullptr);
            if (!body.SameShape(shortcut)) throw DimensionError("residual shape mismatch");
            for (size_t i = 0; i < body.v.size(); ++i) body.v[i] += shortcut.v[i];
            if (tape) tape->aux = body;
            ReluInPlace(body);
            return body;
          },
      },
      layer.op);
}

Tensor BackwardLayer(const Layer& layer, const LayerTape& tape, Tensor dy,
                     const BackwardContext& ctx, bool need_din) {
  return std::visit(
      Overloaded{
          [&](const ConvOp& op) { return ConvBackward(op, tape, dy, ctx, need_din); },
          [&](const BnOp& op) { return BnBackward(op, tape, dy, ctx, need_din); },
          [&](const ReluOp&) {
            for (size_t i = 0; i < dy.v.size(); ++i) {
              if (!(tape.input.v[i] > 0.0)) dy.v[i] = 0.0;
            }
            return std::move(dy);
          },
          [&](const MaxPoolOp&) {
            Tensor dx(tape.input.n, tape.input.c, tape.input.h, tape.input.w);
            for (size_t o = 0; o < dy.v.size(); ++o) dx.v[tape.argmax[o]] += dy.v[o];
            return dx;
          },
          [&](const GlobalAvgPoolOp&) {
            const Tensor& shape = tape.input;
            Tensor dx(shape.n, shape.c, shape.h, shape.w);
            const double scale = 1.0 / static_cast<double>(dx.plane());
            for (int n = 0; n < dx.n; ++n) {
              for (int ch = 0; ch < dx.c; ++ch) {
                const double g = dy.v[static_cast<size_t>(n) * dx.c + ch] * scale;
                double* d = dx.channel(n, ch);
                std::fill(d, d + dx.plane(), g);
              }
            }
            return dx;
          },
          [&](const LinearOp& op) { return LinearBackward(op, tape, dy, ctx, need_din); },
          [&](const ResidualOp& op) {
            for (size_t i = 0; i < dy.v.size(); ++i) {
              if (!(tape.aux.v[i] > 0.0)) dy.v[i] = 0.0;
            }
            Tensor dx;
            if (op.shortcut.empty()) {
              Tensor d_body = BackwardLayers(op.body, tape.body, dy, ctx, need_din);
              if (need_din) {
                for (size_t i = 0; i < dy.v.size(); ++i) d_body.v[i] += dy.v[i];
                dx = std::move(d_body);
              }
            } else {
              Tensor d_body = BackwardLayers(op.body, tape.body, dy, ctx, need_din);
              Tensor d_short =
                  BackwardLayers(op.shortcut, tape.shortcut, std::move(dy), ctx, need_din);
              if (need_din) {
                for (size_t i = 0; i < d_body.v.size(); ++i) d_body.v[i] += d_short.v[i];
                dx = std::move(d_body);
              }
            }
            return dx;
          },
      },
      layer.op);
}

}  // namespace

Network BuildNetwork(const ArchConfig& arch) {
  arch.Validate();
  return NetworkBuilder(arch).Build();
}

Tensor RunLayers(const std::vector<Layer>& layers, Tensor x, const ForwardContext& ctx,
                 std::vector<LayerTape>* tapes) {
  if (tapes) tapes->assign(layers.size(), LayerTape{});
  for (size_t i = 0; i < layers.size(); ++i) {
    x = RunLayer(layers[i], std::move(x), ctx, tapes ? &(*tapes)[i] : nullptr);
  }
  return x;
}

Tensor BackwardLayers(const std::vector<Layer>& layers, const std::vector<LayerTape>& tapes,
                      Tensor dout, const BackwardContext& ctx, bool need_input_grad) {
  size_t first = 0;
  if (!need_input_grad) {
    first = layers.size();
    for (size_t i = 0; i < layers.size(); ++i) {
      if (HasScopedParams(layers[i], ctx.scope)) {
        first = i;
        break;
      }
    }
    if (first == layers.size()) return Tensor{};
  }
  for (size_t i = layers.size(); i-- > first;) {
    const bool need_din = need_input_grad || i > first;
    dout = BackwardLayer(layers[i], tapes[i], std::move(dout), ctx, need_din);
  }
  return need_input_grad ? dout : Tensor{};
}

Tensor CubesToTensor(std::span<const DataCube> batch, const ArchConfig& arch) {
  if (batch.empty()) throw DimensionError("empty batch");
  Tensor x(static_cast<int>(batch.size()), arch.input_channels, arch.input_height,
           arch.input_width);
  for (size_t n = 0; n < batch.size(); ++n) {
    const DataCube& cube = batch[n];
    if (cube.height() != arch.input_height || cube.width() != arch.input_width ||
        cube.channels() != arch.input_channels) {
      throw DimensionError("cube " + std::to_string(cube.height()) + "x" +
                           std::to_string(cube.width()) + "x" +
                           std::to_string(cube.channels()) + " does not match model input " +
                           std::to_string(arch.input_height) + "x" +
                           std::to_string(arch.input_width) + "x" +
                           std::to_string(arch.input_channels));
    }
    const std::span<const float> px = cube.pixels();
    const int c = arch.input_channels;
    const size_t plane = x.plane();
    for (int ch = 0; ch < c; ++ch) {
      double* dst = x.channel(static_cast<int>(n), ch);
      for (size_t i = 0; i < plane; ++i) dst[i] = px[i * c + ch];
    }
  }
  return x;
}

}  // namespace cloudadapt::internal
