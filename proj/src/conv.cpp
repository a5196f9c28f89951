#include <Eigen/Core>
#include <algorithm>
#include <cmath>

#include "acrn/ops.hpp"

namespace acrn {

namespace {

using MatRM = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapRM = Eigen::Map<MatRM>;
using CMapRM = Eigen::Map<const MatRM>;

Tape* tape_of2(const Tensor& a, const Tensor& b, const char* op) {
  Tape* t = nullptr;
  for (const Tensor* x : {&a, &b}) {
    if (!x->on_tape()) continue;
    if (!t)
      t = x->tape();
    else if (t != x->tape())
      shape_error(op, "inputs belong to two different tapes");
  }
  return t;
}

inline bool on(const Tensor& x, const Tape& tp) { return x.tape() == &tp; }

struct Conv2dDims {
  int c, h, w, co, kh, kw, stride, pad, ho, wo;
};

Conv2dDims conv2d_dims(const Shape& xs, int xoff, const Shape& ks, int stride, int pad,
                       const char* op) {
  Conv2dDims d{};
  d.c = xs[xoff];
  d.h = xs[xoff + 1];
  d.w = xs[xoff + 2];
  if (ks.rank() != 4) shape_error(op, "kernel must be [Co,Ci,kh,kw], got " + ks.str());
  d.co = ks[0];
  d.kh = ks[2];
  d.kw = ks[3];
  if (ks[1] != d.c)
    shape_error(op, "kernel C_in=" + std::to_string(ks[1]) + " does not match input channels " +
                        std::to_string(d.c) + " (input " + xs.str() + ", kernel " + ks.str() + ")");
  if (stride < 1) shape_error(op, "stride must be >= 1");
  if (pad < 0) shape_error(op, "pad must be >= 0");
  if (d.kh > d.h + 2 * pad || d.kw > d.w + 2 * pad)
    shape_error(op, "kernel " + std::to_string(d.kh) + "x" + std::to_string(d.kw) +
                        " exceeds padded input " + std::to_string(d.h + 2 * pad) + "x" +
                        std::to_string(d.w + 2 * pad));
  d.stride = stride;
  d.pad = pad;
  d.ho = (d.h + 2 * pad - d.kh) / stride + 1;
  d.wo = (d.w + 2 * pad - d.kw) / stride + 1;
  return d;
}

void im2col(const double* x, const Conv2dDims& d, double* cols) {
  const i64 ncols = static_cast<i64>(d.ho) * d.wo;
  i64 r = 0;
  for (int ci = 0; ci < d.c; ++ci) {
    const double* plane = x + static_cast<i64>(ci) * d.h * d.w;
    for (int ky = 0; ky < d.kh; ++ky) {
      for (int kx = 0; kx < d.kw; ++kx, ++r) {
        double* row = cols + r * ncols;
        for (int oy = 0; oy < d.ho; ++oy) {
          const int iy = oy * d.stride + ky - d.pad;
          if (iy < 0 || iy >= d.h) {
            std::fill(row + static_cast<i64>(oy) * d.wo, row + static_cast<i64>(oy + 1) * d.wo, 0.0);
            continue;
          }
          for (int ox = 0; ox < d.wo; ++ox) {
            const int ix = ox * d.stride + kx - d.pad;
            row[static_cast<i64>(oy) * d.wo + ox] =
                (ix < 0 || ix >= d.w) ? 0.0 : plane[static_cast<i64>(iy) * d.w + ix];
          }
        }
      }
    }
  }
}

void col2im_add(const double* cols, const Conv2dDims& d, double* dx) {
  const i64 ncols = static_cast<i64>(d.ho) * d.wo;
  i64 r = 0;
  for (int ci = 0; ci < d.c; ++ci) {
    double* plane = dx + static_cast<i64>(ci) * d.h * d.w;
    for (int ky = 0; ky < d.kh; ++ky) {
      for (int kx = 0; kx < d.kw; ++kx, ++r) {
        const double* row = cols + r * ncols;
        for (int oy = 0; oy < d.ho; ++oy) {
          const int iy = oy * d.stride + ky - d.pad;
          if (iy < 0 || iy >= d.h) continue;
          for (int ox = 0; ox < d.wo; ++ox) {
            const int ix = ox * d.stride + kx - d.pad;
            if (ix >= 0 && ix < d.w) plane[static_cast<i64>(iy) * d.w + ix] += row[static_cast<i64>(oy) * d.wo + ox];
          }
        }
      }
    }
  }
}

// Shared forward/backward over T frames; conv2d is the T=1 case.
void conv_forward_frames(const double* x, int t, const Conv2dDims& d, const double* k, double* out) {
  const i64 krows = static_cast<i64>(d.c) * d.kh * d.kw;
  const i64 ncols = static_cast<i64>(d.ho) * d.wo;
  const i64 frame_in = static_cast<i64>(d.c) * d.h * d.w;
  const i64 frame_out = static_cast<i64>(d.co) * ncols;
  std::vector<double> cols(static_cast<size_t>(krows * ncols));
  CMapRM km(k, d.co, krows);
  for (int f = 0; f < t; ++f) {
    im2col(x + f * frame_in, d, cols.data());
    CMapRM cm(cols.data(), krows, ncols);
    MapRM om(out + f * frame_out, d.co, ncols);
    om.noalias() = km * cm;
  }
}

void conv_backward_frames(const double* x, const double* gout, int t, const Conv2dDims& d,
                          const double* k, double* dx, double* dk) {
  const i64 krows = static_cast<i64>(d.c) * d.kh * d.kw;
  const i64 ncols = static_cast<i64>(d.ho) * d.wo;
  const i64 frame_in = static_cast<i64>(d.c) * d.h * d.w;
  const i64 frame_out = static_cast<i64>(d.co) * ncols;
  std::vector<double> cols(static_cast<size_t>(krows * ncols));
  std::vector<double> dcols(dx ? static_cast<size_t>(krows * ncols) : 0);
  CMapRM km(k, d.co, krows);
  for (int f = 0; f < t; ++f) {
    CMapRM gm(gout + f * frame_out, d.co, ncols);
    if (dk) {
      im2col(x + f * frame_in, d, cols.data());
      CMapRM cm(cols.data(), krows, ncols);
      MapRM dkm(dk, d.co, krows);
      dkm.noalias() += gm * cm.transpose();
    }
    if (dx) {
      MapRM dcm(dcols.data(), krows, ncols);
      dcm.noalias() = km.transpose() * gm;
      col2im_add(dcols.data(), d, dx + f * frame_in);
    }
  }
}

Tensor conv_frames_impl(const Tensor& x, const Tensor& k, int stride, int pad, bool batched,
                        const char* op) {
  const Shape& xs = x.shape();
  if (batched && xs.rank() != 4) shape_error(op, "expected [T,C,H,W], got " + xs.str());
  if (!batched && xs.rank() != 3) shape_error(op, "expected [C,H,W], got " + xs.str());
  const int t = batched ? xs[0] : 1;
  Conv2dDims d = conv2d_dims(xs, batched ? 1 : 0, k.shape(), stride, pad, op);
  Shape out_shape = batched ? Shape{t, d.co, d.ho, d.wo} : Shape{d.co, d.ho, d.wo};
  std::vector<double> out(static_cast<size_t>(out_shape.numel()));
  conv_forward_frames(x.data(), t, d, k.data(), out.data());
  Tape* tp = tape_of2(x, k, op);
  if (!tp) return Tensor(out_shape, std::move(out));
  Tensor xv = x, kv = k;
  return tp->emit(out_shape, std::move(out), [xv, kv, t, d](Tape& tape, int self) {
    const auto& g = tape.grad(self);
    double* dx = on(xv, tape) ? tape.grad(xv.node()).data() : nullptr;
    double* dk = on(kv, tape) ? tape.grad(kv.node()).data() : nullptr;
    conv_backward_frames(xv.data(), g.data(), t, d, kv.data(), dx, dk);
  });
}

struct TConvDims {
  int t, c, co, kt, tout;
  i64 plane;  // H*W
};

TConvDims tconv_dims(const Shape& xs, const Shape& ks, const char* op, bool exact) {
  if (xs.rank() != 4) shape_error(op, "expected [T,C,H,W], got " + xs.str());
  if (ks.rank() != 3) shape_error(op, "kernel must be [Co,C,kT], got " + ks.str());
  TConvDims d{};
  d.t = xs[0];
  d.c = xs[1];
  d.plane = static_cast<i64>(xs[2]) * xs[3];
  d.co = ks[0];
  d.kt = ks[2];
  if (ks[1] != d.c)
    shape_error(op, "kernel C=" + std::to_string(ks[1]) + " does not match input channels " +
                        std::to_string(d.c));
  if (exact && d.kt != d.t)
    shape_error(op, "kernel time extent " + std::to_string(d.kt) + " must equal T=" + std::to_string(d.t));
  if (d.kt > d.t)
    shape_error(op, "kernel time extent " + std::to_string(d.kt) + " exceeds T=" + std::to_string(d.t));
  d.tout = d.t - d.kt + 1;
  return d;
}

// Contiguous [Co,C] slice of the [Co,C,kT] kernel at time tap dt.
std::vector<double> kernel_tap(const double* k, const TConvDims& d, int dt) {
  std::vector<double> m(static_cast<size_t>(d.co) * d.c);
  for (int co = 0; co < d.co; ++co)
    for (int c = 0; c < d.c; ++c) m[static_cast<i64>(co) * d.c + c] = k[(static_cast<i64>(co) * d.c + c) * d.kt + dt];
  return m;
}

Tensor tconv_impl(const Tensor& x, const Tensor& k, bool exact, const char* op) {
  TConvDims d = tconv_dims(x.shape(), k.shape(), op, exact);
  const i64 frame_in = static_cast<i64>(d.c) * d.plane;
  const i64 frame_out = static_cast<i64>(d.co) * d.plane;
  std::vector<double> out(static_cast<size_t>(d.tout * frame_out), 0.0);
  for (int dt = 0; dt < d.kt; ++dt) {
    std::vector<double> kd = kernel_tap(k.data(), d, dt);
    CMapRM km(kd.data(), d.co, d.c);
    for (int to = 0; to < d.tout; ++to) {
      CMapRM xm(x.data() + (to + dt) * frame_in, d.c, d.plane);
      MapRM om(out.data() + to * frame_out, d.co, d.plane);
      om.noalias() += km * xm;
    }
  }
  Shape out_shape = exact ? Shape{d.co, x.shape()[2], x.shape()[3]}
                          : Shape{d.tout, d.co, x.shape()[2], x.shape()[3]};
  Tape* tp = tape_of2(x, k, op);
  if (!tp) return Tensor(out_shape, std::move(out));
  Tensor xv = x, kv = k;
  return tp->emit(out_shape, std::move(out), [xv, kv, d](Tape& tape, int self) {
    const auto& g = tape.grad(self);
    const i64 frame_in = static_cast<i64>(d.c) * d.plane;
    const i64 frame_out = static_cast<i64>(d.co) * d.plane;
    const bool want_dx = on(xv, tape), want_dk = on(kv, tape);
    double* dx = want_dx ? tape.grad(xv.node()).data() : nullptr;
    double* dk = want_dk ? tape.grad(kv.node()).data() : nullptr;
    for (int dt = 0; dt < d.kt; ++dt) {
      std::vector<double> kd = kernel_tap(kv.data(), d, dt);
      std::vector<double> dkd(want_dk ? kd.size() : 0, 0.0);
      CMapRM km(kd.data(), d.co, d.c);
      for (int to = 0; to < d.tout; ++to) {
        CMapRM gm(g.data() + to * frame_out, d.co, d.plane);
        if (dx) {
          MapRM dxm(dx + (to + dt) * frame_in, d.c, d.plane);
          dxm.noalias() += km.transpose() * gm;
        }
        if (dk) {
          CMapRM xm(xv.data() + (to + dt) * frame_in, d.c, d.plane);
          MapRM dkm(dkd.data(), d.co, d.c);
          dkm.noalias() += gm * xm.transpose();
        }
      }
      if (dk)
        for (int co = 0; co < d.co; ++co)
          for (int c = 0; c < d.c; ++c)
            dk[(static_cast<i64>(co) * d.c + c) * d.kt + dt] += dkd[static_cast<i64>(co) * d.c + c];
    }
  });
}

}  // namespace

Tensor conv2d(const Tensor& x, const Tensor& k, int stride, int pad) {
  return conv_frames_impl(x, k, stride, pad, false, "conv2d");
}

Tensor conv2d_frames(const Tensor& x, const Tensor& k, int stride, int pad) {
  return conv_frames_impl(x, k, stride, pad, true, "conv2d_frames");
}

Tensor temporal_conv(const Tensor& x, const Tensor& k) { return tconv_impl(x, k, false, "temporal_conv"); }

Tensor temporal_flatten(const Tensor& x, const Tensor& k) { return tconv_impl(x, k, true, "temporal_flatten"); }

Tensor add_channel_bias(const Tensor& x, const Tensor& b) {
  const Shape& xs = x.shape();
  if (xs.rank() != 3 && xs.rank() != 4)
    shape_error("add_channel_bias", "expected [C,H,W] or [T,C,H,W], got " + xs.str());
  const int t = xs.rank() == 4 ? xs[0] : 1;
  const int c = xs.rank() == 4 ? xs[1] : xs[0];
  const i64 plane = static_cast<i64>(xs[xs.rank() - 2]) * xs[xs.rank() - 1];
  if (b.numel() != c)
    shape_error("add_channel_bias", "bias " + b.shape().str() + " vs " + std::to_string(c) + " channels");
  std::vector<double> y(static_cast<size_t>(x.numel()));
  for (int f = 0; f < t; ++f)
    for (int ch = 0; ch < c; ++ch) {
      const i64 off = (static_cast<i64>(f) * c + ch) * plane;
      const double bv = b.data()[ch];
      for (i64 i = 0; i < plane; ++i) y[off + i] = x.data()[off + i] + bv;
    }
  Tape* tp = tape_of2(x, b, "add_channel_bias");
  if (!tp) return Tensor(xs, std::move(y));
  Tensor xv = x, bv = b;
  return tp->emit(xs, std::move(y), [xv, bv, t, c, plane](Tape& tape, int self) {
    const auto& g = tape.grad(self);
    if (on(xv, tape)) {
      auto& gx = tape.grad(xv.node());
      for (size_t i = 0; i < g.size(); ++i) gx[i] += g[i];
    }
    if (on(bv, tape)) {
      auto& gb = tape.grad(bv.node());
      for (int f = 0; f < t; ++f)
        for (int ch = 0; ch < c; ++ch) {
          const i64 off = (static_cast<i64>(f) * c + ch) * plane;
          double s = 0.0;
          for (i64 i = 0; i < plane; ++i) s += g[off + i];
          gb[ch] += s;
        }
    }
  });
}

namespace {

struct BilinearSample {
  int y0, y1, x0, x1;
  double w00, w01, w10, w11;
};

BilinearSample bilinear_at(double cy, double cx, int h, int w) {
  cy = std::clamp(cy, 0.0, static_cast<double>(h - 1));
  cx = std::clamp(cx, 0.0, static_cast<double>(w - 1));
  BilinearSample s{};
  s.y0 = static_cast<int>(cy);
  s.x0 = static_cast<int>(cx);
  s.y1 = std::min(s.y0 + 1, h - 1);
  s.x1 = std::min(s.x0 + 1, w - 1);
  const double fy = cy - s.y0, fx = cx - s.x0;
  s.w00 = (1 - fy) * (1 - fx);
  s.w01 = (1 - fy) * fx;
  s.w10 = fy * (1 - fx);
  s.w11 = fy * fx;
  return s;
}

}  // namespace

Tensor crop_resize(const Tensor& x, double y1, double x1, double y2, double x2, int ph, int pw) {
  if (x.shape().rank() != 3) shape_error("crop_resize", "expected [C,h,w], got " + x.shape().str());
  if (ph < 1 || pw < 1) shape_error("crop_resize", "output extent must be >= 1");
  if (!(y2 > y1) || !(x2 > x1))
    shape_error("crop_resize", "degenerate box [" + std::to_string(y1) + "," + std::to_string(x1) +
                                   "," + std::to_string(y2) + "," + std::to_string(x2) + "]");
  const int c = x.shape()[0], h = x.shape()[1], w = x.shape()[2];
  const i64 plane = static_cast<i64>(h) * w;
  std::vector<BilinearSample> samples(static_cast<size_t>(ph) * pw);
  for (int i = 0; i < ph; ++i) {
    const double cy = y1 + (i + 0.5) * (y2 - y1) / ph - 0.5;
    for (int j = 0; j < pw; ++j) {
      const double cx = x1 + (j + 0.5) * (x2 - x1) / pw - 0.5;
      samples[static_cast<size_t>(i) * pw + j] = bilinear_at(cy, cx, h, w);
    }
  }
  std::vector<double> y(static_cast<size_t>(c) * ph * pw);
  for (int ch = 0; ch < c; ++ch) {
    const double* plane_p = x.data() + ch * plane;
    double* out_p = y.data() + static_cast<i64>(ch) * ph * pw;
    for (size_t s = 0; s < samples.size(); ++s) {
      const BilinearSample& b = samples[s];
      out_p[s] = b.w00 * plane_p[static_cast<i64>(b.y0) * w + b.x0] +
                 b.w01 * plane_p[static_cast<i64>(b.y0) * w + b.x1] +
                 b.w10 * plane_p[static_cast<i64>(b.y1) * w + b.x0] +
                 b.w11 * plane_p[static_cast<i64>(b.y1) * w + b.x1];
    }
  }
  Shape out_shape{c, ph, pw};
  if (!x.on_tape()) return Tensor(out_shape, std::move(y));
  Tensor xv = x;
  return x.tape()->emit(out_shape, std::move(y), [xv, samples, c, h, w, plane](Tape& t, int self) {
    const auto& g = t.grad(self);
    auto& gx = t.grad(xv.node());
    const i64 n = static_cast<i64>(samples.size());
    for (int ch = 0; ch < c; ++ch) {
      double* gp = gx.data() + ch * plane;
      const double* go = g.data() + ch * n;
      for (i64 s = 0; s < n; ++s) {
        const BilinearSample& b = samples[static_cast<size_t>(s)];
        gp[static_cast<i64>(b.y0) * w + b.x0] += go[s] * b.w00;
        gp[static_cast<i64>(b.y0) * w + b.x1] += go[s] * b.w01;
        gp[static_cast<i64>(b.y1) * w + b.x0] += go[s] * b.w10;
        gp[static_cast<i64>(b.y1) * w + b.x1] += go[s] * b.w11;
      }
    }
  });
}

Tensor resize_bilinear(const Tensor& x, int h2, int w2) {
  if (x.shape().rank() != 3) shape_error("resize_bilinear", "expected [C,h,w], got " + x.shape().str());
  // Identity target size is exact by construction (cell centers map to cells).
  return crop_resize(x, 0.0, 0.0, static_cast<double>(x.shape()[1]),
                     static_cast<double>(x.shape()[2]), h2, w2);
}

}  // namespace acrn
