#include "acrn/ops.hpp"

#include <algorithm>
#include <cmath>

namespace acrn {

namespace {

Tape* common_tape(std::initializer_list<const Tensor*> ts, const char* op) {
  Tape* t = nullptr;
  for (const Tensor* x : ts) {
    if (!x->on_tape()) continue;
    if (!t)
      t = x->tape();
    else if (t != x->tape())
      shape_error(op, "inputs belong to two different tapes");
  }
  return t;
}

inline bool on(const Tensor& x, const Tape& tp) { return x.tape() == &tp; }

void check_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (!(a.shape() == b.shape()))
    shape_error(op, "shape mismatch " + a.shape().str() + " vs " + b.shape().str());
}

}  // namespace

Tensor add(const Tensor& a, const Tensor& b) {
  check_same_shape(a, b, "add");
  std::vector<double> y(static_cast<size_t>(a.numel()));
  for (i64 i = 0; i < a.numel(); ++i) y[i] = a.data()[i] + b.data()[i];
  Tape* tp = common_tape({&a, &b}, "add");
  if (!tp) return Tensor(a.shape(), std::move(y));
  Tensor av = a, bv = b;
  return tp->emit(a.shape(), std::move(y), [av, bv](Tape& t, int self) {
    const auto& g = t.grad(self);
    if (on(av, t)) {
      auto& ga = t.grad(av.node());
      for (size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
    }
    if (on(bv, t)) {
      auto& gb = t.grad(bv.node());
      for (size_t i = 0; i < g.size(); ++i) gb[i] += g[i];
    }
  });
}

Tensor sub(const Tensor& a, const Tensor& b) {
  check_same_shape(a, b, "sub");
  std::vector<double> y(static_cast<size_t>(a.numel()));
  for (i64 i = 0; i < a.numel(); ++i) y[i] = a.data()[i] - b.data()[i];
  Tape* tp = common_tape({&a, &b}, "sub");
  if (!tp) return Tensor(a.shape(), std::move(y));
  Tensor av = a, bv = b;
  return tp->emit(a.shape(), std::move(y), [av, bv](Tape& t, int self) {
    const auto& g = t.grad(self);
    if (on(av, t)) {
      auto& ga = t.grad(av.node());
      for (size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
    }
    if (on(bv, t)) {
      auto& gb = t.grad(bv.node());
      for (size_t i = 0; i < g.size(); ++i) gb[i] -= g[i];
    }
  });
}

Tensor mul(const Tensor& a, const Tensor& b) {
  check_same_shape(a, b, "mul");
  std::vector<double> y(static_cast<size_t>(a.numel()));
  for (i64 i = 0; i < a.numel(); ++i) y[i] = a.data()[i] * b.data()[i];
  Tape* tp = common_tape({&a, &b}, "mul");
  if (!tp) return Tensor(a.shape(), std::move(y));
  Tensor av = a, bv = b;
  return tp->emit(a.shape(), std::move(y), [av, bv](Tape& t, int self) {
    const auto& g = t.grad(self);
    if (on(av, t)) {
      auto& ga = t.grad(av.node());
      for (size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * bv.data()[i];
    }
    if (on(bv, t)) {
      auto& gb = t.grad(bv.node());
      for (size_t i = 0; i < g.size(); ++i) gb[i] += g[i] * av.data()[i];
    }
  });
}

Tensor scale(const Tensor& x, double c) {
  std::vector<double> y(static_cast<size_t>(x.numel()));
  for (i64 i = 0; i < x.numel(); ++i) y[i] = x.data()[i] * c;
  Tape* tp = common_tape({&x}, "scale");
  if (!tp) return Tensor(x.shape(), std::move(y));
  Tensor xv = x;
  return tp->emit(x.shape(), std::move(y), [xv, c](Tape& t, int self) {
    const auto& g = t.grad(self);
    auto& gx = t.grad(xv.node());
    for (size_t i = 0; i < g.size(); ++i) gx[i] += g[i] * c;
  });
}

Tensor relu(const Tensor& x) {
  std::vector<double> y(static_cast<size_t>(x.numel()));
  for (i64 i = 0; i < x.numel(); ++i) y[i] = x.data()[i] > 0.0 ? x.data()[i] : 0.0;
  Tape* tp = common_tape({&x}, "relu");
  if (!tp) return Tensor(x.shape(), std::move(y));
  Tensor xv = x;
  return tp->emit(x.shape(), std::move(y), [xv](Tape& t, int self) {
    const auto& g = t.grad(self);
    auto& gx = t.grad(xv.node());
    for (size_t i = 0; i < g.size(); ++i)
      if (xv.data()[i] > 0.0) gx[i] += g[i];
  });
}

Tensor sigmoid(const Tensor& x) {
  std::vector<double> y(static_cast<size_t>(x.numel()));
  for (i64 i = 0; i < x.numel(); ++i) y[i] = 1.0 / (1.0 + std::exp(-x.data()[i]));
  Tape* tp = common_tape({&x}, "sigmoid");
  if (!tp) return Tensor(x.shape(), std::move(y));
  Tensor xv = x;
  std::vector<double> yv = y;  // reuse forward values in backward
  return tp->emit(x.shape(), std::move(y), [xv, yv](Tape& t, int self) {
    const auto& g = t.grad(self);
    auto& gx = t.grad(xv.node());
    for (size_t i = 0; i < g.size(); ++i) gx[i] += g[i] * yv[i] * (1.0 - yv[i]);
  });
}

Tensor sum_all(const Tensor& x) {
  double s = 0.0;
  for (i64 i = 0; i < x.numel(); ++i) s += x.data()[i];
  Tape* tp = common_tape({&x}, "sum_all");
  if (!tp) return Tensor::scalar(s);
  Tensor xv = x;
  return tp->emit(Shape{}, {s}, [xv](Tape& t, int self) {
    const double g = t.grad(self)[0];
    auto& gx = t.grad(xv.node());
    for (size_t i = 0; i < gx.size(); ++i) gx[i] += g;
  });
}

Tensor concat_channels(const std::vector<Tensor>& xs) {
  if (xs.empty()) shape_error("concat_channels", "no inputs");
  for (const Tensor& x : xs)
    if (x.shape().rank() != 3)
      shape_error("concat_channels", "expected rank-3 input, got " + x.shape().str());
  const int h = xs[0].shape()[1], w = xs[0].shape()[2];
  int ctot = 0;
  for (const Tensor& x : xs) {
    if (x.shape()[1] != h || x.shape()[2] != w)
      shape_error("concat_channels", "spatial mismatch " + xs[0].shape().str() + " vs " + x.shape().str());
    ctot += x.shape()[0];
  }
  const i64 plane = static_cast<i64>(h) * w;
  std::vector<double> y(static_cast<size_t>(ctot) * plane);
  i64 off = 0;
  for (const Tensor& x : xs) {
    std::copy(x.data(), x.data() + x.numel(), y.begin() + off);
    off += x.numel();
  }
  std::vector<const Tensor*> ptrs;
  for (const Tensor& x : xs) ptrs.push_back(&x);
  Tape* tp = nullptr;
  for (const Tensor& x : xs)
    if (x.on_tape()) {
      if (tp && tp != x.tape()) shape_error("concat_channels", "inputs belong to two different tapes");
      tp = x.tape();
    }
  if (!tp) return Tensor(Shape{ctot, h, w}, std::move(y));
  std::vector<Tensor> xv = xs;
  return tp->emit(Shape{ctot, h, w}, std::move(y), [xv](Tape& t, int self) {
    const auto& g = t.grad(self);
    i64 off = 0;
    for (const Tensor& x : xv) {
      if (on(x, t)) {
        auto& gx = t.grad(x.node());
        for (i64 i = 0; i < x.numel(); ++i) gx[i] += g[off + i];
      }
      off += x.numel();
    }
  });
}

Tensor tile_spatial(const Tensor& x, int h, int w) {
  if (x.shape().rank() != 3 || x.shape()[1] != 1 || x.shape()[2] != 1)
    shape_error("tile_spatial", "expected [C,1,1], got " + x.shape().str());
  if (h < 1 || w < 1) shape_error("tile_spatial", "target extent must be >= 1");
  const int c = x.shape()[0];
  const i64 plane = static_cast<i64>(h) * w;
  std::vector<double> y(static_cast<size_t>(c) * plane);
  for (int ch = 0; ch < c; ++ch)
    std::fill(y.begin() + ch * plane, y.begin() + (ch + 1) * plane, x.data()[ch]);
  Tape* tp = common_tape({&x}, "tile_spatial");
  if (!tp) return Tensor(Shape{c, h, w}, std::move(y));
  Tensor xv = x;
  return tp->emit(Shape{c, h, w}, std::move(y), [xv, plane](Tape& t, int self) {
    const auto& g = t.grad(self);
    auto& gx = t.grad(xv.node());
    const int c = xv.shape()[0];
    for (int ch = 0; ch < c; ++ch) {
      double s = 0.0;
      for (i64 i = 0; i < plane; ++i) s += g[ch * plane + i];
      gx[ch] += s;
    }
  });
}

Tensor temporal_mean(const Tensor& x) {
  if (x.shape().rank() != 4) shape_error("temporal_mean", "expected [T,C,H,W], got " + x.shape().str());
  const int tdim = x.shape()[0];
  const i64 rest = x.numel() / tdim;
  std::vector<double> y(static_cast<size_t>(rest), 0.0);
  for (int f = 0; f < tdim; ++f)
    for (i64 i = 0; i < rest; ++i) y[i] += x.data()[f * rest + i];
  const double inv = 1.0 / tdim;
  for (i64 i = 0; i < rest; ++i) y[i] *= inv;
  Shape out{x.shape()[1], x.shape()[2], x.shape()[3]};
  Tape* tp = common_tape({&x}, "temporal_mean");
  if (!tp) return Tensor(out, std::move(y));
  Tensor xv = x;
  return tp->emit(out, std::move(y), [xv, tdim, rest, inv](Tape& t, int self) {
    const auto& g = t.grad(self);
    auto& gx = t.grad(xv.node());
    for (int f = 0; f < tdim; ++f)
      for (i64 i = 0; i < rest; ++i) gx[f * rest + i] += g[i] * inv;
  });
}

Tensor avg_pool_global(const Tensor& x) {
  if (x.shape().rank() != 3) shape_error("avg_pool_global", "expected [C,H,W], got " + x.shape().str());
  const int c = x.shape()[0];
  const i64 plane = static_cast<i64>(x.shape()[1]) * x.shape()[2];
  if (plane < 1) shape_error("avg_pool_global", "empty spatial extent");
  std::vector<double> y(static_cast<size_t>(c));
  const double inv = 1.0 / static_cast<double>(plane);
  for (int ch = 0; ch < c; ++ch) {
    double s = 0.0;
    for (i64 i = 0; i < plane; ++i) s += x.data()[ch * plane + i];
    y[ch] = s * inv;
  }
  Tape* tp = common_tape({&x}, "avg_pool_global");
  if (!tp) return Tensor(Shape{c, 1, 1}, std::move(y));
  Tensor xv = x;
  return tp->emit(Shape{c, 1, 1}, std::move(y), [xv, plane, inv](Tape& t, int self) {
    const auto& g = t.grad(self);
    auto& gx = t.grad(xv.node());
    const int c = xv.shape()[0];
    for (int ch = 0; ch < c; ++ch)
      for (i64 i = 0; i < plane; ++i) gx[ch * plane + i] += g[ch] * inv;
  });
}

Tensor mul_channel(const Tensor& x, const Tensor& g) {
  if (x.shape().rank() != 3) shape_error("mul_channel", "expected [C,H,W], got " + x.shape().str());
  const int c = x.shape()[0];
  if (g.numel() != c)
    shape_error("mul_channel", "gate has " + std::to_string(g.numel()) + " values for " +
                                   std::to_string(c) + " channels");
  const i64 plane = static_cast<i64>(x.shape()[1]) * x.shape()[2];
  std::vector<double> y(static_cast<size_t>(x.numel()));
  for (int ch = 0; ch < c; ++ch)
    for (i64 i = 0; i < plane; ++i) y[ch * plane + i] = x.data()[ch * plane + i] * g.data()[ch];
  Tape* tp = common_tape({&x, &g}, "mul_channel");
  if (!tp) return Tensor(x.shape(), std::move(y));
  Tensor xv = x, gv = g;
  return tp->emit(x.shape(), std::move(y), [xv, gv, plane](Tape& t, int self) {
    const auto& gr = t.grad(self);
    const int c = xv.shape()[0];
    if (on(xv, t)) {
      auto& gx = t.grad(xv.node());
      for (int ch = 0; ch < c; ++ch)
        for (i64 i = 0; i < plane; ++i) gx[ch * plane + i] += gr[ch * plane + i] * gv.data()[ch];
    }
    if (on(gv, t)) {
      auto& gg = t.grad(gv.node());
      for (int ch = 0; ch < c; ++ch) {
        double s = 0.0;
        for (i64 i = 0; i < plane; ++i) s += gr[ch * plane + i] * xv.data()[ch * plane + i];
        gg[ch] += s;
      }
    }
  });
}

Tensor gate_channels(const Tensor& x, const Tensor& w, const Tensor& b) {
  if (x.shape().rank() != 3) shape_error("gate_channels", "expected [C,H,W], got " + x.shape().str());
  const int c = x.shape()[0];
  if (w.shape().rank() != 2 || w.shape()[0] != c || w.shape()[1] != c || b.numel() != c)
    shape_error("gate_channels", "weights " + w.shape().str() + " / bias " + b.shape().str() +
                                     " do not match " + std::to_string(c) + " channels");
  Tensor pooled = avg_pool_global(x);
  Tensor gate = sigmoid(linear(pooled, w, b));
  return mul_channel(x, gate);
}

Tensor l2_normalize_rescale(const Tensor& x, const Tensor& ref) {
  if (x.numel() == 0 || ref.numel() == 0) shape_error("l2_normalize_rescale", "empty input");
  double nx = 0.0, nr = 0.0;
  for (i64 i = 0; i < x.numel(); ++i) nx += x.data()[i] * x.data()[i];
  for (i64 i = 0; i < ref.numel(); ++i) nr += ref.data()[i] * ref.data()[i];
  nx = std::sqrt(nx);
  nr = std::sqrt(nr);
  const bool degenerate = nx < 1e-12;
  const double s = degenerate ? 0.0 : nr / nx;
  std::vector<double> y(static_cast<size_t>(x.numel()));
  for (i64 i = 0; i < x.numel(); ++i) y[i] = x.data()[i] * s;
  Tape* tp = common_tape({&x}, "l2_normalize_rescale");  // ref: constant scale
  if (!tp) return Tensor(x.shape(), std::move(y));
  Tensor xv = x;
  return tp->emit(x.shape(), std::move(y), [xv, s, nx, degenerate](Tape& t, int self) {
    if (degenerate) return;
    const auto& g = t.grad(self);
    auto& gx = t.grad(xv.node());
    double xg = 0.0;
    for (size_t i = 0; i < g.size(); ++i) xg += xv.data()[i] * g[i];
    const double k = s / (nx * nx);
    for (size_t i = 0; i < g.size(); ++i) gx[i] += s * g[i] - k * xg * xv.data()[i];
  });
}

Tensor grad_scale(const Tensor& x, double factor) {
  std::vector<double> y(x.data(), x.data() + x.numel());
  Tape* tp = common_tape({&x}, "grad_scale");
  if (!tp) return Tensor(x.shape(), std::move(y));
  Tensor xv = x;
  return tp->emit(x.shape(), std::move(y), [xv, factor](Tape& t, int self) {
    const auto& g = t.grad(self);
    auto& gx = t.grad(xv.node());
    for (size_t i = 0; i < g.size(); ++i) gx[i] += g[i] * factor;
  });
}

Tensor linear(const Tensor& x, const Tensor& w, const Tensor& b) {
  if (w.shape().rank() != 2) shape_error("linear", "weight must be [M,N], got " + w.shape().str());
  const int m = w.shape()[0], n = w.shape()[1];
  if (x.numel() != n)
    shape_error("linear", "input has " + std::to_string(x.numel()) + " values, weight expects " +
                              std::to_string(n));
  if (b.numel() != m) shape_error("linear", "bias " + b.shape().str() + " vs M=" + std::to_string(m));
  std::vector<double> y(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) {
    double s = b.data()[i];
    const double* wr = w.data() + static_cast<i64>(i) * n;
    for (int j = 0; j < n; ++j) s += wr[j] * x.data()[j];
    y[i] = s;
  }
  Tape* tp = common_tape({&x, &w, &b}, "linear");
  if (!tp) return Tensor(Shape{m}, std::move(y));
  Tensor xv = x, wv = w, bv = b;
  return tp->emit(Shape{m}, std::move(y), [xv, wv, bv](Tape& t, int self) {
    const auto& g = t.grad(self);
    const int m = wv.shape()[0], n = wv.shape()[1];
    if (on(xv, t)) {
      auto& gx = t.grad(xv.node());
      for (int i = 0; i < m; ++i) {
        const double gi = g[i];
        const double* wr = wv.data() + static_cast<i64>(i) * n;
        for (int j = 0; j < n; ++j) gx[j] += wr[j] * gi;
      }
    }
    if (on(wv, t)) {
      auto& gw = t.grad(wv.node());
      for (int i = 0; i < m; ++i) {
        const double gi = g[i];
        double* gwr = gw.data() + static_cast<i64>(i) * n;
        for (int j = 0; j < n; ++j) gwr[j] += gi * xv.data()[j];
      }
    }
    if (on(bv, t)) {
      auto& gb = t.grad(bv.node());
      for (int i = 0; i < m; ++i) gb[i] += g[i];
    }
  });
}

std::vector<double> softmax(const double* logits, int k) {
  double m = logits[0];
  for (int i = 1; i < k; ++i) m = std::max(m, logits[i]);
  std::vector<double> p(static_cast<size_t>(k));
  double z = 0.0;
  for (int i = 0; i < k; ++i) {
    p[i] = std::exp(logits[i] - m);
    z += p[i];
  }
  for (int i = 0; i < k; ++i) p[i] /= z;
  return p;
}

Tensor softmax_cross_entropy(const Tensor& logits, int label) {
  const int k = static_cast<int>(logits.numel());
  if (label < 0 || label >= k)
    shape_error("softmax_cross_entropy", "label " + std::to_string(label) + " out of range [0," +
                                             std::to_string(k) + ")");
  double m = logits.data()[0];
  for (int i = 1; i < k; ++i) m = std::max(m, logits.data()[i]);
  double z = 0.0;
  for (int i = 0; i < k; ++i) z += std::exp(logits.data()[i] - m);
  const double loss = m + std::log(z) - logits.data()[label];
  Tape* tp = common_tape({&logits}, "softmax_cross_entropy");
  if (!tp) return Tensor::scalar(loss);
  Tensor lv = logits;
  return tp->emit(Shape{}, {loss}, [lv, label](Tape& t, int self) {
    const double g = t.grad(self)[0];
    auto& gl = t.grad(lv.node());
    const int k = static_cast<int>(lv.numel());
    std::vector<double> p = softmax(lv.data(), k);
    for (int i = 0; i < k; ++i) gl[i] += g * (p[i] - (i == label ? 1.0 : 0.0));
  });
}

Tensor sigmoid_cross_entropy(const Tensor& logits, const Tensor& targets) {
  check_same_shape(logits, targets, "sigmoid_cross_entropy");
  double loss = 0.0;
  for (i64 i = 0; i < logits.numel(); ++i) {
    const double l = logits.data()[i], t = targets.data()[i];
    loss += std::max(l, 0.0) - l * t + std::log1p(std::exp(-std::abs(l)));
  }
  Tape* tp = common_tape({&logits}, "sigmoid_cross_entropy");  // targets constant
  if (!tp) return Tensor::scalar(loss);
  Tensor lv = logits, tv = targets;
  return tp->emit(Shape{}, {loss}, [lv, tv](Tape& t, int self) {
    const double g = t.grad(self)[0];
    auto& gl = t.grad(lv.node());
    for (i64 i = 0; i < lv.numel(); ++i) {
      const double s = 1.0 / (1.0 + std::exp(-lv.data()[i]));
      gl[i] += g * (s - tv.data()[i]);
    }
  });
}

Tensor smooth_l1(const Tensor& pred, const Tensor& target) {
  check_same_shape(pred, target, "smooth_l1");
  double loss = 0.0;
  for (i64 i = 0; i < pred.numel(); ++i) {
    const double d = pred.data()[i] - target.data()[i];
    loss += std::abs(d) < 1.0 ? 0.5 * d * d : std::abs(d) - 0.5;
  }
  Tape* tp = common_tape({&pred, &target}, "smooth_l1");
  if (!tp) return Tensor::scalar(loss);
  Tensor pv = pred, tv = target;
  return tp->emit(Shape{}, {loss}, [pv, tv](Tape& t, int self) {
    const double g = t.grad(self)[0];
    for (i64 i = 0; i < pv.numel(); ++i) {
      const double d = pv.data()[i] - tv.data()[i];
      const double dd = std::abs(d) < 1.0 ? d : (d > 0 ? 1.0 : -1.0);
      if (on(pv, t)) t.grad(pv.node())[i] += g * dd;
      if (on(tv, t)) t.grad(tv.node())[i] -= g * dd;
    }
  });
}

}  // namespace acrn
