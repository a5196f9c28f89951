#pragma once

#include <vector>

#include "acrn/tensor.hpp"

namespace acrn {

// ---- elementwise / algebra ----
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& x, double c);
Tensor relu(const Tensor& x);
Tensor sigmoid(const Tensor& x);
Tensor sum_all(const Tensor& x);  // -> scalar

// ---- shape / assembly ----
// Channel-axis concatenation of [C_i,H,W] maps (or [C_i,1,1] vectors).
Tensor concat_channels(const std::vector<Tensor>& xs);
// Broadcast [C,1,1] to [C,h,w]; backward sums over the tile.
Tensor tile_spatial(const Tensor& x, int h, int w);
// Mean over the leading time axis of [T,C,H,W] -> [C,H,W].
Tensor temporal_mean(const Tensor& x);

// ---- convolution family ----
// x:[C,H,W], k:[Co,Ci,kh,kw]. H' = (H + 2*pad - kh)/stride + 1.
Tensor conv2d(const Tensor& x, const Tensor& k, int stride, int pad);
// x:[T,C,H,W]; conv2d applied per frame with shared kernel.
Tensor conv2d_frames(const Tensor& x, const Tensor& k, int stride, int pad);
// x:[T,C,H,W], k:[Co,C,kT] -> [T-kT+1,Co,H,W]; time axis only.
Tensor temporal_conv(const Tensor& x, const Tensor& k);
// x:[T,C,H,W], k:[Co,C,T] (time extent must equal T exactly) -> [Co,H,W].
Tensor temporal_flatten(const Tensor& x, const Tensor& k);
// b:[C] added per channel; x may be [C,H,W] or [T,C,H,W].
Tensor add_channel_bias(const Tensor& x, const Tensor& b);

// ---- pooling / normalization / gating ----
Tensor avg_pool_global(const Tensor& x);  // [C,H,W] -> [C,1,1]
// Per-channel multiply of [C,H,W] by g:[C,1,1].
Tensor mul_channel(const Tensor& x, const Tensor& g);
// out[c] = x[c] * sigmoid((W * avgpool(x) + b)[c]); w:[C,C], b:[C].
Tensor gate_channels(const Tensor& x, const Tensor& w, const Tensor& b);
// x / ||x|| * ||ref||; zero output when ||x|| < 1e-12. ref is treated as a
// constant for the scale (no gradient to ref).
Tensor l2_normalize_rescale(const Tensor& x, const Tensor& ref);
// Forward identity; backward multiplies the incoming gradient by factor.
Tensor grad_scale(const Tensor& x, double factor);

// ---- linear & losses ----
// x flattened to length N, w:[M,N], b:[M] -> [M].
Tensor linear(const Tensor& x, const Tensor& w, const Tensor& b);
Tensor softmax_cross_entropy(const Tensor& logits, int label);
// Elementwise binary CE on logits vs targets in [0,1], summed.
Tensor sigmoid_cross_entropy(const Tensor& logits, const Tensor& targets);
// Sum of huber(pred-target) with the quadratic/linear switch at |d|=1.
Tensor smooth_l1(const Tensor& pred, const Tensor& target);

// ---- sampling ----
// Bilinear crop-and-resize on feature-coordinate box edges [y1,x1)x[y2,x2).
// Samples ph x pw cell centers; coordinates clamped to the map border.
Tensor crop_resize(const Tensor& x, double y1, double x1, double y2, double x2,
                   int ph, int pw);
Tensor resize_bilinear(const Tensor& x, int h2, int w2);

// Inference-side softmax (no tape).
std::vector<double> softmax(const double* logits, int k);

}  // namespace acrn
