#pragma once

#include <string>
#include <vector>

#include "acrn/ops.hpp"
#include "acrn/tensor.hpp"

namespace acrn {

struct StageConfig {
  int out_channels = 0;
  int spatial_kernel = 3;
  int temporal_kernel = 1;
  int stride = 1;
  bool gated = false;
  std::string name;
};

// Separable spatio-temporal trunk: per-stage 2D conv (+ReLU), optional
// temporal conv (+ReLU) and channel gating; the last stage is collapsed to a
// 2D map by a learned full-extent temporal convolution.
struct BackboneConfig {
  std::vector<StageConfig> stages;
  int input_channels = 3;
  int flatten_channels = 64;

  int total_stride() const;
  void validate() const;
  static BackboneConfig default_toy();
};

// Named 2D activation with its sampling stride relative to input pixels.
struct FeatureMap {
  std::string name;
  Tensor tensor;  // [C,h,w]
  int spatial_stride = 1;
};

struct FeaturePyramid {
  std::vector<FeatureMap> maps;  // per-stage maps, time mean-pooled
  FeatureMap flattened;          // "F"
  bool has(const std::string& name) const;
  const FeatureMap& at(const std::string& name) const;
};

// video: [T,C_in,H,W]; H and W must be divisible by the total stride.
FeaturePyramid backbone_forward(const Tensor& video, const BackboneConfig& cfg, Bound& params);

}  // namespace acrn
