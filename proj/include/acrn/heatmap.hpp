#pragma once

#include <string>
#include <vector>

#include "acrn/box.hpp"
#include "acrn/tensor.hpp"

namespace acrn {

// Per-location class-logit contribution of the relation branch, on the
// aggregated relation map's grid. Raw contributions (may be negative); the
// exporter min-max normalizes.
struct Heatmap {
  std::vector<double> grid;
  int h = 0, w = 0;
  Box actor_box;
  int action = 0;
};

double heatmap_mean(const Heatmap& hm);

// Overlays the min-max normalized heatmap as the red channel over the
// grayscale key frame and writes a binary PPM (P6, maxval 255). Heatmap cells
// are block-upsampled to the frame resolution.
void export_heatmap_image(const Heatmap& hm, const Tensor& frame, const std::string& path);

}  // namespace acrn
