#pragma once

#include <array>
#include <vector>

namespace acrn {

// Axis-aligned box in input-image pixel coordinates, x1 < x2 and y1 < y2.
struct Box {
  double x1 = 0, y1 = 0, x2 = 0, y2 = 0;

  double w() const { return x2 - x1; }
  double h() const { return y2 - y1; }
  double cx() const { return 0.5 * (x1 + x2); }
  double cy() const { return 0.5 * (y1 + y2); }
  double area() const { return w() * h(); }
  bool valid() const { return x2 > x1 && y2 > y1; }
};

double iou(const Box& a, const Box& b);
Box clip_box(Box b, double width, double height);

// Center-size delta encoding (dx, dy, dw, dh) of target relative to anchor.
std::array<double, 4> encode_box_delta(const Box& target, const Box& anchor);
Box decode_box_delta(const Box& anchor, const std::array<double, 4>& delta);

// Greedy NMS. Returns kept indices ordered by (score desc, index asc);
// suppresses overlap with IoU >= threshold against any kept box.
std::vector<int> nms(const std::vector<Box>& boxes, const std::vector<double>& scores,
                     double iou_threshold);

}  // namespace acrn
