#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "acrn/box.hpp"

namespace acrn {

struct PRPoint {
  double precision = 0;
  double recall = 0;
};

// One class-scored detection inside an evaluation set.
struct DetRecord {
  int image = 0;
  int action = 0;  // vocabulary index, background excluded
  double score = 0;
  Box box;
  int index = 0;  // within-image detection index, tie-break only
};

struct GtRecord {
  int image = 0;
  int action = 0;
  Box box;
};

struct ApResult {
  std::map<int, double> per_class;                 // only classes with ground truth
  std::map<int, std::vector<PRPoint>> curves;
  std::vector<int> absent;                         // classes with zero GT instances
  double mean = 0;
};

// Greedy score-ranked matching at the IoU threshold, all-points interpolated
// AP per class, mean over classes that have ground truth.
ApResult frame_ap(const std::vector<DetRecord>& dets, const std::vector<GtRecord>& gts,
                  double iou_threshold);

struct TubeEntry {
  int frame = 0;
  Box box;
  double score = 0;
};

struct Tube {
  int action = 0;
  std::vector<TubeEntry> entries;  // consecutive frames
  double score = 0;                // mean member score
};

struct LinkParams {
  double iou_weight = 1.0;  // lambda
  int min_len = 2;
};

// Per-frame detections (frame-indexed, consecutive) for ONE class.
// Best-first extraction of score+lambda*IoU maximizing chains.
std::vector<Tube> link_tubes(const std::vector<std::vector<TubeEntry>>& per_frame, int action,
                             const LinkParams& params);

// Mean per-frame IoU over the union of the two frame spans (missing -> 0).
double tube_iou(const Tube& a, const Tube& b);

ApResult video_ap(const std::vector<Tube>& tubes, const std::vector<Tube>& gt_tubes,
                  double iou_threshold);

// Report formatting shared by evaluate and the CLI.
std::string ap_table(const ApResult& frame, const std::optional<ApResult>& video);
std::string ap_machine_lines(const ApResult& frame, const std::optional<ApResult>& video);

}  // namespace acrn
