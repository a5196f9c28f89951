#pragma once

#include <vector>

#include "acrn/backbone.hpp"
#include "acrn/box.hpp"
#include "acrn/rng.hpp"

namespace acrn {

struct Proposal {
  Box box;
  double objectness = 1.0;
};

enum class ProposalMode { Learned, OracleJitter };

struct ProposalParams {
  double anchor_scale = 3.0;  // anchor side = anchor_scale * stride
  int topk = 8;
  double nms_iou = 0.7;
  double jitter = 0.1;  // oracle mode: noise as a fraction of box size
  double image_w = 64, image_h = 64;
};

struct ProposalSet {
  std::vector<Proposal> proposals;
  bool learned = false;
  // Learned mode only, recorded on the tape for the RPN losses.
  Tensor obj_logits;   // [1,h,w]
  Tensor box_deltas;   // [4,h,w]
  std::vector<Box> anchors;  // one square anchor per cell, row-major
};

ProposalSet generate_proposals(const FeatureMap& fmap, Bound& params, ProposalMode mode,
                               const std::vector<Box>& gt_boxes, const ProposalParams& pp,
                               Rng& rng);

// Bilinear crop-and-resize of the box (image coordinates) to [C,P,P].
Tensor roi_pool(const FeatureMap& fmap, const Box& box, int pool_size);

// Two 3x3 convs + global average pool over the pooled patch.
Tensor actor_trunk(const Tensor& pooled, Bound& params, const std::string& prefix,
                   int actor_channels);

struct HeadOut {
  Tensor class_logits;  // [n_classes]
  Tensor box_deltas;    // [4]
};
// Linear classifier + box regressor on a [D,1,1] (or flat) feature.
HeadOut classify(const Tensor& features, Bound& params, int n_classes);

struct ActorHeadOut {
  Tensor embedding;  // f^a, [C_a,1,1]
  Tensor class_logits;
  Tensor box_deltas;
};
ActorHeadOut actor_head(const Tensor& pooled, Bound& params, int actor_channels, int n_classes);

struct Detection {
  Box box;
  std::vector<double> class_scores;  // indexed by action (background excluded)
  int actor_id = -1;
};

}  // namespace acrn
