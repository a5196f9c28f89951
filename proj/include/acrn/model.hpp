#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "acrn/backbone.hpp"
#include "acrn/dataset.hpp"
#include "acrn/detection.hpp"
#include "acrn/heatmap.hpp"
#include "acrn/relation.hpp"

namespace acrn {

enum class Variant { Base, Acrn, ResizeConcat, Santoro };
Variant variant_from_name(const std::string& name);
std::string variant_name(Variant v);

enum class ClsMode { Softmax, Sigmoid };

struct ModelConfig {
  BackboneConfig backbone = BackboneConfig::default_toy();
  RelationConfig relation;
  Variant variant = Variant::Acrn;
  ProposalMode proposal_mode = ProposalMode::OracleJitter;
  double anchor_scale = 3.0;
  int proposal_topk = 8;
  double nms_iou = 0.7;
  double jitter = 0.1;
  int pool_size = 5;
  int actor_channels = 64;
  int input_frames = 8;
  ClsMode cls_mode = ClsMode::Softmax;
  int image_size = 64;

  void validate() const;
  // Binds checkpoints to the architecture that produced them.
  std::uint64_t hash() const;
};

struct ProposalOutput {
  Proposal proposal;
  Tensor embedding;     // f^a
  Tensor features;      // classifier input (f^a or concat(f^a, f^RN))
  Tensor class_logits;  // [kNumClasses] (softmax) or [kNumActions] (sigmoid)
  Tensor box_deltas;    // [4]
  RelationCapture relation;  // populated for the relation variants
};

struct ModelOutput {
  FeaturePyramid pyramid;
  ProposalSet proposals;
  std::vector<ProposalOutput> outputs;
};

// Runs backbone + proposals + per-proposal heads for one clip.
// clip: [T,3,H,W] with T == cfg.input_frames. gt_boxes drive oracle-jitter
// proposals; rng may be null when the mode does not draw noise.
ModelOutput model_forward(Tape* tape, ParameterStore& store, const ModelConfig& cfg,
                          const Tensor& clip, const std::vector<Box>& gt_boxes, Rng* rng);

// Selects the input window around the key frame (clamped) from a sample.
Tensor clip_window(const VideoSample& sample, int input_frames, int center_frame);

// Decoded, clipped detections for one forward pass.
std::vector<Detection> decode_detections(const ModelOutput& out, const ModelConfig& cfg);

// Class activation map of the relation branch for one actor box. Requires a
// relation variant; the spatial mean of the returned grid equals the
// relation branch's contribution to that class logit.
Heatmap cam_heatmap(ParameterStore& store, const ModelConfig& cfg, const VideoSample& sample,
                    const Box& actor_box, int action);

// Relation-branch contribution to the class logit (weights' relation slice
// dotted with f^RN), for the CAM identity check.
double relation_logit_contribution(ParameterStore& store, const ModelConfig& cfg,
                                   const VideoSample& sample, const Box& actor_box, int action);

}  // namespace acrn
