#pragma once

#include <string>
#include <vector>

#include "acrn/backbone.hpp"
#include "acrn/box.hpp"

namespace acrn {

// Per-cell object descriptors: feature map channels with the two normalized
// cell-coordinate channels (row/h, col/w) appended.
struct ObjectDescriptorMap {
  Tensor tensor;  // [C+2,h,w]
};

struct ActorDescriptor {
  Tensor feature;    // f^a, [C_a,1,1]
  Tensor box_embed;  // box normalized to [0,1] image coordinates, [4,1,1]
};

struct RelationConfig {
  std::vector<std::pair<std::string, double>> feature_layers = {{"F", 1.0}};
  int relation_channels = 64;
  int aggregation_depth = 2;
  double grad_multiplier = 0.01;
  void validate() const;
};

ObjectDescriptorMap build_object_descriptors(const FeatureMap& fmap);
ObjectDescriptorMap build_object_descriptors(const Tensor& fm2d);

ActorDescriptor make_actor_descriptor(const Tensor& embedding, const Box& box, double image_w,
                                      double image_h);

// Tiles the actor descriptor over the grid, normalizes the object map to the
// actor feature's scale, applies the shared-feature gradient multiplier and a
// 1x1 conv + ReLU.
Tensor pairwise_relations(const ActorDescriptor& actor, const ObjectDescriptorMap& objs,
                          Bound& params, const std::string& prefix, int relation_channels,
                          double grad_multiplier);

// Stacked 3x3 convs (pad 1, ReLU) then global average pooling -> [C_a,1,1].
// If capture_map is non-null it receives the pre-pool aggregated map.
Tensor aggregate_relations(const Tensor& relmap, Bound& params, const std::string& prefix,
                           int aggregation_depth, int actor_channels, Tensor* capture_map);

struct RelationCapture {
  std::vector<Tensor> aggregated_maps;  // pre-pool map per feature layer
};

// Full relation branch over the configured feature layers; multi-layer
// outputs are summed. Returns concat(f^a, f^RN) of size [2*C_a,1,1].
Tensor acr_feature(const ActorDescriptor& actor, const FeaturePyramid& pyramid,
                   const RelationConfig& cfg, Bound& params, int actor_channels,
                   RelationCapture* capture);

// Averaged-relation baseline: per-cell 1x1 relations, spatial mean, one
// linear layer -> [C_a,1,1].
Tensor baseline_santoro(const ActorDescriptor& actor, const ObjectDescriptorMap& objs,
                        Bound& params, const std::string& prefix, int relation_channels,
                        int actor_channels, double grad_multiplier);

// Resize-and-concat baseline: global map resized to the pooled patch size,
// normalized, concatenated and mixed back to the original channel count.
Tensor baseline_resize_concat(const Tensor& pooled, const FeatureMap& fmap, Bound& params,
                              const std::string& prefix, double grad_multiplier);

}  // namespace acrn
