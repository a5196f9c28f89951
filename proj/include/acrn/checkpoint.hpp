#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "acrn/rng.hpp"
#include "acrn/tensor.hpp"

namespace acrn {

// Checkpoint payload: named f64 tensors plus trainer metadata. The on-disk
// format is magic "ACRN1\n" followed by records of
//   u32 name_len | name bytes | u32 rank | u32 dims[rank] | f64 payload
// all little-endian. Metadata rides in reserved "__"-prefixed records so the
// round trip stays bit-exact.
struct CheckpointData {
  std::int64_t step = 0;
  std::uint64_t config_hash = 0;
  Rng::State rng{};
  bool has_rng = false;
  std::vector<std::pair<std::string, Tensor>> tensors;
};

void save_checkpoint(const std::string& path, const CheckpointData& data);
CheckpointData load_checkpoint(const std::string& path);

CheckpointData checkpoint_from_store(const ParameterStore& store, std::int64_t step,
                                     std::uint64_t config_hash, const Rng::State* rng);
// Populates an empty store from checkpoint tensors (file order preserved).
void store_from_checkpoint(const CheckpointData& data, ParameterStore& store);

}  // namespace acrn
