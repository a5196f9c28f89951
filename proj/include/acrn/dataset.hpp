#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "acrn/box.hpp"
#include "acrn/rng.hpp"
#include "acrn/tensor.hpp"

namespace acrn {

// Action vocabulary. Classifier class indices are shifted by one: index 0 is
// reserved for background.
enum class Action : int {
  ApproachObject = 0,
  RetreatFromObject = 1,
  OrbitObject = 2,
  CarryObject = 3,
  Idle = 4,
};
inline constexpr int kNumActions = 5;
inline constexpr int kNumClasses = kNumActions + 1;  // + background
const std::vector<std::string>& action_names();
inline int class_of(Action a) { return static_cast<int>(a) + 1; }

struct GenConfig {
  int image_size = 64;
  int frames = 8;
  int objects_min = 1;
  int objects_max = 2;
  double actor_size = 12;       // square sprite side, pixels
  double object_radius = 3;     // disk radius, pixels
  double interaction_radius = 20;
  double approach_delta = 5;    // minimum net distance change for approach/retreat
  double contact_dist = 6;      // carry: distance below this on every frame
  double orbit_sweep_deg = 90;  // minimum angular sweep for orbit
  double orbit_dist_tol = 3;    // orbit: max distance variation
  void validate() const;
};

// One moving entity: rendered center per frame plus its footprint.
struct EntityPath {
  enum class Kind { Actor, Disk };
  Kind kind = Kind::Disk;
  std::vector<std::array<double, 2>> centers;  // (x, y) per frame
  double half_extent = 3;
};

struct SceneSpec {
  int image_size = 64;
  int frames = 8;
  EntityPath actor;
  std::vector<EntityPath> objects;
  Action label = Action::Idle;
};

struct Annotation {
  Box box;
  Action action;
};

struct VideoSample {
  Tensor frames;  // [T,3,H,W], values exactly representable in f32
  int key_frame = 0;
  std::vector<Annotation> annotations;
  // Generator-side extras (not serialized): per-frame actor boxes and object
  // centers, used for tube ground truth and heatmap statistics.
  std::vector<Box> actor_track;
  std::vector<std::vector<std::array<double, 2>>> object_tracks;
};

// Deterministic scene construction and replayable labeling.
SceneSpec make_scene(std::uint64_t seed, std::int64_t index, const GenConfig& cfg);
// Applies the labeling rules to the stored trajectories; precedence
// carry > approach > retreat > orbit > idle.
Action label_from_paths(const SceneSpec& scene, const GenConfig& cfg);
VideoSample render_scene(const SceneSpec& scene);

VideoSample generate_one(std::uint64_t seed, std::int64_t index, const GenConfig& cfg);
std::vector<VideoSample> generate(std::uint64_t seed, std::int64_t n_samples, const GenConfig& cfg);

// Single-sample binary round trip (bit-exact).
std::vector<std::uint8_t> serialize_sample(const VideoSample& sample);
VideoSample deserialize_sample(const std::uint8_t* bytes, std::size_t len);

// Dataset file: magic "ACRNDS1\n", u32 count, then serialized samples.
void save_dataset(const std::string& path, const std::vector<VideoSample>& samples);
std::vector<VideoSample> load_dataset(const std::string& path);

// Uniform access for training: streamed regeneration or a loaded file.
class SampleSource {
 public:
  virtual ~SampleSource() = default;
  virtual std::int64_t size() const = 0;
  virtual VideoSample get(std::int64_t index) const = 0;
};
std::unique_ptr<SampleSource> make_stream_source(std::uint64_t seed, std::int64_t n,
                                                 const GenConfig& cfg);
std::unique_ptr<SampleSource> make_file_source(const std::string& path);

}  // namespace acrn
