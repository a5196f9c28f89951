#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "acrn/config.hpp"
#include "acrn/dataset.hpp"
#include "acrn/metrics.hpp"
#include "acrn/model.hpp"

namespace acrn {

struct TrainConfig {
  std::int64_t total_steps = 5000;
  std::int64_t warmup_steps = 500;
  double lr_start = 1e-5;
  double lr_peak = 1e-3;
  double momentum = 0.9;
  double w_objectness = 1.0;
  double w_proposal_box = 1.0;
  double w_action_class = 1.0;
  double w_action_box = 1.0;
  std::uint64_t seed = 1;
  std::int64_t log_every = 100;
  std::int64_t checkpoint_every = 1000;

  std::uint64_t data_seed = 7;
  std::int64_t train_samples = 2000;
  std::string dataset_path;  // when set, train from this file instead

  std::int64_t eval_samples = 500;
  std::uint64_t eval_data_seed = 0;  // 0 -> data_seed + 1,000,003
  bool eval_video_ap = true;

  GenConfig gen;
  ModelConfig model;

  void validate() const;
  static TrainConfig from_config(const Config& cfg);
  static const std::vector<std::string>& known_keys();
};

// Linear warmup from lr_start to lr_peak, then cosine decay to zero.
double lr_schedule(std::int64_t step, const TrainConfig& cfg);

struct LossBreakdown {
  double objectness = 0, proposal_box = 0, action_class = 0, action_box = 0, total = 0;
};

struct TrainResult {
  std::vector<std::pair<std::int64_t, LossBreakdown>> curve;
  std::int64_t steps = 0;
};

// SGD with momentum over single-sample steps. Deterministic for a fixed
// config. Saves checkpoints under out_dir ("checkpoint.bin"); a NaN loss
// aborts with the step in the message, keeping the last saved checkpoint.
TrainResult train(const TrainConfig& cfg, ParameterStore& store, const SampleSource& data,
                  const std::string& out_dir, std::ostream* log);

struct EvalReport {
  ApResult frame;
  std::optional<ApResult> video;
};

EvalReport evaluate(ParameterStore& store, const TrainConfig& cfg, const SampleSource& data);

// CLI entry point (subcommands gen-data / train / eval / heatmap / gradcheck).
int cli_main(const std::vector<std::string>& args);

}  // namespace acrn
