#pragma once

#include <array>
#include <cstdint>

namespace acrn {

// xoshiro256++ with splitmix64 seeding. Hand-rolled so that streams are
// bit-identical across standard libraries, which the fixed-seed corpus and
// checkpoint round-trip tests depend on.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();
  // Uniform in [0,1) with 53 mantissa bits.
  double next_double();
  double uniform(double lo, double hi);
  // Uniform integer in [0, n), n >= 1. Rejection sampling, unbiased.
  std::uint64_t uniform_int(std::uint64_t n);
  // Standard normal via Box-Muller; caches the second value of each pair.
  double normal();

  struct State {
    std::array<std::uint64_t, 4> s;
    bool has_spare;
    double spare;
  };
  State state() const { return {s_, has_spare_, spare_}; }
  void set_state(const State& st);

 private:
  std::array<std::uint64_t, 4> s_{};
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// One-shot 64-bit mix, used to derive per-sample streams from (seed, index).
std::uint64_t mix64(std::uint64_t x);

}  // namespace acrn
