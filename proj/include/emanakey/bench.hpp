#pragma once

#include <cstddef>
#include <cstdint>

#include "emanakey/sweep.hpp"

namespace emanakey {

/// Per-call detect() timing; synthesis and I/O happen before the clock starts.
struct LatencyReport {
  std::size_t traces = 0;
  std::size_t calls = 0;
  double mean_seconds = 0.0;
  double min_seconds = 0.0;
  double max_seconds = 0.0;
  /// The keyboard is polled every millisecond.
  static constexpr double kBudgetSeconds = 1e-3;
  bool within_budget() const noexcept { return mean_seconds < kBudgetSeconds; }
};

/// Times `rounds` passes of Detector::detect over `traces` synthesized
/// traces (keys cycled in index order) on one thread.
LatencyReport measure_detect_latency(const Experiment& exp, const ChannelPreset& preset,
                                     std::size_t traces, std::size_t rounds, std::uint64_t seed);

}  // namespace emanakey
