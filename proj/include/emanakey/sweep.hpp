#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "emanakey/channel.hpp"
#include "emanakey/detector.hpp"
#include "emanakey/reference_set.hpp"
#include "emanakey/trace_io.hpp"

namespace emanakey {

/// Everything except the channel that a batch of detection trials needs.
struct Experiment {
  ReferenceSet refs;
  DetectorConfig detector;
  PulseShape pulse;
  TraceLayout layout;
  FrameConfig frame;
  PacketKind data_toggle = PacketKind::Data0;
  /// Glitches added on top of the preset's own, each this many times the
  /// robust max of the trace.
  std::size_t extra_glitches = 0;
  double extra_glitch_factor = 3.0;

  /// Analytic references with every other part at its default.
  static Experiment defaults();
};

struct TrialOutcome {
  KeyId truth;
  /// Empty when the detector reported no signal.
  std::optional<DetectionResult> result;

  bool correct() const noexcept { return result && result->key == truth; }
};

enum class Execution : std::uint8_t { Serial, Parallel };

/// keys x repeats trials, key-major; trial j draws its channel from
/// derive_seed(master_seed, j), the same traces synth_dataset produces.
/// Parallel and serial execution return identical outcomes.
std::vector<TrialOutcome> run_trials(const Experiment& exp, const ChannelPreset& preset,
                                     std::span<const KeyId> keys, std::size_t repeats,
                                     std::uint64_t master_seed,
                                     Execution execution = Execution::Parallel);

double accuracy(std::span<const TrialOutcome> outcomes);
double mean_margin(std::span<const TrialOutcome> outcomes);

/// One row per key, in the order keys first appear. No-signal trials
/// count as incorrect with score and margin 0.
std::vector<SweepRow> summarize(const ChannelPreset& preset, std::span<const TrialOutcome> outcomes);

}  // namespace emanakey
