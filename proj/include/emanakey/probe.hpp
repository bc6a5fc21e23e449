#pragma once

#include <cstddef>
#include <vector>

#include "emanakey/edge_series.hpp"
#include "emanakey/frame.hpp"

namespace emanakey {

/// Uniformly sampled real waveform; sample i sits at start_time + i / sample_rate.
struct Waveform {
  std::vector<double> samples;
  double sample_rate = 0.0;
  double start_time = 0.0;

  double time_of(std::size_t i) const noexcept {
    return start_time + static_cast<double>(i) / sample_rate;
  }
};

struct ProbeConfig {
  double high_volts = 3.3;
  /// 0-100% transition time, centred on the bit boundary.
  double rise_time = 4e-9;
  /// Idle time captured before the first symbol and after the last.
  double pre_trigger = 1e-6;
  double post_trigger = 1e-6;
};

/// Differential probe view of a symbol sequence: J at high_volts, K at 0,
/// SE0 at mid-rail, with linear ramps of rise_time between levels. The line
/// idles in J outside the sequence. Throws InvalidArgument when the sample
/// rate is below 10x the symbol rate.
Waveform simulate_probed_waveform(const LineSymbolSequence& seq, double sample_rate,
                                  const ProbeConfig& config = {});
/// Probe view of the frame's keystroke capture window; time 0 is the first
/// SYNC transition of the DATA packet.
Waveform simulate_probed_waveform(const Frame& frame, double sample_rate,
                                  const ProbeConfig& config = {});

struct WiredPipelineConfig {
  double lowpass_pass_hz = 5e6;
  double lowpass_stop_hz = 20e6;
  double stopband_db = 60.0;
  /// Derivative peaks must exceed this fraction of the robust max of |d|.
  double threshold_fraction = 0.5;
  double skip_fraction = 0.01;
  double min_separation_bits = 2.0 / 3.0;
};

/// Recovers the edge series from a probed waveform: lowpass, derivative,
/// threshold, peak pick, then quantize peak times to bit slots relative to
/// the first peak. Throws NoSignal when no peak clears the threshold.
EdgeSeries wired_pipeline_edges(const Waveform& waveform, double bit_width,
                                const WiredPipelineConfig& config = {});

}  // namespace emanakey
