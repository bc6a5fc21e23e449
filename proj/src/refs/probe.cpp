#include "emanakey/probe.hpp"

#include <algorithm>
#include <cmath>

#include "emanakey/dsp.hpp"
#include "emanakey/error.hpp"
#include "emanakey/kernels.hpp"

namespace emanakey {

Waveform simulate_probed_waveform(const LineSymbolSequence& seq, double sample_rate,
                                  const ProbeConfig& config) {
  if (!(sample_rate >= 10.0 / seq.symbol_duration)) {
    throw InvalidArgument("probe sample rate must be at least 10x the bit rate");
  }
  if (config.rise_time < 0.0 || config.pre_trigger < 0.0 || config.post_trigger < 0.0) {
    throw InvalidArgument("probe timing parameters must be non-negative");
  }
  Waveform w;
  w.sample_rate = sample_rate;
  w.start_time = seq.start_time - config.pre_trigger;
  const double span = config.pre_trigger + seq.duration() + config.post_trigger;
  const auto n = static_cast<std::size_t>(std::ceil(span * sample_rate));
  const double idle = probe_level(LineState::J, config.high_volts);
  w.samples.assign(n, idle);

  LineState prev = LineState::J;
  const double half = 0.5 * config.rise_time;
  for (std::size_t k = 0; k < seq.size(); ++k) {
    const auto s = seq.symbols[k];
    if (s == prev) continue;
    const double step = probe_level(s, config.high_volts) - probe_level(prev, config.high_volts);
    const double t0 = seq.start_time + static_cast<double>(k) * seq.symbol_duration;
    const auto first = static_cast<std::ptrdiff_t>(std::ceil((t0 - half - w.start_time) * sample_rate));
    for (auto i = std::max<std::ptrdiff_t>(first, 0); i < static_cast<std::ptrdiff_t>(n); ++i) {
      const double t = w.time_of(static_cast<std::size_t>(i));
      double frac = 1.0;
      if (half > 0.0) frac = std::clamp((t - t0) / config.rise_time + 0.5, 0.0, 1.0);
      else if (t < t0) frac = 0.0;
      w.samples[static_cast<std::size_t>(i)] += step * frac;
    }
    prev = s;
  }
  return w;
}

Waveform simulate_probed_waveform(const Frame& frame, double sample_rate,
                                  const ProbeConfig& config) {
  auto seq = frame.capture_symbols();
  seq.start_time = 0.0;
  return simulate_probed_waveform(seq, sample_rate, config);
}

EdgeSeries wired_pipeline_edges(const Waveform& waveform, double bit_width,
                                const WiredPipelineConfig& config) {
  if (waveform.samples.empty()) throw NoSignal("empty probed waveform");
  const double fs = waveform.sample_rate;
  const auto taps = dsp::design_lowpass(config.lowpass_pass_hz, config.lowpass_stop_hz,
                                        config.stopband_db, fs);
  const auto smooth = dsp::fir_same(waveform.samples, taps, dsp::Padding::Replicate);
  auto d = dsp::central_difference(smooth);
  for (auto& v : d) v = std::abs(v);
  const double floor = config.threshold_fraction * dsp::robust_max(d, config.skip_fraction);
  if (!(floor > 0.0)) throw NoSignal("probed waveform has no transitions");
  const auto peaks = dsp::pick_peaks(d, floor, config.min_separation_bits * bit_width * fs);
  if (peaks.empty()) throw NoSignal("no edges found in probed waveform");

  EdgeSeries out;
  out.bit_width = bit_width;
  out.origin = waveform.time_of(peaks.front());
  for (auto p : peaks) {
    const auto slot =
        static_cast<std::size_t>(std::llround((waveform.time_of(p) - out.origin) / bit_width));
    if (slot >= out.slots.size()) out.slots.resize(slot + 1, 0);
    out.slots[slot] = 1;
  }
  return out;
}

}  // namespace emanakey
