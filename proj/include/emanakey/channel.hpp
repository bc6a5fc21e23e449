#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "emanakey/edge_series.hpp"
#include "emanakey/frame.hpp"
#include "emanakey/keys.hpp"

namespace emanakey {

/// Radiated response to one bus transition: a damped sinusoid whose sign
/// follows the transition direction.
struct PulseShape {
  double center_hz = 14e6;
  /// Decay time constant in carrier cycles.
  double decay_cycles = 0.3;
  double amplitude = 1.0;
  /// Pulse is truncated after this many time constants.
  double length_time_constants = 8.0;

  void validate() const;
};

/// Acquisition window. Sample 0 sits `pre_trigger` before the first edge of
/// the keystroke capture window.
struct TraceLayout {
  double sample_rate = 250e6;
  double pre_trigger = 1e-6;
  double duration = 14e-6;

  std::size_t sample_count() const;
  void validate() const;
};

struct Interferer {
  std::string name;
  double center_hz = 0.0;
  /// 0 means a single tone; otherwise 8 random-phase tones spread evenly
  /// across the band.
  double bandwidth_hz = 0.0;
  /// Mean-square voltage at the antenna, V^2.
  double power = 0.0;

  friend bool operator==(const Interferer&, const Interferer&) = default;
};

/// Short impulsive spikes from nearby switching equipment.
struct GlitchModel {
  /// Expected number of glitches per trace (Poisson).
  double rate = 0.0;
  /// Amplitude range as a multiple of the robust max of the glitch-free trace.
  double amplitude_min = 1.5;
  double amplitude_max = 3.0;

  friend bool operator==(const GlitchModel&, const GlitchModel&) = default;
};

struct ChannelPreset {
  std::string name;
  std::string description;
  /// Path gain applied to the radiated signal.
  double gain_db = 0.0;
  /// One-sided white noise density, V/sqrt(Hz).
  double noise_density = 0.0;
  std::vector<Interferer> interferers;
  GlitchModel glitches;
  /// Extra signal gain when the victim touches the keyboard, in [1, 4].
  double body_coupling_gain = 1.0;
  /// Attenuation of the radiated signal by an enclosure, in [0, 30] dB;
  /// noise is unaffected.
  double shielding_db = 0.0;
  std::uint64_t seed = 0;

  /// Throws InvalidArgument on out-of-range fields.
  void validate() const;
  double signal_scale() const;

  friend bool operator==(const ChannelPreset&, const ChannelPreset&) = default;
};

/// Captured (or synthesized) antenna trace plus optional labels.
struct EmanationTrace {
  std::vector<float> samples;
  double sample_rate = 0.0;
  std::optional<KeyId> ground_truth;
  std::optional<ChannelPreset> preset;
  std::optional<std::uint64_t> seed;

  friend bool operator==(const EmanationTrace&, const EmanationTrace&) = default;
};

/// Edge events of the frame's capture window, time 0 at the first edge.
std::vector<EdgeEvent> capture_edge_events(const Frame& frame);

/// Superposition of one pulse per edge event on the layout's time grid.
std::vector<double> radiate(std::span<const EdgeEvent> events, const PulseShape& pulse,
                            const TraceLayout& layout);
std::vector<double> radiate(const Frame& frame, const PulseShape& pulse,
                            const TraceLayout& layout);

/// The channel output split into its additive parts.
struct ChannelComponents {
  std::vector<double> signal;
  std::vector<double> noise;
  std::vector<double> interference;
  std::vector<double> glitches;

  std::vector<double> sum() const;
};

/// Deterministic in (clean, preset, sample_rate); preset.seed drives the
/// noise, interference and glitch streams independently. Interferers at or
/// above Nyquist are left out.
ChannelComponents channel_components(std::span<const double> clean, const ChannelPreset& preset,
                                     double sample_rate);
EmanationTrace apply_channel(std::span<const double> clean, const ChannelPreset& preset,
                             double sample_rate);

/// Adds `count` glitches of absolute `amplitude` volts at seeded random
/// positions, each a 3-sample [0.5, 1, 0.5] spike with random sign.
void inject_glitch(EmanationTrace& trace, std::size_t count, double amplitude, std::uint64_t seed);
/// Adds a positive glitch centred on each listed sample.
void inject_glitch_at(std::span<double> samples, std::span<const std::size_t> positions,
                      double amplitude);

/// Independent seed for job `index` of a run started from `master`.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept;

struct SynthRequest {
  std::vector<KeyId> keys;
  std::size_t repeats = 1;
  ChannelPreset preset;
  PulseShape pulse;
  TraceLayout layout;
  FrameConfig frame;
  PacketKind data_toggle = PacketKind::Data0;
  std::uint64_t master_seed = 0;
};

/// keys x repeats traces, key-major. Trace j uses derive_seed(master_seed, j)
/// as its channel seed, so output does not depend on thread count.
std::vector<EmanationTrace> synth_dataset(const SynthRequest& request);

}  // namespace emanakey
