#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "emanakey/channel.hpp"
#include "emanakey/edge_series.hpp"
#include "emanakey/keys.hpp"
#include "emanakey/reference_set.hpp"

namespace emanakey {

struct DetectorConfig {
  double band_low_hz = 10e6;
  double band_high_hz = 18e6;
  /// Stopband edges of the bandpass transition bands.
  double stop_low_hz = 8e6;
  double stop_high_hz = 40e6;
  double stopband_db = 50.0;
  /// Normalization amplitude, volts.
  double amplitude = 3.3;
  double skip_fraction = 0.01;
  /// Samples below this magnitude are zeroed before peak picking; A/2 when unset.
  std::optional<double> zero_floor;
  double min_peak_separation_bits = 2.0 / 3.0;
  /// A peak marks slot k when it lies within this many bit widths of the
  /// slot centre. Peaks in dense edge runs land up to ~0.35 bit off centre.
  double proximity_window_bits = 0.4;
  /// Alignment search around each anchor peak, in slots.
  double offset_search_slots = 2.0;
  double offset_step_slots = 0.25;
  /// How many of the earliest peaks are tried as the slot-0 anchor.
  std::size_t anchor_candidates = 8;
  /// Fewer peaks than this is reported as no signal.
  std::size_t min_peaks = 10;
  double bit_rate = kFullSpeedBitRate;

  double floor_volts() const { return zero_floor.value_or(0.5 * amplitude); }
  double bit_width() const { return 1.0 / bit_rate; }
  /// Throws InvalidArgument when the invariants do not hold.
  void validate() const;
};

/// JSON with unit-suffixed keys (band_low_hz, amplitude_v, ...); missing
/// keys keep their defaults. Throws ParseError or InvalidArgument.
DetectorConfig detector_config_from_json(std::string_view text);
std::string detector_config_to_json(const DetectorConfig& cfg, int indent = 2);
DetectorConfig load_detector_config(const std::string& path);

struct DetectionResult {
  KeyId key;
  double score = 0.0;
  KeyId runner_up;
  double runner_up_score = 0.0;
  /// Best and runner-up scores are equal; key is then the lower index.
  bool tie = false;
  EdgeSeries detected_edges;
  /// Slot-0 position relative to the first detected peak, in slots.
  double alignment_offset = 0.0;

  double margin() const noexcept { return score - runner_up_score; }
  friend bool operator==(const DetectionResult&, const DetectionResult&) = default;
};

/// Agreeing slots over the reference's own length; detected slots past the
/// end of the series count as 0.
double match_score(const EdgeSeries& detected, const EdgeSeries& reference);

/// Highest-scoring reference for one detected series.
DetectionResult match(const EdgeSeries& detected, const ReferenceSet& refs);
/// Each key scores its best over all candidate alignments; the result holds
/// the candidate that gave the winner its score (earliest on ties).
DetectionResult match(std::span<const EdgeSeries> candidates, const ReferenceSet& refs);

/// Scoring of every candidate against every reference: scores[c * refs + r].
/// Reference implementation, one slot at a time.
std::vector<double> score_matrix_serial(std::span<const EdgeSeries> candidates,
                                        const ReferenceSet& refs);
/// Same values from packed words and popcounts, candidates split across
/// OpenMP threads.
std::vector<double> score_matrix(std::span<const EdgeSeries> candidates, const ReferenceSet& refs);

/// Slot indicator from peak times: slot k is 1 when a peak lies within
/// proximity_window_bits of origin + k * bit width.
EdgeSeries form_edge_series(std::span<const double> peak_times, double origin,
                            std::size_t length, const DetectorConfig& cfg);
/// Alignment candidates: each of the first anchor_candidates peaks, shifted
/// by every offset step in [-offset_search, +offset_search].
std::vector<EdgeSeries> alignment_candidates(std::span<const double> peak_times,
                                             std::size_t length, const DetectorConfig& cfg);

/// Bandpass filtering with the cached design for one sample rate.
class Detector {
 public:
  /// Throws InvalidArgument when sample_rate <= 2 * band_high.
  Detector(DetectorConfig cfg, double sample_rate);

  const DetectorConfig& config() const noexcept { return cfg_; }
  double sample_rate() const noexcept { return sample_rate_; }
  const std::vector<double>& taps() const noexcept { return taps_; }

  std::vector<double> bandpass(std::span<const float> samples) const;
  std::vector<double> bandpass(std::span<const double> samples) const;
  /// Throws NoSignal when the trace is degenerate or yields too few peaks.
  DetectionResult detect(const EmanationTrace& trace, const ReferenceSet& refs) const;

 private:
  DetectorConfig cfg_;
  double sample_rate_;
  std::vector<double> taps_;
};

std::vector<double> bandpass(const EmanationTrace& trace, const DetectorConfig& cfg);
/// Scales by A / S_max, S_max the robust max of |x|, and clips to +-A.
/// Throws DegenerateInput when S_max is zero.
std::vector<double> normalize(std::span<const double> filtered, const DetectorConfig& cfg);
/// Peak times in seconds from the first sample. Throws NoSignal when none
/// clear the floor.
std::vector<double> threshold_and_peaks(std::span<const double> normalized,
                                        const DetectorConfig& cfg, double sample_rate);
DetectionResult detect(const EmanationTrace& trace, const ReferenceSet& refs,
                       const DetectorConfig& cfg = {});

}  // namespace emanakey
