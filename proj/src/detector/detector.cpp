#include "emanakey/detector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "emanakey/dsp.hpp"
#include "emanakey/error.hpp"
#include "emanakey/kernels.hpp"

namespace emanakey {

void DetectorConfig::validate() const {
  auto fail = [](const std::string& what) { throw InvalidArgument("detector config: " + what); };
  if (!(band_low_hz > 0.0 && band_low_hz < band_high_hz)) fail("need 0 < band_low < band_high");
  if (!(stop_low_hz > 0.0 && stop_low_hz < band_low_hz)) fail("need 0 < stop_low < band_low");
  if (!(stop_high_hz > band_high_hz)) fail("need stop_high > band_high");
  if (!(stopband_db > 0.0)) fail("stopband_db must be positive");
  if (!(amplitude > 0.0)) fail("amplitude must be positive");
  if (!(skip_fraction > 0.0 && skip_fraction < 0.5)) fail("need 0 < skip_fraction < 0.5");
  if (zero_floor && !(*zero_floor >= 0.0 && *zero_floor < amplitude)) {
    fail("zero_floor must be in [0, amplitude)");
  }
  if (!(min_peak_separation_bits > 0.0)) fail("min_peak_separation must be positive");
  if (!(proximity_window_bits > 0.0 && proximity_window_bits <= 0.5)) {
    fail("proximity_window must be in (0, 0.5] bit");
  }
  if (!(offset_search_slots >= 0.0 && offset_step_slots > 0.0)) {
    fail("need offset_search >= 0 and offset_step > 0");
  }
  if (anchor_candidates == 0) fail("anchor_candidates must be at least 1");
  if (!(bit_rate > 0.0)) fail("bit_rate must be positive");
}

namespace {

using nlohmann::json;

template <typename T>
void read_field(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

DetectorConfig detector_config_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(0, std::string("detector config JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError(0, "detector config must be a JSON object");
  static const char* const kKnown[] = {
      "band_low_hz", "band_high_hz", "stop_low_hz", "stop_high_hz", "stopband_db",
      "amplitude_v", "skip_fraction", "zero_floor_v", "min_peak_separation_bits",
      "proximity_window_bits", "offset_search_slots", "offset_step_slots",
      "anchor_candidates", "min_peaks", "bit_rate_bps"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(std::begin(kKnown), std::end(kKnown), key) == std::end(kKnown)) {
      throw ParseError(0, "unknown detector config key '" + key + "'");
    }
  }
  DetectorConfig c;
  try {
    read_field(j, "band_low_hz", c.band_low_hz);
    read_field(j, "band_high_hz", c.band_high_hz);
    read_field(j, "stop_low_hz", c.stop_low_hz);
    read_field(j, "stop_high_hz", c.stop_high_hz);
    read_field(j, "stopband_db", c.stopband_db);
    read_field(j, "amplitude_v", c.amplitude);
    read_field(j, "skip_fraction", c.skip_fraction);
    if (j.contains("zero_floor_v") && !j.at("zero_floor_v").is_null()) {
      c.zero_floor = j.at("zero_floor_v").get<double>();
    }
    read_field(j, "min_peak_separation_bits", c.min_peak_separation_bits);
    read_field(j, "proximity_window_bits", c.proximity_window_bits);
    read_field(j, "offset_search_slots", c.offset_search_slots);
    read_field(j, "offset_step_slots", c.offset_step_slots);
    read_field(j, "anchor_candidates", c.anchor_candidates);
    read_field(j, "min_peaks", c.min_peaks);
    read_field(j, "bit_rate_bps", c.bit_rate);
  } catch (const json::exception& e) {
    throw ParseError(0, std::string("detector config field: ") + e.what());
  }
  c.validate();
  return c;
}

std::string detector_config_to_json(const DetectorConfig& c, int indent) {
  json j;
  j["band_low_hz"] = c.band_low_hz;
  j["band_high_hz"] = c.band_high_hz;
  j["stop_low_hz"] = c.stop_low_hz;
  j["stop_high_hz"] = c.stop_high_hz;
  j["stopband_db"] = c.stopband_db;
  j["amplitude_v"] = c.amplitude;
  j["skip_fraction"] = c.skip_fraction;
  j["zero_floor_v"] = c.zero_floor ? json(*c.zero_floor) : json(nullptr);
  j["min_peak_separation_bits"] = c.min_peak_separation_bits;
  j["proximity_window_bits"] = c.proximity_window_bits;
  j["offset_search_slots"] = c.offset_search_slots;
  j["offset_step_slots"] = c.offset_step_slots;
  j["anchor_candidates"] = c.anchor_candidates;
  j["min_peaks"] = c.min_peaks;
  j["bit_rate_bps"] = c.bit_rate;
  return j.dump(indent);
}

DetectorConfig load_detector_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open detector config " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return detector_config_from_json(buf.str());
}

double match_score(const EdgeSeries& detected, const EdgeSeries& reference) {
  if (reference.size() == 0) return 0.0;
  std::size_t agree = 0;
  for (std::size_t k = 0; k < reference.size(); ++k) {
    const std::uint8_t d = k < detected.size() ? detected.slots[k] : 0;
    agree += d == reference.slots[k];
  }
  return static_cast<double>(agree) / static_cast<double>(reference.size());
}

std::vector<double> score_matrix_serial(std::span<const EdgeSeries> candidates,
                                        const ReferenceSet& refs) {
  std::vector<double> scores(candidates.size() * refs.size());
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    for (std::size_t r = 0; r < refs.size(); ++r) {
      scores[c * refs.size() + r] = match_score(candidates[c], refs.entries()[r]);
    }
  }
  return scores;
}

std::vector<double> score_matrix(std::span<const EdgeSeries> candidates, const ReferenceSet& refs) {
  const std::size_t words = refs.words_per_entry();
  const std::size_t nref = refs.size();
  std::vector<std::uint64_t> masks(nref * words, 0);
  for (std::size_t r = 0; r < nref; ++r) {
    const std::size_t len = refs.entries()[r].size();
    for (std::size_t w = 0; w < words; ++w) {
      const std::size_t lo = w * 64;
      if (len >= lo + 64) masks[r * words + w] = ~std::uint64_t{0};
      else if (len > lo) masks[r * words + w] = (std::uint64_t{1} << (len - lo)) - 1;
    }
  }
  std::vector<double> scores(candidates.size() * nref);
#pragma omp parallel for schedule(static) if (candidates.size() * nref > 4096)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(candidates.size()); ++c) {
    const auto det = pack_slots(candidates[static_cast<std::size_t>(c)], words);
    for (std::size_t r = 0; r < nref; ++r) {
      const auto ref = refs.packed(r);
      const std::size_t len = refs.entries()[r].size();
      std::size_t differ = 0;
      for (std::size_t w = 0; w < words; ++w) {
        differ += static_cast<std::size_t>(std::popcount((det[w] ^ ref[w]) & masks[r * words + w]));
      }
      scores[static_cast<std::size_t>(c) * nref + r] =
          len == 0 ? 0.0 : static_cast<double>(len - differ) / static_cast<double>(len);
    }
  }
  return scores;
}

DetectionResult match(std::span<const EdgeSeries> candidates, const ReferenceSet& refs) {
  if (candidates.empty()) throw InvalidArgument("match needs at least one detected series");
  if (refs.size() < 2) throw InvalidArgument("match needs at least two references");
  const auto scores = score_matrix(candidates, refs);
  const std::size_t nref = refs.size();
  std::vector<double> best(nref, -1.0);
  std::vector<std::size_t> from(nref, 0);
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    for (std::size_t r = 0; r < nref; ++r) {
      if (scores[c * nref + r] > best[r]) {
        best[r] = scores[c * nref + r];
        from[r] = c;
      }
    }
  }
  std::size_t win = 0;
  for (std::size_t r = 1; r < nref; ++r) {
    if (best[r] > best[win]) win = r;
  }
  std::size_t second = win == 0 ? 1 : 0;
  for (std::size_t r = 0; r < nref; ++r) {
    if (r != win && best[r] > best[second]) second = r;
  }
  DetectionResult res;
  res.key = KeyId(static_cast<int>(win));
  res.score = best[win];
  res.runner_up = KeyId(static_cast<int>(second));
  res.runner_up_score = best[second];
  res.tie = best[second] == best[win];
  res.detected_edges = candidates[from[win]];
  return res;
}

DetectionResult match(const EdgeSeries& detected, const ReferenceSet& refs) {
  return match(std::span<const EdgeSeries>(&detected, 1), refs);
}

EdgeSeries form_edge_series(std::span<const double> peak_times, double origin, std::size_t length,
                            const DetectorConfig& cfg) {
  EdgeSeries s;
  s.bit_width = cfg.bit_width();
  s.origin = origin;
  s.slots.assign(length, 0);
  for (double p : peak_times) {
    const double rel = (p - origin) / s.bit_width;
    const double k = std::nearbyint(rel);
    if (k < 0.0 || k >= static_cast<double>(length)) continue;
    if (std::abs(rel - k) <= cfg.proximity_window_bits) s.slots[static_cast<std::size_t>(k)] = 1;
  }
  return s;
}

std::vector<EdgeSeries> alignment_candidates(std::span<const double> peak_times, std::size_t length,
                                             const DetectorConfig& cfg) {
  std::vector<EdgeSeries> out;
  const auto anchors = std::min(cfg.anchor_candidates, peak_times.size());
  const auto steps = static_cast<int>(std::floor(cfg.offset_search_slots / cfg.offset_step_slots + 1e-9));
  out.reserve(anchors * static_cast<std::size_t>(2 * steps + 1));
  for (std::size_t a = 0; a < anchors; ++a) {
    for (int s = -steps; s <= steps; ++s) {
      const double origin = peak_times[a] + s * cfg.offset_step_slots * cfg.bit_width();
      out.push_back(form_edge_series(peak_times, origin, length, cfg));
    }
  }
  return out;
}

Detector::Detector(DetectorConfig cfg, double sample_rate) : cfg_(std::move(cfg)), sample_rate_(sample_rate) {
  cfg_.validate();
  const double nyquist = 0.5 * sample_rate;
  if (!(sample_rate > 2.0 * cfg_.band_high_hz)) {
    throw InvalidArgument("sample rate must exceed twice the upper band edge");
  }
  // Low sample rates leave no room for the default upper skirt; keep the
  // stopband edge inside Nyquist.
  const double stop_high = std::min(cfg_.stop_high_hz, cfg_.band_high_hz + 0.75 * (nyquist - cfg_.band_high_hz));
  taps_ = dsp::design_bandpass(cfg_.stop_low_hz, cfg_.band_low_hz, cfg_.band_high_hz, stop_high,
                               cfg_.stopband_db, sample_rate);
}

std::vector<double> Detector::bandpass(std::span<const double> samples) const {
  return dsp::fir_same(samples, taps_, dsp::Padding::Zero);
}

std::vector<double> Detector::bandpass(std::span<const float> samples) const {
  std::vector<double> x(samples.begin(), samples.end());
  return bandpass(std::span<const double>(x));
}

DetectionResult Detector::detect(const EmanationTrace& trace, const ReferenceSet& refs) const {
  if (trace.sample_rate != sample_rate_) {
    throw InvalidArgument("trace sample rate differs from the detector's");
  }
  if (refs.size() != static_cast<std::size_t>(KeyId::kCount)) {
    throw InvalidArgument("reference set must hold all 70 keys");
  }
  for (float v : trace.samples) {
    if (!std::isfinite(v)) throw InvalidArgument("trace holds non-finite samples");
  }
  const auto filtered = bandpass(trace.samples);
  std::vector<double> normalized;
  try {
    normalized = normalize(filtered, cfg_);
  } catch (const DegenerateInput& e) {
    throw NoSignal(std::string("no signal: ") + e.what());
  }
  const auto peaks = threshold_and_peaks(normalized, cfg_, sample_rate_);
  if (peaks.size() < cfg_.min_peaks) {
    throw NoSignal("no signal: only " + std::to_string(peaks.size()) + " peaks detected");
  }
  const auto candidates = alignment_candidates(peaks, refs.max_length(), cfg_);
  auto res = match(candidates, refs);
  res.alignment_offset = (res.detected_edges.origin - peaks.front()) / cfg_.bit_width();
  return res;
}

std::vector<double> bandpass(const EmanationTrace& trace, const DetectorConfig& cfg) {
  return Detector(cfg, trace.sample_rate).bandpass(trace.samples);
}

std::vector<double> normalize(std::span<const double> filtered, const DetectorConfig& cfg) {
  const double smax = dsp::robust_max(filtered, cfg.skip_fraction);
  if (!(smax > 0.0)) {
    const bool all_zero = std::all_of(filtered.begin(), filtered.end(), [](double v) { return v == 0.0; });
    throw DegenerateInput(all_zero ? "trace is all zero" : "robust max of the trace is zero");
  }
  const double gain = cfg.amplitude / smax;
  std::vector<double> out(filtered.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::clamp(filtered[i] * gain, -cfg.amplitude, cfg.amplitude);
  }
  return out;
}

std::vector<double> threshold_and_peaks(std::span<const double> normalized, const DetectorConfig& cfg,
                                        double sample_rate) {
  const double floor = cfg.floor_volts();
  std::vector<double> mag(normalized.size());
  for (std::size_t i = 0; i < mag.size(); ++i) {
    const double a = std::abs(normalized[i]);
    mag[i] = a < floor ? 0.0 : a;
  }
  const auto idx = dsp::pick_peaks(mag, 0.0, cfg.min_peak_separation_bits * cfg.bit_width() * sample_rate);
  if (idx.empty()) throw NoSignal("no peaks above the noise floor");
  std::vector<double> times(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) times[i] = static_cast<double>(idx[i]) / sample_rate;
  return times;
}

DetectionResult detect(const EmanationTrace& trace, const ReferenceSet& refs, const DetectorConfig& cfg) {
  return Detector(cfg, trace.sample_rate).detect(trace, refs);
}

}  // namespace emanakey
