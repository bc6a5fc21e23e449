#include "emanakey/channel.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "emanakey/dsp.hpp"
#include "emanakey/error.hpp"

namespace emanakey {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// stream tags for the independent parts of one channel realization
constexpr std::uint64_t kNoiseStream = 1;
constexpr std::uint64_t kInterferenceStream = 2;
constexpr std::uint64_t kGlitchStream = 3;

void add_spike(std::span<double> x, std::size_t centre, double amplitude) {
  x[centre] += amplitude;
  if (centre > 0) x[centre - 1] += 0.5 * amplitude;
  if (centre + 1 < x.size()) x[centre + 1] += 0.5 * amplitude;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
  std::uint64_t state = master;
  const auto a = splitmix64(state);
  state = a ^ (index * 0xD1B54A32D192ED03ULL);
  return splitmix64(state);
}

void PulseShape::validate() const {
  if (!(center_hz > 0.0 && decay_cycles > 0.0 && length_time_constants > 0.0)) {
    throw InvalidArgument("pulse centre frequency, decay and length must be positive");
  }
}

std::size_t TraceLayout::sample_count() const {
  return static_cast<std::size_t>(std::llround(duration * sample_rate));
}

void TraceLayout::validate() const {
  if (!(sample_rate > 0.0 && duration > 0.0 && pre_trigger >= 0.0 && pre_trigger < duration)) {
    throw InvalidArgument("trace layout needs positive rate and duration, 0 <= pre_trigger < duration");
  }
}

void ChannelPreset::validate() const {
  auto fail = [&](const std::string& what) {
    throw InvalidArgument("preset '" + name + "': " + what);
  };
  if (!std::isfinite(gain_db)) fail("gain_db must be finite");
  if (!(noise_density >= 0.0)) fail("noise_density must be >= 0");
  if (!(body_coupling_gain >= 1.0 && body_coupling_gain <= 4.0)) {
    fail("body_coupling_gain must be in [1, 4]");
  }
  if (!(shielding_db >= 0.0 && shielding_db <= 30.0)) fail("shielding_db must be in [0, 30]");
  if (!(glitches.rate >= 0.0)) fail("glitch rate must be >= 0");
  // glitches must stand above the trace so the normalizer's top-1% skip matters
  if (!(glitches.amplitude_min > 1.0 && glitches.amplitude_min <= glitches.amplitude_max)) {
    fail("glitch amplitudes need 1 < min <= max");
  }
  for (const auto& i : interferers) {
    if (!(i.center_hz > 0.0 && i.bandwidth_hz >= 0.0 && i.power >= 0.0)) {
      fail("interferer '" + i.name + "' needs centre > 0, bandwidth >= 0, power >= 0");
    }
  }
}

double ChannelPreset::signal_scale() const {
  return std::pow(10.0, (gain_db - shielding_db) / 20.0) * body_coupling_gain;
}

std::vector<EdgeEvent> capture_edge_events(const Frame& frame) {
  auto seq = frame.capture_symbols();
  seq.start_time = 0.0;
  return edge_events(seq);
}

std::vector<double> radiate(std::span<const EdgeEvent> events, const PulseShape& pulse,
                            const TraceLayout& layout) {
  pulse.validate();
  layout.validate();
  const double fs = layout.sample_rate;
  std::vector<double> x(layout.sample_count(), 0.0);
  const double decay_rate = pulse.center_hz / pulse.decay_cycles;  // 1/tau
  const double w = 2.0 * std::numbers::pi * pulse.center_hz;
  const double length = pulse.length_time_constants / decay_rate;
  for (const auto& e : events) {
    const double t0 = layout.pre_trigger + e.time;
    const auto first = static_cast<std::ptrdiff_t>(std::ceil(t0 * fs));
    const auto last = static_cast<std::ptrdiff_t>(std::floor((t0 + length) * fs));
    for (auto i = std::max<std::ptrdiff_t>(first, 0);
         i <= last && i < static_cast<std::ptrdiff_t>(x.size()); ++i) {
      const double tt = static_cast<double>(i) / fs - t0;
      x[static_cast<std::size_t>(i)] +=
          e.direction * pulse.amplitude * std::exp(-tt * decay_rate) * std::sin(w * tt);
    }
  }
  return x;
}

std::vector<double> radiate(const Frame& frame, const PulseShape& pulse, const TraceLayout& layout) {
  const auto events = capture_edge_events(frame);
  return radiate(events, pulse, layout);
}

std::vector<double> ChannelComponents::sum() const {
  std::vector<double> out(signal.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = signal[i] + noise[i] + interference[i] + glitches[i];
  }
  return out;
}

ChannelComponents channel_components(std::span<const double> clean, const ChannelPreset& preset,
                                     double sample_rate) {
  preset.validate();
  if (!(sample_rate > 0.0)) throw InvalidArgument("sample rate must be positive");
  const std::size_t n = clean.size();
  ChannelComponents c;
  c.signal.resize(n);
  const double scale = preset.signal_scale();
  for (std::size_t i = 0; i < n; ++i) c.signal[i] = clean[i] * scale;

  c.noise.assign(n, 0.0);
  if (preset.noise_density > 0.0) {
    std::mt19937_64 rng(derive_seed(preset.seed, kNoiseStream));
    std::normal_distribution<double> gauss(0.0, preset.noise_density * std::sqrt(sample_rate / 2.0));
    for (auto& v : c.noise) v = gauss(rng);
  }

  c.interference.assign(n, 0.0);
  {
    std::mt19937_64 rng(derive_seed(preset.seed, kInterferenceStream));
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    for (const auto& it : preset.interferers) {
      if (it.center_hz + 0.5 * it.bandwidth_hz >= 0.5 * sample_rate) continue;
      const int tones = it.bandwidth_hz > 0.0 ? 8 : 1;
      const double amp = std::sqrt(2.0 * it.power / tones);
      for (int k = 0; k < tones; ++k) {
        const double f = tones == 1 ? it.center_hz
                                    : it.center_hz - 0.5 * it.bandwidth_hz +
                                          it.bandwidth_hz * (k + 0.5) / tones;
        const double ph = phase(rng);
        const double w = 2.0 * std::numbers::pi * f / sample_rate;
        for (std::size_t i = 0; i < n; ++i) c.interference[i] += amp * std::sin(w * i + ph);
      }
    }
  }

  c.glitches.assign(n, 0.0);
  if (preset.glitches.rate > 0.0 && n >= 3) {
    std::mt19937_64 rng(derive_seed(preset.seed, kGlitchStream));
    std::poisson_distribution<int> count(preset.glitches.rate);
    std::uniform_int_distribution<std::size_t> where(1, n - 2);
    std::uniform_real_distribution<double> gain(preset.glitches.amplitude_min,
                                                preset.glitches.amplitude_max);
    std::bernoulli_distribution negative(0.5);
    std::vector<double> base(n);
    for (std::size_t i = 0; i < n; ++i) base[i] = c.signal[i] + c.noise[i] + c.interference[i];
    const double reference = dsp::robust_max(base, 0.01);
    const int k = count(rng);
    for (int g = 0; g < k; ++g) {
      const auto pos = where(rng);
      const double a = gain(rng) * reference;
      add_spike(c.glitches, pos, negative(rng) ? -a : a);
    }
  }
  return c;
}

EmanationTrace apply_channel(std::span<const double> clean, const ChannelPreset& preset,
                             double sample_rate) {
  const auto c = channel_components(clean, preset, sample_rate);
  EmanationTrace t;
  t.sample_rate = sample_rate;
  t.samples.resize(clean.size());
  const auto total = c.sum();
  for (std::size_t i = 0; i < total.size(); ++i) t.samples[i] = static_cast<float>(total[i]);
  t.preset = preset;
  t.seed = preset.seed;
  return t;
}

void inject_glitch(EmanationTrace& trace, std::size_t count, double amplitude, std::uint64_t seed) {
  if (trace.samples.size() < 3) throw InvalidArgument("trace too short for a glitch");
  std::mt19937_64 rng(derive_seed(seed, kGlitchStream));
  std::uniform_int_distribution<std::size_t> where(1, trace.samples.size() - 2);
  std::bernoulli_distribution negative(0.5);
  for (std::size_t g = 0; g < count; ++g) {
    const auto pos = where(rng);
    const double a = negative(rng) ? -amplitude : amplitude;
    trace.samples[pos] += static_cast<float>(a);
    trace.samples[pos - 1] += static_cast<float>(0.5 * a);
    trace.samples[pos + 1] += static_cast<float>(0.5 * a);
  }
}

void inject_glitch_at(std::span<double> samples, std::span<const std::size_t> positions,
                      double amplitude) {
  for (auto p : positions) {
    if (p >= samples.size()) throw InvalidArgument("glitch position outside the trace");
    add_spike(samples, p, amplitude);
  }
}

std::vector<EmanationTrace> synth_dataset(const SynthRequest& request) {
  request.preset.validate();
  std::vector<std::vector<double>> clean;
  clean.reserve(request.keys.size());
  for (auto key : request.keys) {
    const auto frame = build_keystroke_transaction(key, request.data_toggle, request.frame);
    clean.push_back(radiate(frame, request.pulse, request.layout));
  }
  const std::size_t jobs = request.keys.size() * request.repeats;
  std::vector<EmanationTrace> out(jobs);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(jobs); ++j) {
    const auto idx = static_cast<std::size_t>(j);
    auto preset = request.preset;
    preset.seed = derive_seed(request.master_seed, idx);
    auto t = apply_channel(clean[idx / request.repeats], preset, request.layout.sample_rate);
    t.ground_truth = request.keys[idx / request.repeats];
    out[idx] = std::move(t);
  }
  return out;
}

}  // namespace emanakey
