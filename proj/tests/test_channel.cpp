#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "emanakey/channel.hpp"
#include "emanakey/dsp.hpp"
#include "emanakey/error.hpp"
#include "emanakey/presets.hpp"

using namespace emanakey;

namespace {

double rms(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s / static_cast<double>(x.size()));
}

std::vector<double> clean_key(const char* label) {
  return radiate(build_keystroke_transaction(KeyId::from_label(label)), PulseShape{}, TraceLayout{});
}

ChannelPreset identity() {
  ChannelPreset p;
  p.name = "identity";
  return p;
}

}  // namespace

TEST_CASE("trace layout") {
  CHECK(TraceLayout{}.sample_count() == 3500);
  TraceLayout bad;
  bad.pre_trigger = 20e-6;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

TEST_CASE("radiation") {
  const TraceLayout layout;
  const PulseShape pulse;
  SUBCASE("no edges, no signal") {
    const auto x = radiate(std::vector<EdgeEvent>{}, pulse, layout);
    CHECK(x.size() == 3500);
    CHECK(std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; }));
  }
  SUBCASE("a single pulse is the damped sinusoid at its time") {
    const std::vector<EdgeEvent> ev{{0.0, -1}};
    const auto x = radiate(ev, pulse, layout);
    const double tau = 0.3 / 14e6;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double t = (static_cast<double>(i) - 250.0) / 250e6;
      const double expect = t >= 0.0 && t <= 8.0 * tau
                                ? -std::exp(-t / tau) * std::sin(2.0 * std::numbers::pi * 14e6 * t)
                                : 0.0;
      REQUIRE(x[i] == doctest::Approx(expect).epsilon(1e-9).scale(1.0));
    }
  }
  SUBCASE("superposition") {
    const std::vector<EdgeEvent> a{{0.0, 1}}, b{{1e-6, -1}}, ab{{0.0, 1}, {1e-6, -1}};
    const auto xa = radiate(a, pulse, layout), xb = radiate(b, pulse, layout), xab = radiate(ab, pulse, layout);
    for (std::size_t i = 0; i < xab.size(); ++i) REQUIRE(xab[i] == doctest::Approx(xa[i] + xb[i]));
  }
  SUBCASE("the key a window fits the layout") {
    const auto ev = capture_edge_events(build_keystroke_transaction(KeyId::from_label("a")));
    CHECK(ev.size() == 96);
    CHECK(ev.front().time == 0.0);
    CHECK(ev.back().time + 1e-6 < 14e-6);
  }
}

TEST_CASE("identity channel passes the signal through") {
  const auto clean = clean_key("a");
  const auto t = apply_channel(clean, identity(), 250e6);
  REQUIRE(t.samples.size() == clean.size());
  for (std::size_t i = 0; i < clean.size(); ++i) REQUIRE(t.samples[i] == static_cast<float>(clean[i]));
  CHECK(t.sample_rate == 250e6);
}

TEST_CASE("gain, body coupling and shielding scale only the signal") {
  const auto clean = clean_key("a");
  auto p = open_space_preset(3.0);
  const auto base = channel_components(clean, p, 250e6);
  p.shielding_db = 30.0;
  p.body_coupling_gain = 2.0;
  const auto shielded = channel_components(clean, p, 250e6);
  const double ratio = std::pow(10.0, -30.0 / 20.0) * 2.0;
  for (std::size_t i = 0; i < clean.size(); ++i) {
    REQUIRE(shielded.signal[i] == doctest::Approx(base.signal[i] * ratio));
  }
  CHECK(shielded.noise == base.noise);
  CHECK(open_space_preset(3.0).signal_scale() ==
        doctest::Approx(std::pow(10.0, open_space_gain_db(3.0) / 20.0)));
}

TEST_CASE("noise level follows the density") {
  ChannelPreset p = identity();
  p.noise_density = 1e-5;
  p.seed = 5;
  const std::vector<double> zero(200000, 0.0);
  const auto c = channel_components(zero, p, 250e6);
  CHECK(rms(c.noise) == doctest::Approx(1e-5 * std::sqrt(125e6)).epsilon(0.01));
}

TEST_CASE("seeding") {
  const auto clean = clean_key("q");
  auto p = find_builtin_preset("office-12m").value();
  p.seed = 42;
  const auto a = apply_channel(clean, p, 250e6);
  const auto b = apply_channel(clean, p, 250e6);
  CHECK(a == b);
  p.seed = 43;
  CHECK(apply_channel(clean, p, 250e6).samples != a.samples);
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  CHECK(derive_seed(7, 9) == derive_seed(7, 9));
}

TEST_CASE("the channel is linear in the clean signal") {
  const auto x = clean_key("a"), y = clean_key("z");
  auto p = open_space_preset(3.0);
  p.seed = 11;
  std::vector<double> sum(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) sum[i] = x[i] + y[i];
  const auto cx = channel_components(x, p, 250e6), cy = channel_components(y, p, 250e6),
             cs = channel_components(sum, p, 250e6);
  for (std::size_t i = 0; i < x.size(); ++i) {
    REQUIRE(cs.signal[i] == doctest::Approx(cx.signal[i] + cy.signal[i]));
  }
  CHECK(cs.noise == cx.noise);
}

TEST_CASE("interferers") {
  ChannelPreset p = identity();
  const std::vector<double> zero(4000, 0.0);
  SUBCASE("tone power") {
    p.interferers = {{"tone", 10e6, 0.0, 2e-3}};
    // 4000 samples = 160 whole periods at 10 MHz
    CHECK(rms(channel_components(zero, p, 250e6).interference) == doctest::Approx(std::sqrt(2e-3)).epsilon(1e-6));
  }
  SUBCASE("band power") {
    p.interferers = {{"band", 98e6, 20e6, 4e-3}};
    CHECK(rms(channel_components(zero, p, 250e6).interference) == doctest::Approx(std::sqrt(4e-3)).epsilon(0.05));
  }
  SUBCASE("above Nyquist is left out") {
    p.interferers = {{"fm", 98e6, 20e6, 4e-3}};
    const auto c = channel_components(zero, p, 150e6);
    CHECK(std::all_of(c.interference.begin(), c.interference.end(), [](double v) { return v == 0.0; }));
  }
}

TEST_CASE("glitches") {
  const auto clean = clean_key("a");
  SUBCASE("count 0 leaves the trace unchanged") {
    auto t = apply_channel(clean, identity(), 250e6);
    const auto before = t.samples;
    inject_glitch(t, 0, 5.0, 1);
    CHECK(t.samples == before);
  }
  SUBCASE("injected glitch shape") {
    std::vector<double> x(10, 0.0);
    const std::vector<std::size_t> at{4};
    inject_glitch_at(x, at, 2.0);
    CHECK(x == std::vector<double>{0, 0, 0, 1.0, 2.0, 1.0, 0, 0, 0, 0});
    const std::vector<std::size_t> outside{10};
    CHECK_THROWS_AS(inject_glitch_at(x, outside, 1.0), InvalidArgument);
  }
  SUBCASE("channel glitches stand above the trace") {
    auto p = open_space_preset(3.0);
    p.glitches.rate = 3.0;
    for (std::uint64_t s = 0; s < 20; ++s) {
      p.seed = s;
      const auto c = channel_components(clean, p, 250e6);
      std::vector<double> base(clean.size());
      for (std::size_t i = 0; i < base.size(); ++i) base[i] = c.signal[i] + c.noise[i] + c.interference[i];
      const double ref = dsp::robust_max(base, 0.01);
      const double biggest = std::abs(*std::max_element(c.glitches.begin(), c.glitches.end(),
                                                        [](double a, double b) { return std::abs(a) < std::abs(b); }));
      if (biggest > 0.0) REQUIRE(biggest >= 1.5 * ref * 0.999);
      REQUIRE(biggest <= 2.0 * 3.0 * ref);  // two overlapping spikes at most
    }
  }
}

TEST_CASE("preset validation") {
  auto p = open_space_preset(3.0);
  CHECK_NOTHROW(p.validate());
  auto bad = p;
  bad.body_coupling_gain = 0.5;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = p;
  bad.shielding_db = 31.0;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = p;
  bad.noise_density = -1.0;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = p;
  bad.glitches.amplitude_min = 0.8;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

TEST_CASE("presets") {
  CHECK(open_space_gain_db(3.8) == doctest::Approx(2.0));
  CHECK(open_space_gain_db(3.0) - open_space_gain_db(3.8) == doctest::Approx(20.0 * std::log10(3.8 / 3.0)));
  for (const auto& p : builtin_presets()) {
    CHECK_NOTHROW(p.validate());
    CHECK(preset_from_json(preset_to_json(p)) == p);
    CHECK(find_builtin_preset(p.name).has_value());
  }
  CHECK_FALSE(find_builtin_preset("nowhere").has_value());
  CHECK(find_builtin_preset("office-12m")->gain_db == doctest::Approx(open_space_gain_db(12.0) + kOfficeOffsetDb));
  CHECK_THROWS_AS(preset_from_json("{\"name\": 3"), ParseError);
  CHECK_THROWS_AS(preset_from_json(R"({"name":"x","shielding_db":40})"), InvalidArgument);
  CHECK_THROWS_AS(load_preset("no-such-preset"), Error);
}

TEST_CASE("dataset synthesis") {
  SynthRequest req;
  for (std::size_t k = 0; k < 70; ++k) req.keys.push_back(KeyId::all()[k]);
  req.repeats = 2;
  req.preset = open_space_preset(3.0);
  req.master_seed = 99;
  const auto a = synth_dataset(req);
  REQUIRE(a.size() == 140);
  CHECK(a[0].ground_truth == req.keys[0]);
  CHECK(a[1].ground_truth == req.keys[0]);
  CHECK(a[139].ground_truth == req.keys[69]);
  CHECK(a[0].samples != a[1].samples);
  CHECK(*a[5].seed == derive_seed(99, 5));
  for (const auto& t : a) REQUIRE(t.samples.size() == 3500);
  CHECK(synth_dataset(req) == a);
}
