#include "emanakey/bench.hpp"

#include <algorithm>
#include <chrono>

#include "emanakey/error.hpp"

namespace emanakey {

LatencyReport measure_detect_latency(const Experiment& exp, const ChannelPreset& preset,
                                     std::size_t traces, std::size_t rounds, std::uint64_t seed) {
  if (traces == 0 || rounds == 0) throw InvalidArgument("latency run needs traces and rounds");
  SynthRequest req;
  for (std::size_t i = 0; i < traces; ++i) req.keys.push_back(KeyId(static_cast<int>(i % KeyId::kCount)));
  req.preset = preset;
  req.pulse = exp.pulse;
  req.layout = exp.layout;
  req.frame = exp.frame;
  req.data_toggle = exp.data_toggle;
  req.master_seed = seed;
  const auto data = synth_dataset(req);
  const Detector det(exp.detector, exp.layout.sample_rate);

  using clock = std::chrono::steady_clock;
  LatencyReport r;
  r.traces = traces;
  r.min_seconds = 1e300;
  double total = 0.0;
  volatile int sink = 0;
  for (std::size_t round = 0; round < rounds; ++round) {
    for (const auto& t : data) {
      const auto start = clock::now();
      try {
        sink = sink + det.detect(t, exp.refs).key.index();
      } catch (const NoSignal&) {
        // still a full pass through the pipeline
      }
      const double s = std::chrono::duration<double>(clock::now() - start).count();
      total += s;
      r.min_seconds = std::min(r.min_seconds, s);
      r.max_seconds = std::max(r.max_seconds, s);
      ++r.calls;
    }
  }
  r.mean_seconds = total / static_cast<double>(r.calls);
  return r;
}

}  // namespace emanakey
