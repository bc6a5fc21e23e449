// Serial reference vs OpenMP kernels, plus detect() latency against the
// 1 ms polling budget. Usage: bench_kernels [repeats]
#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>

#include "emanakey/bench.hpp"
#include "emanakey/kernels.hpp"
#include "emanakey/presets.hpp"

using namespace emanakey;

namespace {

template <typename F>
double seconds_per_call(F&& f, int reps) {
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() / reps;
}

void row(const char* name, double serial, double parallel) {
  std::printf("%-34s %12.1f %12.1f %8.2fx\n", name, serial * 1e6, parallel * 1e6, serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
  const int reps = argc > 1 ? std::max(1, std::atoi(argv[1])) : 20;
  std::printf("OpenMP threads: %d\n\n", omp_get_max_threads());
  std::printf("%-34s %12s %12s %9s\n", "kernel", "serial us", "openmp us", "speedup");

  const auto exp = Experiment::defaults();
  const Detector det(exp.detector, exp.layout.sample_rate);
  volatile double sink = 0.0;

  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  for (std::size_t n : {std::size_t{3500}, std::size_t{1} << 20}) {
    std::vector<double> x(n);
    for (auto& v : x) v = g(rng);
    const int r = n > 100000 ? std::max(1, reps / 10) : reps * 5;
    const double s = seconds_per_call([&] { sink = sink + dsp::fir_same_serial(x, det.taps())[0]; }, r);
    const double p = seconds_per_call([&] { sink = sink + dsp::fir_same(x, det.taps())[0]; }, r);
    char name[64];
    std::snprintf(name, sizeof name, "fir %zu taps x %zu", det.taps().size(), n);
    row(name, s, p);
  }

  {
    std::vector<EdgeSeries> cands;
    for (int k = 0; k < 8; ++k) cands.insert(cands.end(), exp.refs.entries().begin(), exp.refs.entries().end());
    const double s = seconds_per_call([&] { sink = sink + score_matrix_serial(cands, exp.refs)[0]; }, reps * 5);
    const double p = seconds_per_call([&] { sink = sink + score_matrix(cands, exp.refs)[0]; }, reps * 5);
    row("score matrix 560 x 70", s, p);
  }

  {
    const auto preset = open_space_preset(3.8);
    const std::vector<KeyId> keys(KeyId::all().begin(), KeyId::all().end());
    const double s = seconds_per_call([&] { run_trials(exp, preset, keys, 2, 1, Execution::Serial); }, 1);
    const double p = seconds_per_call([&] { run_trials(exp, preset, keys, 2, 1, Execution::Parallel); }, 1);
    row("trial batch 70 keys x 2", s, p);
  }

  const auto lat = measure_detect_latency(exp, open_space_preset(3.8), 70, static_cast<std::size_t>(reps), 1);
  std::printf("\ndetect(): %zu calls, mean %.4f ms, min %.4f ms, max %.4f ms -> %s (budget 1 ms)\n", lat.calls,
              lat.mean_seconds * 1e3, lat.min_seconds * 1e3, lat.max_seconds * 1e3,
              lat.within_budget() ? "within budget" : "over budget");
  return 0;
}
