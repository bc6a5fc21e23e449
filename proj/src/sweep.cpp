#include "emanakey/sweep.hpp"

#include <algorithm>
#include <exception>
#include <map>
#include <mutex>

#include "emanakey/dsp.hpp"
#include "emanakey/error.hpp"

namespace emanakey {

Experiment Experiment::defaults() {
  Experiment e;
  e.refs = build_reference_set(ReferenceMethod::Analytic);
  return e;
}

std::vector<TrialOutcome> run_trials(const Experiment& exp, const ChannelPreset& preset,
                                     std::span<const KeyId> keys, std::size_t repeats,
                                     std::uint64_t master_seed, Execution execution) {
  preset.validate();
  const Detector detector(exp.detector, exp.layout.sample_rate);
  std::map<KeyId, std::vector<double>> clean;
  for (auto key : keys) {
    if (!clean.contains(key)) {
      clean[key] = radiate(build_keystroke_transaction(key, exp.data_toggle, exp.frame), exp.pulse,
                           exp.layout);
    }
  }

  const std::size_t jobs = keys.size() * repeats;
  std::vector<TrialOutcome> out(jobs);
  auto run_one = [&](std::size_t j) {
    const auto key = keys[j / repeats];
    auto p = preset;
    p.seed = derive_seed(master_seed, j);
    auto trace = apply_channel(clean.at(key), p, exp.layout.sample_rate);
    if (exp.extra_glitches > 0) {
      const std::vector<double> x(trace.samples.begin(), trace.samples.end());
      const double amp = exp.extra_glitch_factor * dsp::robust_max(x, 0.01);
      inject_glitch(trace, exp.extra_glitches, amp, p.seed);
    }
    TrialOutcome o{key, std::nullopt};
    try {
      o.result = detector.detect(trace, exp.refs);
    } catch (const NoSignal&) {
    }
    out[j] = std::move(o);
  };

  if (execution == Execution::Serial) {
    for (std::size_t j = 0; j < jobs; ++j) run_one(j);
    return out;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
#pragma omp parallel for schedule(dynamic, 2)
  for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(jobs); ++j) {
    try {
      run_one(static_cast<std::size_t>(j));
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

double accuracy(std::span<const TrialOutcome> outcomes) {
  if (outcomes.empty()) return 0.0;
  const auto ok = std::count_if(outcomes.begin(), outcomes.end(), [](const auto& o) { return o.correct(); });
  return static_cast<double>(ok) / static_cast<double>(outcomes.size());
}

double mean_margin(std::span<const TrialOutcome> outcomes) {
  if (outcomes.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& o : outcomes) {
    if (o.result) sum += o.result->margin();
  }
  return sum / static_cast<double>(outcomes.size());
}

std::vector<SweepRow> summarize(const ChannelPreset& preset, std::span<const TrialOutcome> outcomes) {
  std::vector<SweepRow> rows;
  std::map<KeyId, std::size_t> where;
  for (const auto& o : outcomes) {
    auto [it, fresh] = where.try_emplace(o.truth, rows.size());
    if (fresh) {
      SweepRow r;
      r.preset = preset.name;
      r.gain_db = preset.gain_db;
      r.noise_density = preset.noise_density;
      r.key = std::string(o.truth.label());
      rows.push_back(std::move(r));
    }
    auto& r = rows[it->second];
    ++r.repeats;
    r.correct += o.correct();
    if (o.result) {
      r.mean_score += o.result->score;
      r.mean_margin += o.result->margin();
    }
  }
  for (auto& r : rows) {
    r.mean_score /= static_cast<double>(r.repeats);
    r.mean_margin /= static_cast<double>(r.repeats);
  }
  return rows;
}

}  // namespace emanakey
