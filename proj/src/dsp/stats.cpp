#include <algorithm>
#include <cmath>
#include <set>

#include "emanakey/dsp.hpp"
#include "emanakey/error.hpp"

namespace emanakey::dsp {

double robust_max(std::span<const double> x, double skip_fraction) {
  if (x.empty()) return 0.0;
  if (!(skip_fraction >= 0.0 && skip_fraction < 1.0)) {
    throw InvalidArgument("robust_max: skip_fraction must be in [0, 1)");
  }
  std::vector<double> mag(x.size());
  std::transform(x.begin(), x.end(), mag.begin(), [](double v) { return std::abs(v); });
  const double pos = (1.0 - skip_fraction) * static_cast<double>(mag.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const double frac = pos - static_cast<double>(lo);
  std::nth_element(mag.begin(), mag.begin() + lo, mag.end());
  const double a = mag[lo];
  if (frac == 0.0 || lo + 1 >= mag.size()) return a;
  // the next order statistic is the minimum of the upper partition
  const double b = *std::min_element(mag.begin() + lo + 1, mag.end());
  return a + frac * (b - a);
}

std::vector<double> central_difference(std::span<const double> x) {
  std::vector<double> d(x.size(), 0.0);
  if (x.size() < 2) return d;
  d.front() = x[1] - x[0];
  d.back() = x[x.size() - 1] - x[x.size() - 2];
  for (std::size_t i = 1; i + 1 < x.size(); ++i) d[i] = 0.5 * (x[i + 1] - x[i - 1]);
  return d;
}

std::vector<std::size_t> pick_peaks(std::span<const double> magnitude, double floor,
                                    double min_separation) {
  struct Candidate {
    std::size_t index;
    double height;
  };
  std::vector<Candidate> candidates;
  const std::size_t n = magnitude.size();
  std::size_t i = 1;
  while (i + 1 < n) {
    const double v = magnitude[i];
    if (v <= floor || v < magnitude[i - 1] || v == magnitude[i - 1]) {
      ++i;
      continue;
    }
    // v rises from the left; walk across a possible flat top
    std::size_t j = i;
    while (j + 1 < n && magnitude[j + 1] == v) ++j;
    if (j + 1 < n && magnitude[j + 1] < v) candidates.push_back({(i + j) / 2, v});
    i = j + 1;
  }

  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) { return a.height > b.height; });
  std::set<std::size_t> accepted;
  for (const auto& c : candidates) {
    auto next = accepted.lower_bound(c.index);
    if (next != accepted.end() && static_cast<double>(*next - c.index) < min_separation) continue;
    if (next != accepted.begin()) {
      auto prev = std::prev(next);
      if (static_cast<double>(c.index - *prev) < min_separation) continue;
    }
    accepted.insert(c.index);
  }
  return {accepted.begin(), accepted.end()};
}

}  // namespace emanakey::dsp
