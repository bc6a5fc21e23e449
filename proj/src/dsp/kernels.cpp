#include "emanakey/kernels.hpp"

#include <algorithm>

#include "emanakey/error.hpp"

namespace emanakey::dsp {

namespace {

void check_taps(std::span<const double> taps) {
  if (taps.empty() || taps.size() % 2 == 0) {
    throw InvalidArgument("FIR taps must have odd, non-zero length");
  }
}

double sample_at(std::span<const double> x, std::ptrdiff_t i, Padding padding) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  if (i >= 0 && i < n) return x[i];
  if (padding == Padding::Zero) return 0.0;
  return i < 0 ? x.front() : x.back();
}

}  // namespace

std::vector<double> fir_same_serial(std::span<const double> x, std::span<const double> taps,
                                    Padding padding) {
  check_taps(taps);
  std::vector<double> y(x.size(), 0.0);
  if (x.empty()) return y;
  const auto m = static_cast<std::ptrdiff_t>(taps.size() / 2);
  for (std::size_t i = 0; i < x.size(); ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < taps.size(); ++k) {
      acc += taps[k] * sample_at(x, static_cast<std::ptrdiff_t>(i) + m - static_cast<std::ptrdiff_t>(k),
                                 padding);
    }
    y[i] = acc;
  }
  return y;
}

std::vector<double> fir_same(std::span<const double> x, std::span<const double> taps,
                             Padding padding) {
  check_taps(taps);
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  std::vector<double> y(x.size(), 0.0);
  if (n == 0) return y;
  const auto m = static_cast<std::ptrdiff_t>(taps.size() / 2);
  for (std::ptrdiff_t k = 0; k < m; ++k) {
    if (taps[k] != taps[2 * m - k]) {
      // folding only holds for linear-phase taps
      return fir_same_serial(x, taps, padding);
    }
  }

  // Padded copy removes bounds checks from the inner loop.
  std::vector<double> xp(static_cast<std::size_t>(n + 2 * m));
  for (std::ptrdiff_t i = 0; i < n + 2 * m; ++i) xp[i] = sample_at(x, i - m, padding);

  const double* h = taps.data();
  const double* src = xp.data();
  double* dst = y.data();
  const double centre = h[m];
#pragma omp parallel for schedule(static) if (n * m > 200000)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    // xp[i + m] is x[i]; tap k pairs with tap 2m-k
    const double* c = src + i + m;
    double acc = centre * c[0];
    for (std::ptrdiff_t k = 0; k < m; ++k) acc += h[k] * (c[m - k] + c[k - m]);
    dst[i] = acc;
  }
  return y;
}

}  // namespace emanakey::dsp
