#include <cmath>
#include <numbers>

#include "emanakey/dsp.hpp"
#include "emanakey/error.hpp"

namespace emanakey::dsp {

KaiserParams kaiser_order(double atten_db, double transition_hz, double sample_rate) {
  if (transition_hz <= 0.0 || sample_rate <= 0.0) {
    throw InvalidArgument("kaiser_order: transition and sample rate must be positive");
  }
  const double a = std::abs(atten_db);
  KaiserParams kp;
  if (a > 50.0) {
    kp.beta = 0.1102 * (a - 8.7);
  } else if (a > 21.0) {
    kp.beta = 0.5842 * std::pow(a - 21.0, 0.4) + 0.07886 * (a - 21.0);
  }
  const double width = 2.0 * transition_hz / sample_rate;  // fraction of Nyquist
  kp.taps = static_cast<int>(std::ceil((a - 7.95) / (2.285 * std::numbers::pi * width) + 1.0));
  kp.taps |= 1;
  return kp;
}

std::vector<double> kaiser_window(int taps, double beta) {
  std::vector<double> w(static_cast<std::size_t>(taps));
  const double denom = std::cyl_bessel_i(0.0, beta);
  const double m = taps - 1;
  for (int n = 0; 2 * n <= taps - 1; ++n) {
    const double r = m > 0 ? 2.0 * n / m - 1.0 : 0.0;
    w[n] = w[taps - 1 - n] = std::cyl_bessel_i(0.0, beta * std::sqrt(std::max(0.0, 1.0 - r * r))) / denom;
  }
  return w;
}

namespace {

std::vector<double> windowed_sinc(double cutoff_hz, double sample_rate, const KaiserParams& kp) {
  const auto w = kaiser_window(kp.taps, kp.beta);
  const double fc = cutoff_hz / sample_rate;  // cycles per sample
  const int mid = kp.taps / 2;
  std::vector<double> h(w.size());
  double sum = 0.0;
  for (int n = 0; n < kp.taps; ++n) {
    const double k = std::abs(n - mid);
    const double sinc = k == 0 ? 2.0 * fc
                               : std::sin(2.0 * std::numbers::pi * fc * k) / (std::numbers::pi * k);
    h[n] = sinc * w[n];
    sum += h[n];
  }
  for (auto& v : h) v /= sum;  // unit DC gain
  return h;
}

void check_band(double lo, double hi, double sample_rate) {
  if (!(lo > 0.0 && lo < hi && hi < sample_rate / 2.0)) {
    throw InvalidArgument("filter band edges must satisfy 0 < lo < hi < fs/2");
  }
}

}  // namespace

std::vector<double> design_lowpass(double pass_hz, double stop_hz, double atten_db,
                                   double sample_rate) {
  check_band(pass_hz, stop_hz, sample_rate);
  const auto kp = kaiser_order(atten_db, stop_hz - pass_hz, sample_rate);
  return windowed_sinc(0.5 * (pass_hz + stop_hz), sample_rate, kp);
}

std::vector<double> design_highpass(double stop_hz, double pass_hz, double atten_db,
                                    double sample_rate) {
  check_band(stop_hz, pass_hz, sample_rate);
  const auto kp = kaiser_order(atten_db, pass_hz - stop_hz, sample_rate);
  auto h = windowed_sinc(0.5 * (stop_hz + pass_hz), sample_rate, kp);
  for (auto& v : h) v = -v;
  h[h.size() / 2] += 1.0;
  return h;
}

std::vector<double> design_bandpass(double stop_lo, double pass_lo, double pass_hi,
                                    double stop_hi, double atten_db, double sample_rate) {
  if (!(pass_lo < pass_hi)) throw InvalidArgument("bandpass: pass_lo must be below pass_hi");
  const auto hp = design_highpass(stop_lo, pass_lo, atten_db, sample_rate);
  const auto lp = design_lowpass(pass_hi, stop_hi, atten_db, sample_rate);
  auto h = convolve_full(hp, lp);
  // exact symmetry; summation order leaves the two halves a few ulps apart
  for (std::size_t k = 0, j = h.size() - 1; k < j; ++k, --j) h[k] = h[j] = 0.5 * (h[k] + h[j]);
  return h;
}

std::vector<double> convolve_full(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) return {};
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

double magnitude_response(std::span<const double> taps, double freq_hz, double sample_rate) {
  const double w = 2.0 * std::numbers::pi * freq_hz / sample_rate;
  double re = 0.0, im = 0.0;
  for (std::size_t n = 0; n < taps.size(); ++n) {
    re += taps[n] * std::cos(w * n);
    im -= taps[n] * std::sin(w * n);
  }
  return std::hypot(re, im);
}

}  // namespace emanakey::dsp
