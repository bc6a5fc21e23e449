#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace emanakey::dsp {

// Windowed-sinc FIR design with a Kaiser window. Frequencies in Hz.

struct KaiserParams {
  int taps = 0;  // always odd, so the filter has an integer group delay
  double beta = 0.0;
};

/// Length and beta for `atten_db` stopband attenuation across a transition
/// band `transition_hz` wide (Kaiser's empirical formulas).
KaiserParams kaiser_order(double atten_db, double transition_hz, double sample_rate);
std::vector<double> kaiser_window(int taps, double beta);

/// Linear-phase lowpass; passes `pass_hz`, reaches `atten_db` by `stop_hz`.
std::vector<double> design_lowpass(double pass_hz, double stop_hz, double atten_db,
                                   double sample_rate);
/// Linear-phase highpass; stopband below `stop_hz`, passband above `pass_hz`.
std::vector<double> design_highpass(double stop_hz, double pass_hz, double atten_db,
                                    double sample_rate);
/// Cascade of design_highpass(stop_lo, pass_lo) and design_lowpass(pass_hi,
/// stop_hi), folded into one symmetric impulse response.
std::vector<double> design_bandpass(double stop_lo, double pass_lo, double pass_hi,
                                    double stop_hi, double atten_db, double sample_rate);

std::vector<double> convolve_full(std::span<const double> a, std::span<const double> b);
/// |H(f)| of an FIR, evaluated directly.
double magnitude_response(std::span<const double> taps, double freq_hz, double sample_rate);

/// Value at the (1 - skip_fraction) quantile of |x|, linearly interpolated
/// between order statistics. skip_fraction = 0.01 skips the top 1%.
double robust_max(std::span<const double> x, double skip_fraction);

/// First central difference, (x[i+1] - x[i-1]) / 2; end samples use
/// one-sided differences.
std::vector<double> central_difference(std::span<const double> x);

/// Peaks of a non-negative signal. Candidates are local maxima strictly
/// above `floor` (a flat top counts once, at its middle sample). They are
/// accepted highest first, skipping any candidate closer than
/// `min_separation` samples to an accepted one. Result is sorted by index.
std::vector<std::size_t> pick_peaks(std::span<const double> magnitude, double floor,
                                    double min_separation);

}  // namespace emanakey::dsp
