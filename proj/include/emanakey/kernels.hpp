#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace emanakey::dsp {

/// How samples outside the input are taken when filtering.
enum class Padding : std::uint8_t { Zero, Replicate };

/// Linear-phase FIR with the group delay removed: output i lines up with
/// input i. `taps` must have odd length. Straightforward double loop kept
/// as the reference implementation.
std::vector<double> fir_same_serial(std::span<const double> x, std::span<const double> taps,
                                    Padding padding = Padding::Zero);

/// Same result as fir_same_serial up to rounding. Folds symmetric taps
/// (asymmetric ones fall back to the serial loop) and splits output blocks across OpenMP threads. Each output depends only
/// on its own inputs, so results do not change with the thread count.
std::vector<double> fir_same(std::span<const double> x, std::span<const double> taps,
                             Padding padding = Padding::Zero);

}  // namespace emanakey::dsp
