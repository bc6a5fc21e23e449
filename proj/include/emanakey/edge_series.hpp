#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "emanakey/frame.hpp"
#include "emanakey/nrzi.hpp"

namespace emanakey {

/// Binary per-bit-slot edge indicator: slots[k] is 1 when the bus changes
/// state at origin + k * bit_width.
struct EdgeSeries {
  std::vector<std::uint8_t> slots;
  double bit_width = kFullSpeedBitTime;
  double origin = 0.0;

  std::size_t size() const noexcept { return slots.size(); }
  std::size_t edge_count() const noexcept;

  friend bool operator==(const EdgeSeries&, const EdgeSeries&) = default;
};

/// A state change on the bus with its sign on the probe's voltage scale.
struct EdgeEvent {
  double time = 0.0;
  int direction = 0;  // +1 rising, -1 falling
  friend bool operator==(const EdgeEvent&, const EdgeEvent&) = default;
};

/// Probe voltage of each bus state for a 3.3 V differential measurement
/// referenced to mid-rail: J high, K low, SE0 in the middle.
double probe_level(LineState s, double high = 3.3) noexcept;

/// One slot per symbol; a slot is 1 when the symbol differs from the one
/// before it (the first symbol is compared with `before`). Origin is the
/// sequence start time.
EdgeSeries edges_from_symbols(const LineSymbolSequence& seq, LineState before = LineState::J);

/// Reference edge series of the keystroke capture window: DATA packet SYNC
/// through the ACK end-of-packet. Slot 0 is the first SYNC transition.
EdgeSeries edges_analytic(const Frame& frame);

std::vector<EdgeEvent> edge_events(const LineSymbolSequence& seq,
                                   LineState before = LineState::J);

/// Hamming distance after zero-padding the shorter series.
std::size_t hamming_distance(const EdgeSeries& a, const EdgeSeries& b);

/// "1" and "0" per slot.
std::string to_string(const EdgeSeries& s);
EdgeSeries parse_edge_series(std::string_view text, double bit_width = kFullSpeedBitTime);

}  // namespace emanakey
