#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "emanakey/bitstream.hpp"

namespace emanakey {

/// Full-speed bus states. J is the idle state (D+ high, D- low), K the
/// opposite, SE0 both lines low.
enum class LineState : std::uint8_t { J, K, SE0 };

char to_char(LineState s) noexcept;

inline constexpr double kFullSpeedBitRate = 12e6;
inline constexpr double kFullSpeedBitTime = 1.0 / kFullSpeedBitRate;

struct LineSymbolSequence {
  std::vector<LineState> symbols;
  double symbol_duration = kFullSpeedBitTime;
  double start_time = 0.0;

  std::size_t size() const noexcept { return symbols.size(); }
  double duration() const noexcept { return symbol_duration * symbols.size(); }
  /// Number of positions where a symbol differs from its predecessor; the
  /// first symbol is compared against `before`.
  std::size_t transitions(LineState before = LineState::J) const noexcept;

  friend bool operator==(const LineSymbolSequence&, const LineSymbolSequence&) = default;
};

/// '0' toggles J<->K, '1' holds the state. No EOP is appended.
LineSymbolSequence nrzi_encode(const BitStream& bits, LineState initial = LineState::J);

/// Appends the end-of-packet pattern SE0 SE0 J.
void append_eop(LineSymbolSequence& seq);

/// Inverse of nrzi_encode. Throws FramingError on an SE0 symbol.
BitStream nrzi_decode(const LineSymbolSequence& seq, LineState initial = LineState::J);

/// Letters J, K and '0' (SE0), e.g. "KJJJK".
std::string to_string(const LineSymbolSequence& seq);
LineSymbolSequence parse_symbols(std::string_view text);

}  // namespace emanakey
