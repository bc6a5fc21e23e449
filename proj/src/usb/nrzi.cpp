#include "emanakey/nrzi.hpp"

#include "emanakey/error.hpp"

namespace emanakey {

char to_char(LineState s) noexcept {
  switch (s) {
    case LineState::J: return 'J';
    case LineState::K: return 'K';
    case LineState::SE0: return '0';
  }
  return '?';
}

std::size_t LineSymbolSequence::transitions(LineState before) const noexcept {
  std::size_t n = 0;
  for (auto s : symbols) {
    if (s != before) ++n;
    before = s;
  }
  return n;
}

LineSymbolSequence nrzi_encode(const BitStream& bits, LineState initial) {
  LineSymbolSequence seq;
  seq.symbols.reserve(bits.size() + 3);
  LineState state = initial == LineState::SE0 ? LineState::J : initial;
  for (auto b : bits.bits) {
    if (!b) state = state == LineState::J ? LineState::K : LineState::J;
    seq.symbols.push_back(state);
  }
  return seq;
}

void append_eop(LineSymbolSequence& seq) {
  seq.symbols.push_back(LineState::SE0);
  seq.symbols.push_back(LineState::SE0);
  seq.symbols.push_back(LineState::J);
}

BitStream nrzi_decode(const LineSymbolSequence& seq, LineState initial) {
  BitStream out;
  out.bits.reserve(seq.size());
  LineState prev = initial;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const auto s = seq.symbols[i];
    if (s == LineState::SE0) {
      throw FramingError("SE0 inside packet payload at symbol " + std::to_string(i));
    }
    out.bits.push_back(s == prev);
    prev = s;
  }
  out.stuffed = true;
  return out;
}

std::string to_string(const LineSymbolSequence& seq) {
  std::string out;
  out.reserve(seq.size());
  for (auto s : seq.symbols) out.push_back(to_char(s));
  return out;
}

LineSymbolSequence parse_symbols(std::string_view text) {
  LineSymbolSequence seq;
  for (char c : text) {
    switch (c) {
      case 'J': seq.symbols.push_back(LineState::J); break;
      case 'K': seq.symbols.push_back(LineState::K); break;
      case '0': seq.symbols.push_back(LineState::SE0); break;
      case ' ': break;
      default: throw InvalidArgument(std::string("not a line symbol: '") + c + "'");
    }
  }
  return seq;
}

}  // namespace emanakey
