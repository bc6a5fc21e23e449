#include "emanakey/edge_series.hpp"

#include <algorithm>

#include "emanakey/error.hpp"

namespace emanakey {

std::size_t EdgeSeries::edge_count() const noexcept {
  return static_cast<std::size_t>(std::count(slots.begin(), slots.end(), std::uint8_t{1}));
}

double probe_level(LineState s, double high) noexcept {
  switch (s) {
    case LineState::J: return high;
    case LineState::K: return 0.0;
    case LineState::SE0: return 0.5 * high;
  }
  return 0.0;
}

EdgeSeries edges_from_symbols(const LineSymbolSequence& seq, LineState before) {
  EdgeSeries out;
  out.bit_width = seq.symbol_duration;
  out.origin = seq.start_time;
  out.slots.reserve(seq.size());
  LineState prev = before;
  for (auto s : seq.symbols) {
    out.slots.push_back(s != prev ? 1 : 0);
    prev = s;
  }
  return out;
}

EdgeSeries edges_analytic(const Frame& frame) {
  auto series = edges_from_symbols(frame.capture_symbols());
  series.origin = 0.0;
  return series;
}

std::vector<EdgeEvent> edge_events(const LineSymbolSequence& seq, LineState before) {
  std::vector<EdgeEvent> events;
  LineState prev = before;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const auto s = seq.symbols[i];
    if (s != prev) {
      events.push_back({seq.start_time + static_cast<double>(i) * seq.symbol_duration,
                        probe_level(s) > probe_level(prev) ? 1 : -1});
    }
    prev = s;
  }
  return events;
}

std::size_t hamming_distance(const EdgeSeries& a, const EdgeSeries& b) {
  const std::size_t n = std::max(a.size(), b.size());
  std::size_t d = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint8_t x = i < a.size() ? a.slots[i] : 0;
    const std::uint8_t y = i < b.size() ? b.slots[i] : 0;
    d += x != y;
  }
  return d;
}

std::string to_string(const EdgeSeries& s) {
  std::string out;
  out.reserve(s.size());
  for (auto v : s.slots) out.push_back(v ? '1' : '0');
  return out;
}

EdgeSeries parse_edge_series(std::string_view text, double bit_width) {
  EdgeSeries s;
  s.bit_width = bit_width;
  for (char c : text) {
    if (c == '0' || c == '1') {
      s.slots.push_back(static_cast<std::uint8_t>(c - '0'));
    } else if (c != ' ' && c != '_') {
      throw InvalidArgument(std::string("edge series: unexpected character '") + c + "'");
    }
  }
  return s;
}

}  // namespace emanakey
