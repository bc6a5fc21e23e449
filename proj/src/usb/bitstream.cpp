#include "emanakey/bitstream.hpp"

#include <algorithm>

#include "emanakey/error.hpp"

namespace emanakey {

namespace {
constexpr int kMaxOnes = 6;
}

std::size_t BitStream::count_zeros() const noexcept {
  return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), 0));
}

void BitStream::append_lsb_first(std::uint32_t value, int width) {
  for (int i = 0; i < width; ++i) bits.push_back((value >> i) & 1u);
}

void BitStream::append(const BitStream& other) {
  bits.insert(bits.end(), other.bits.begin(), other.bits.end());
}

BitStream bits_from_bytes(std::span<const std::uint8_t> bytes) {
  BitStream out;
  out.bits.reserve(bytes.size() * 8);
  for (auto b : bytes) out.append_lsb_first(b, 8);
  return out;
}

BitStream parse_bits(std::string_view text) {
  BitStream out;
  for (char c : text) {
    if (c != '0' && c != '1') {
      throw InvalidArgument(std::string("not a bit: '") + c + "'");
    }
    out.bits.push_back(c == '1');
  }
  return out;
}

std::string to_string(const BitStream& bits) {
  std::string out;
  out.reserve(bits.size());
  for (auto b : bits.bits) out.push_back(b ? '1' : '0');
  return out;
}

std::size_t longest_run_of_ones(const BitStream& bits) {
  std::size_t best = 0, run = 0;
  for (auto b : bits.bits) {
    run = b ? run + 1 : 0;
    best = std::max(best, run);
  }
  return best;
}

BitStream bit_stuff(const BitStream& raw) {
  if (raw.stuffed) throw InvalidArgument("bit_stuff: input already stuffed");
  BitStream out;
  out.stuffed = true;
  out.bits.reserve(raw.size() + raw.size() / kMaxOnes + 1);
  int run = 0;
  for (auto b : raw.bits) {
    out.bits.push_back(b);
    if (!b) {
      run = 0;
      continue;
    }
    if (++run == kMaxOnes) {
      out.bits.push_back(0);
      run = 0;
    }
  }
  return out;
}

BitStream bit_destuff(const BitStream& stuffed) {
  BitStream out;
  out.bits.reserve(stuffed.size());
  int run = 0;
  for (std::size_t i = 0; i < stuffed.size(); ++i) {
    const auto b = stuffed.bits[i];
    if (run == kMaxOnes) {
      if (b) {
        throw MalformedStream("seven consecutive '1' bits ending at bit " +
                              std::to_string(i));
      }
      run = 0;  // drop the stuff bit
      continue;
    }
    out.bits.push_back(b);
    run = b ? run + 1 : 0;
  }
  return out;
}

}  // namespace emanakey
