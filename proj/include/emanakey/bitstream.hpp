#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace emanakey {

/// Ordered bits in transmission order, one bit (0 or 1) per element.
struct BitStream {
  std::vector<std::uint8_t> bits;
  bool stuffed = false;

  std::size_t size() const noexcept { return bits.size(); }
  std::size_t count_zeros() const noexcept;

  /// Appends the low `width` bits of `value`, least significant first.
  void append_lsb_first(std::uint32_t value, int width);
  void append(const BitStream& other);

  friend bool operator==(const BitStream&, const BitStream&) = default;
};

/// Bytes in order, each byte LSB first.
BitStream bits_from_bytes(std::span<const std::uint8_t> bytes);
/// "0110" -> {0,1,1,0}; throws InvalidArgument on any other character.
BitStream parse_bits(std::string_view text);
std::string to_string(const BitStream& bits);

std::size_t longest_run_of_ones(const BitStream& bits);

/// Inserts a '0' after every six consecutive '1's, including when the
/// sixth '1' is the last bit of the stream.
BitStream bit_stuff(const BitStream& raw);

/// Inverse of bit_stuff. Throws MalformedStream on a run of seven '1's.
BitStream bit_destuff(const BitStream& stuffed);

}  // namespace emanakey
