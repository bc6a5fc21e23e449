#pragma once

#include <cstdint>
#include <span>

#include "emanakey/bitstream.hpp"

namespace emanakey {

// USB 2.0 packet checksums. Both work on the reflected (LSB-first) form of
// the shift register, so bit 0 of a returned value is the first CRC bit on
// the wire and the value can be appended with append_lsb_first().
//
//   CRC5  token  x^5 + x^2 + 1            init all ones, output complemented
//   CRC16 data   x^16 + x^15 + x^2 + 1    init all ones, output complemented

/// Remainder left in the register after running field||crc through it
/// without the final complement. USB lists these as 01100b and
/// 1000000000001101b in MSB-first order.
inline constexpr std::uint8_t kCrc5Residual = 0x06;
inline constexpr std::uint16_t kCrc16Residual = 0xB001;

/// Throws InvalidArgument unless `field` holds exactly 11 bits.
std::uint8_t crc5(const BitStream& field);
std::uint8_t crc5_token(std::uint8_t addr, std::uint8_t endp);
std::uint8_t crc5_residual(const BitStream& field_and_crc);

std::uint16_t crc16(std::span<const std::uint8_t> payload);
std::uint16_t crc16_residual(std::span<const std::uint8_t> payload_and_crc);

}  // namespace emanakey
