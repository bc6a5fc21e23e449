#include "emanakey/crc.hpp"

#include <array>

#include "emanakey/error.hpp"

namespace emanakey {
namespace {

constexpr std::uint8_t kCrc5PolyReflected = 0x14;     // 0x05 reversed in 5 bits
constexpr std::uint16_t kCrc16PolyReflected = 0xA001;  // 0x8005 reversed

constexpr std::array<std::uint16_t, 256> make_crc16_table() {
  std::array<std::uint16_t, 256> table{};
  for (unsigned i = 0; i < 256; ++i) {
    std::uint16_t r = static_cast<std::uint16_t>(i);
    for (int k = 0; k < 8; ++k) {
      r = (r & 1u) ? static_cast<std::uint16_t>((r >> 1) ^ kCrc16PolyReflected)
                   : static_cast<std::uint16_t>(r >> 1);
    }
    table[i] = r;
  }
  return table;
}

constexpr auto kCrc16Table = make_crc16_table();

std::uint8_t crc5_register(const BitStream& bits) {
  std::uint8_t r = 0x1F;
  for (auto b : bits.bits) {
    const bool feedback = ((r ^ b) & 1u) != 0;
    r >>= 1;
    if (feedback) r ^= kCrc5PolyReflected;
  }
  return r;
}

std::uint16_t crc16_register(std::span<const std::uint8_t> bytes) {
  std::uint16_t r = 0xFFFF;
  for (auto byte : bytes) {
    r = static_cast<std::uint16_t>((r >> 8) ^ kCrc16Table[(r ^ byte) & 0xFFu]);
  }
  return r;
}

}  // namespace

std::uint8_t crc5(const BitStream& field) {
  if (field.size() != 11) {
    throw InvalidArgument("crc5 expects 11 token bits, got " +
                          std::to_string(field.size()));
  }
  return static_cast<std::uint8_t>(~crc5_register(field) & 0x1Fu);
}

std::uint8_t crc5_token(std::uint8_t addr, std::uint8_t endp) {
  BitStream field;
  field.append_lsb_first(addr, 7);
  field.append_lsb_first(endp, 4);
  return crc5(field);
}

std::uint8_t crc5_residual(const BitStream& field_and_crc) {
  return crc5_register(field_and_crc);
}

std::uint16_t crc16(std::span<const std::uint8_t> payload) {
  return static_cast<std::uint16_t>(~crc16_register(payload));
}

std::uint16_t crc16_residual(std::span<const std::uint8_t> payload_and_crc) {
  return crc16_register(payload_and_crc);
}

}  // namespace emanakey
