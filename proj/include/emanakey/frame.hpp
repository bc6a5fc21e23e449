#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "emanakey/bitstream.hpp"
#include "emanakey/keys.hpp"
#include "emanakey/nrzi.hpp"

namespace emanakey {

enum class PacketKind : std::uint8_t { Sof, In, Data0, Data1, Ack, Nak };

std::string_view to_string(PacketKind kind) noexcept;
/// 4-bit packet identifier; the PID byte on the wire is pid | (~pid << 4).
std::uint8_t pid_code(PacketKind kind) noexcept;
bool is_token(PacketKind kind) noexcept;
bool is_data(PacketKind kind) noexcept;

/// SYNC field, transmitted LSB first as 00000001.
inline constexpr std::uint8_t kSyncByte = 0x80;
/// Budget for one polled transaction on the bus.
inline constexpr double kFrameBudgetSeconds = 80e-6;

struct Packet {
  PacketKind kind = PacketKind::Ack;
  /// Field bytes before the CRC: the 11-bit token/SOF field little-endian,
  /// the data payload, or nothing for handshakes.
  std::vector<std::uint8_t> payload;
  /// CRC5 for tokens, CRC16 for data, unused (0) for handshakes.
  std::uint16_t crc = 0;

  /// SYNC, PID, fields and CRC before stuffing.
  BitStream raw_bits() const;
  BitStream stuffed_bits() const;
  /// NRZI from idle J, followed by the EOP.
  LineSymbolSequence line_symbols() const;
};

Packet make_token(PacketKind kind, std::uint8_t address, std::uint8_t endpoint);
Packet make_sof(std::uint16_t frame_number);
Packet make_data(PacketKind kind, std::span<const std::uint8_t> payload);
Packet make_handshake(PacketKind kind);

struct FrameConfig {
  std::uint8_t address = 1;
  std::uint8_t endpoint = 1;
  /// Idle J bit times between consecutive packets.
  int gap_bits = 2;
  bool include_sof = false;
  std::uint16_t sof_frame_number = 0;
  /// IN/NAK polls placed before the keystroke IN token.
  int nak_polls = 0;
};

/// One polled keystroke transaction laid out on the bus timeline.
struct Frame {
  std::vector<Packet> packets;
  /// gaps[i] is the idle time, in bit times, between packets[i] and packets[i+1].
  std::vector<int> gaps;
  double bit_rate = kFullSpeedBitRate;
  /// Index of the first packet of the keystroke window (the DATA packet).
  std::size_t capture_packet = 0;

  double bit_width() const noexcept { return 1.0 / bit_rate; }
  /// Symbols of the whole transaction, gaps included.
  LineSymbolSequence line_symbols() const;
  /// Symbols from the DATA packet's SYNC to the end of the frame, with
  /// start_time set to the offset of that SYNC inside the frame.
  LineSymbolSequence capture_symbols() const;
  std::size_t symbol_count() const;
  double duration() const { return symbol_count() * bit_width(); }
};

/// IN -> DATAx(report, CRC16) -> ACK, optionally preceded by SOF and
/// IN/NAK polls. Throws InvalidArgument if the layout exceeds 80 us.
Frame build_keystroke_transaction(KeyId key, PacketKind data_toggle = PacketKind::Data0,
                                  const FrameConfig& config = {});

}  // namespace emanakey
