#include "emanakey/frame.hpp"

#include <string>

#include "emanakey/crc.hpp"
#include "emanakey/error.hpp"

namespace emanakey {

std::string_view to_string(PacketKind kind) noexcept {
  switch (kind) {
    case PacketKind::Sof: return "SOF";
    case PacketKind::In: return "IN";
    case PacketKind::Data0: return "DATA0";
    case PacketKind::Data1: return "DATA1";
    case PacketKind::Ack: return "ACK";
    case PacketKind::Nak: return "NAK";
  }
  return "?";
}

std::uint8_t pid_code(PacketKind kind) noexcept {
  switch (kind) {
    case PacketKind::Sof: return 0x5;
    case PacketKind::In: return 0x9;
    case PacketKind::Data0: return 0x3;
    case PacketKind::Data1: return 0xB;
    case PacketKind::Ack: return 0x2;
    case PacketKind::Nak: return 0xA;
  }
  return 0;
}

bool is_token(PacketKind kind) noexcept {
  return kind == PacketKind::In || kind == PacketKind::Sof;
}

bool is_data(PacketKind kind) noexcept {
  return kind == PacketKind::Data0 || kind == PacketKind::Data1;
}

BitStream Packet::raw_bits() const {
  BitStream bits;
  bits.append_lsb_first(kSyncByte, 8);
  const std::uint8_t pid = pid_code(kind);
  bits.append_lsb_first(static_cast<std::uint32_t>(pid | ((~pid & 0x0Fu) << 4)), 8);
  if (is_token(kind)) {
    const std::uint32_t field = payload.at(0) | (std::uint32_t{payload.at(1)} << 8);
    bits.append_lsb_first(field, 11);
    bits.append_lsb_first(crc, 5);
  } else if (is_data(kind)) {
    for (auto b : payload) bits.append_lsb_first(b, 8);
    bits.append_lsb_first(crc, 16);
  }
  return bits;
}

BitStream Packet::stuffed_bits() const { return bit_stuff(raw_bits()); }

LineSymbolSequence Packet::line_symbols() const {
  auto seq = nrzi_encode(stuffed_bits(), LineState::J);
  append_eop(seq);
  return seq;
}

namespace {

Packet make_field_token(PacketKind kind, std::uint16_t field11) {
  Packet p;
  p.kind = kind;
  p.payload = {static_cast<std::uint8_t>(field11 & 0xFF),
               static_cast<std::uint8_t>((field11 >> 8) & 0x07)};
  BitStream field;
  field.append_lsb_first(field11, 11);
  p.crc = crc5(field);
  return p;
}

}  // namespace

Packet make_token(PacketKind kind, std::uint8_t address, std::uint8_t endpoint) {
  if (!is_token(kind)) throw InvalidArgument("not a token kind");
  if (address > 0x7F || endpoint > 0x0F) {
    throw InvalidArgument("address must fit 7 bits and endpoint 4 bits");
  }
  return make_field_token(kind, static_cast<std::uint16_t>(address | (endpoint << 7)));
}

Packet make_sof(std::uint16_t frame_number) {
  if (frame_number > 0x7FF) throw InvalidArgument("SOF frame number must fit 11 bits");
  return make_field_token(PacketKind::Sof, frame_number);
}

Packet make_data(PacketKind kind, std::span<const std::uint8_t> payload) {
  if (!is_data(kind)) throw InvalidArgument("not a data kind");
  Packet p;
  p.kind = kind;
  p.payload.assign(payload.begin(), payload.end());
  p.crc = crc16(payload);
  return p;
}

Packet make_handshake(PacketKind kind) {
  if (kind != PacketKind::Ack && kind != PacketKind::Nak) {
    throw InvalidArgument("not a handshake kind");
  }
  Packet p;
  p.kind = kind;
  return p;
}

LineSymbolSequence Frame::line_symbols() const {
  LineSymbolSequence seq;
  seq.symbol_duration = bit_width();
  for (std::size_t i = 0; i < packets.size(); ++i) {
    if (i > 0) seq.symbols.insert(seq.symbols.end(), gaps.at(i - 1), LineState::J);
    const auto p = packets[i].line_symbols();
    seq.symbols.insert(seq.symbols.end(), p.symbols.begin(), p.symbols.end());
  }
  return seq;
}

LineSymbolSequence Frame::capture_symbols() const {
  LineSymbolSequence seq;
  seq.symbol_duration = bit_width();
  std::size_t offset = 0;
  for (std::size_t i = 0; i < capture_packet; ++i) {
    offset += packets[i].line_symbols().size() + static_cast<std::size_t>(gaps.at(i));
  }
  seq.start_time = offset * bit_width();
  for (std::size_t i = capture_packet; i < packets.size(); ++i) {
    if (i > capture_packet) seq.symbols.insert(seq.symbols.end(), gaps.at(i - 1), LineState::J);
    const auto p = packets[i].line_symbols();
    seq.symbols.insert(seq.symbols.end(), p.symbols.begin(), p.symbols.end());
  }
  return seq;
}

std::size_t Frame::symbol_count() const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < packets.size(); ++i) {
    n += packets[i].line_symbols().size();
    if (i > 0) n += static_cast<std::size_t>(gaps.at(i - 1));
  }
  return n;
}

Frame build_keystroke_transaction(KeyId key, PacketKind data_toggle, const FrameConfig& config) {
  if (!is_data(data_toggle)) throw InvalidArgument("data toggle must be DATA0 or DATA1");
  if (config.gap_bits < 0 || config.nak_polls < 0) {
    throw InvalidArgument("gap_bits and nak_polls must be non-negative");
  }
  Frame frame;
  if (config.include_sof) frame.packets.push_back(make_sof(config.sof_frame_number));
  for (int i = 0; i < config.nak_polls; ++i) {
    frame.packets.push_back(make_token(PacketKind::In, config.address, config.endpoint));
    frame.packets.push_back(make_handshake(PacketKind::Nak));
  }
  frame.packets.push_back(make_token(PacketKind::In, config.address, config.endpoint));
  frame.capture_packet = frame.packets.size();
  const auto report = hid_report_for_key(key).bytes();
  frame.packets.push_back(make_data(data_toggle, report));
  frame.packets.push_back(make_handshake(PacketKind::Ack));
  frame.gaps.assign(frame.packets.size() - 1, config.gap_bits);

  if (frame.duration() > kFrameBudgetSeconds) {
    throw InvalidArgument("transaction exceeds the 80 us frame budget (" +
                          std::to_string(frame.duration() * 1e6) + " us)");
  }
  return frame;
}

}  // namespace emanakey
