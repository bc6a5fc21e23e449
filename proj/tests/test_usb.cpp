#include <doctest.h>

#include <random>
#include <set>
#include <sstream>

#include "emanakey/bitstream.hpp"
#include "emanakey/crc.hpp"
#include "emanakey/error.hpp"
#include "emanakey/frame.hpp"
#include "emanakey/keys.hpp"
#include "emanakey/nrzi.hpp"
#include "oracles.hpp"

using namespace emanakey;

TEST_CASE("key set has 70 distinct labels in index order") {
  std::set<std::string> labels;
  for (auto k : KeyId::all()) labels.emplace(k.label());
  CHECK(labels.size() == 70);
  CHECK(KeyId(0).label() == "0");
  CHECK(KeyId(10).label() == "a");
  CHECK(KeyId(36).label() == "A");
  CHECK(KeyId(62).label() == ".");
  CHECK(KeyId(63).label() == ",");
  CHECK(KeyId(69).label() == "ENTER");
  CHECK_THROWS_AS(KeyId(70), InvalidArgument);
  CHECK_THROWS_AS(KeyId(-1), InvalidArgument);
}

TEST_CASE("key lookup is exact for characters and loose for named keys") {
  CHECK(KeyId::find("a")->index() == 10);
  CHECK(KeyId::find("A")->index() == 36);
  CHECK(KeyId::find("enter")->index() == 69);
  CHECK(KeyId::find("PERIOD")->label() == ".");
  CHECK(KeyId::find("comma")->label() == ",");
  CHECK_FALSE(KeyId::find("F13").has_value());
  try {
    KeyId::from_label("F13");
    FAIL("expected throw");
  } catch (const InvalidArgument& e) {
    CHECK(std::string(e.what()).find("BACKSPACE") != std::string::npos);
  }
}

TEST_CASE("boot keyboard reports") {
  auto r = hid_report_for_key(KeyId::from_label("a"));
  CHECK(r.bytes() == std::array<std::uint8_t, 8>{0, 0, 0x04, 0, 0, 0, 0, 0});
  r = hid_report_for_key(KeyId::from_label("Z"));
  CHECK(r.bytes() == std::array<std::uint8_t, 8>{0x02, 0, 0x1D, 0, 0, 0, 0, 0});
  CHECK(hid_report_for_key(KeyId::from_label("0")).keycodes[0] == 0x27);
  CHECK(hid_report_for_key(KeyId::from_label("1")).keycodes[0] == 0x1E);
  CHECK(hid_report_for_key(KeyId::from_label("SPACE")).keycodes[0] == 0x2C);
  CHECK(hid_report_for_key(KeyId::from_label("BACKSPACE")).keycodes[0] == 0x2A);
  CHECK(hid_report_for_key(KeyId::from_label(".")).keycodes[0] == 0x37);
  CHECK(hid_report_for_key(KeyId::from_label(",")).keycodes[0] == 0x36);
  const auto ctrl = hid_report_for_key(KeyId::from_label("CTRL"));
  CHECK(ctrl.modifier == modifier::kLeftCtrl);
  CHECK(ctrl.keycodes[0] == 0);
  CHECK(hid_report_for_key(KeyId::from_label("ALT")).modifier == modifier::kLeftAlt);
  CHECK(hid_report_for_key(KeyId::from_label("SHIFT")).modifier == modifier::kLeftShift);

  std::set<std::array<std::uint8_t, 8>> distinct;
  for (auto k : KeyId::all()) distinct.insert(hid_report_for_key(k).bytes());
  CHECK(distinct.size() == 70);
}

TEST_CASE("key table text round trip") {
  std::stringstream s;
  write_key_table(s);
  const auto rows = read_key_table(s);
  CHECK(rows == key_table());

  std::istringstream bad("# header\n0\t0\t0x00\t0x27\n1\tzz\n");
  try {
    read_key_table(bad);
    FAIL("expected throw");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("CRC5 known token values") {
  CHECK(crc5_token(0, 0) == 0x02);
  CHECK(crc5_token(1, 1) == 0x0B);
  CHECK_THROWS_AS(crc5(parse_bits("0101")), InvalidArgument);
}

TEST_CASE("CRC5 matches long division on every 11-bit field") {
  for (std::uint32_t v = 0; v < (1u << 11); ++v) {
    BitStream field;
    field.append_lsb_first(v, 11);
    const auto expect = oracle::lsb_first_value(oracle::crc_long_division(field.bits, oracle::crc5_generator()));
    REQUIRE(crc5(field) == expect);
    BitStream with_crc = field;
    with_crc.append_lsb_first(crc5(field), 5);
    REQUIRE(crc5_residual(with_crc) == kCrc5Residual);
  }
}

TEST_CASE("CRC16 check values") {
  const std::string check = "123456789";
  std::vector<std::uint8_t> bytes(check.begin(), check.end());
  CHECK(crc16(bytes) == 0xB4C8);
  CHECK(crc16(std::span<const std::uint8_t>()) == 0x0000);
  const auto report = hid_report_for_key(KeyId::from_label("a")).bytes();
  CHECK(crc16(report) == 0x70BE);
}

TEST_CASE("CRC16 matches long division on random payloads") {
  std::mt19937_64 rng(1234);
  std::uniform_int_distribution<int> len(0, 64);
  std::uniform_int_distribution<int> byte(0, 255);
  for (int t = 0; t < 10000; ++t) {
    std::vector<std::uint8_t> p(static_cast<std::size_t>(len(rng)));
    for (auto& b : p) b = static_cast<std::uint8_t>(byte(rng));
    const auto expect = oracle::lsb_first_value(oracle::crc_long_division(oracle::byte_bits(p), oracle::crc16_generator()));
    const auto crc = crc16(p);
    REQUIRE(crc == expect);
    p.push_back(static_cast<std::uint8_t>(crc & 0xFF));
    p.push_back(static_cast<std::uint8_t>(crc >> 8));
    REQUIRE(crc16_residual(p) == kCrc16Residual);
  }
}

TEST_CASE("bit stuffing examples") {
  CHECK(to_string(bit_stuff(parse_bits("1111111"))) == "11111101");
  CHECK(to_string(bit_stuff(parse_bits("111111"))) == "1111110");
  CHECK(to_string(bit_stuff(parse_bits("0101"))) == "0101");
  CHECK(bit_stuff(BitStream{}).size() == 0);
  CHECK_THROWS_AS(bit_destuff(parse_bits("01111111")), MalformedStream);
  CHECK_THROWS_AS(bit_stuff(bit_stuff(parse_bits("1"))), InvalidArgument);
}

TEST_CASE("stuff and destuff are inverse on every string up to 16 bits") {
  for (int n = 0; n <= 16; ++n) {
    for (std::uint32_t v = 0; v < (1u << n); ++v) {
      BitStream raw;
      raw.append_lsb_first(v, n);
      const auto stuffed = bit_stuff(raw);
      REQUIRE(to_string(stuffed) == oracle::stuff_text(to_string(raw)));
      REQUIRE(longest_run_of_ones(stuffed) <= 6);
      REQUIRE(bit_destuff(stuffed).bits == raw.bits);
    }
  }
}

TEST_CASE("stuff and destuff are inverse on random long strings") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::size_t> len(0, 512);
  for (int t = 0; t < 10000; ++t) {
    // ones-heavy strings exercise the stuffing path
    const auto text = oracle::random_bits(rng, len(rng), t % 2 ? 0.5 : 0.9);
    const auto raw = parse_bits(text);
    const auto stuffed = bit_stuff(raw);
    REQUIRE(to_string(stuffed) == oracle::stuff_text(text));
    REQUIRE(bit_destuff(stuffed).bits == raw.bits);
  }
}

TEST_CASE("NRZI encoding") {
  CHECK(to_string(nrzi_encode(parse_bits("00000001"))) == "KJKJKJKK");
  CHECK(to_string(nrzi_encode(parse_bits("1111"))) == "JJJJ");
  auto seq = nrzi_encode(parse_bits("0"));
  append_eop(seq);
  CHECK(to_string(seq) == "K00J");
  CHECK_THROWS_AS(nrzi_decode(seq), FramingError);

  std::mt19937_64 rng(5);
  for (int t = 0; t < 1000; ++t) {
    const auto bits = parse_bits(oracle::random_bits(rng, 1 + t % 200));
    const auto s = nrzi_encode(bits);
    REQUIRE(s.transitions() == bits.count_zeros());
    REQUIRE(nrzi_decode(s).bits == bits.bits);
  }
}

TEST_CASE("packet layouts") {
  const auto in = make_token(PacketKind::In, 1, 1);
  CHECK(in.crc == 0x0B);
  CHECK(in.raw_bits().size() == 32);
  CHECK(to_string(in.raw_bits()).substr(0, 16) == "0000000110010110");

  const auto ack = make_handshake(PacketKind::Ack);
  CHECK(to_string(ack.line_symbols()) == "KJKJKJKKJJKJJKKK00J");

  const auto report = hid_report_for_key(KeyId::from_label("a")).bytes();
  const auto data = make_data(PacketKind::Data0, report);
  CHECK(data.crc == 0x70BE);
  CHECK(data.raw_bits().size() == 96);
  CHECK(data.stuffed_bits().size() >= data.raw_bits().size());

  CHECK_THROWS_AS(make_token(PacketKind::Ack, 1, 1), InvalidArgument);
  CHECK_THROWS_AS(make_token(PacketKind::In, 0x80, 1), InvalidArgument);
  CHECK_THROWS_AS(make_sof(0x800), InvalidArgument);
}

TEST_CASE("keystroke transaction") {
  const auto f = build_keystroke_transaction(KeyId::from_label("a"));
  REQUIRE(f.packets.size() == 3);
  CHECK(f.packets[0].kind == PacketKind::In);
  CHECK(f.packets[1].kind == PacketKind::Data0);
  CHECK(f.packets[2].kind == PacketKind::Ack);
  CHECK(f.capture_packet == 1);
  CHECK(f.duration() < kFrameBudgetSeconds);
  CHECK(f.line_symbols().size() == f.symbol_count());

  const auto cap = f.capture_symbols();
  CHECK(cap.start_time == doctest::Approx((f.packets[0].line_symbols().size() + 2) * f.bit_width()));
  CHECK(cap.size() + f.packets[0].line_symbols().size() + 2 == f.symbol_count());

  FrameConfig many;
  many.nak_polls = 20;
  CHECK_THROWS_AS(build_keystroke_transaction(KeyId(0), PacketKind::Data0, many), InvalidArgument);
  CHECK_THROWS_AS(build_keystroke_transaction(KeyId(0), PacketKind::Ack), InvalidArgument);

  FrameConfig sof;
  sof.include_sof = true;
  sof.nak_polls = 1;
  const auto g = build_keystroke_transaction(KeyId(0), PacketKind::Data1, sof);
  CHECK(g.packets.size() == 6);
  CHECK(g.packets[g.capture_packet].kind == PacketKind::Data1);
}

TEST_CASE("stuffed frame symbols decode back to the raw packet bits") {
  for (auto key : KeyId::all()) {
    const auto f = build_keystroke_transaction(key);
    for (const auto& p : f.packets) {
      auto seq = nrzi_encode(p.stuffed_bits());
      REQUIRE(bit_destuff(nrzi_decode(seq)).bits == p.raw_bits().bits);
      REQUIRE(longest_run_of_ones(p.stuffed_bits()) <= 6);
    }
  }
}
