#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace emanakey {

/// One of the 70 target keystrokes: digits, lowercase and uppercase
/// letters, period, comma, space, backspace, CTRL, ALT, SHIFT and ENTER.
class KeyId {
 public:
  static constexpr int kCount = 70;

  constexpr KeyId() = default;
  /// Throws InvalidArgument when index is outside [0, 70).
  explicit KeyId(int index);

  int index() const noexcept { return index_; }
  std::string_view label() const noexcept;

  /// Exact label match ("a" and "A" are different keys). Named keys are
  /// also accepted case-insensitively, and "PERIOD"/"COMMA" alias "."/",".
  static std::optional<KeyId> find(std::string_view label);
  /// Like find(), but throws InvalidArgument listing all labels.
  static KeyId from_label(std::string_view label);
  static const std::array<KeyId, kCount>& all();

  friend constexpr auto operator<=>(KeyId, KeyId) = default;

 private:
  int index_ = 0;
};

/// Comma-separated list of every key label in index order.
std::string key_labels_joined();

/// Boot-protocol keyboard input report (8 bytes on the wire).
struct HidReport {
  std::uint8_t modifier = 0;
  std::uint8_t reserved = 0;
  std::array<std::uint8_t, 6> keycodes{};

  std::array<std::uint8_t, 8> bytes() const;
  friend bool operator==(const HidReport&, const HidReport&) = default;
};

namespace modifier {
inline constexpr std::uint8_t kLeftCtrl = 0x01;
inline constexpr std::uint8_t kLeftShift = 0x02;
inline constexpr std::uint8_t kLeftAlt = 0x04;
}  // namespace modifier

HidReport hid_report_for_key(KeyId key);

/// One row of the key table file: index, label, modifier, usage ID.
struct KeyTableRow {
  int index = 0;
  std::string label;
  std::uint8_t modifier = 0;
  std::uint8_t usage = 0;
  friend bool operator==(const KeyTableRow&, const KeyTableRow&) = default;
};

std::vector<KeyTableRow> key_table();

/// Tab-separated text, '#' comments, one row per key.
void write_key_table(std::ostream& out);
/// Throws ParseError on malformed rows.
std::vector<KeyTableRow> read_key_table(std::istream& in);

}  // namespace emanakey
