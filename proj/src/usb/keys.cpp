#include "emanakey/keys.hpp"

#include <algorithm>
#include <cctype>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "emanakey/error.hpp"

namespace emanakey {
namespace {

struct KeyEntry {
  std::string_view label;
  std::uint8_t modifier;
  std::uint8_t usage;
};

// Usage IDs come from the HID Usage Tables, Keyboard/Keypad page (0x07):
//   0x04..0x1D  a..z
//   0x1E..0x26  1..9, 0x27 0
//   0x28 Return (ENTER), 0x2A Backspace, 0x2C Spacebar
//   0x36 Comma, 0x37 Period
// Modifier bits are byte 0 of the boot keyboard report: bit0 LeftCtrl,
// bit1 LeftShift, bit2 LeftAlt. Uppercase letters are the lowercase usage
// with LeftShift held.
constexpr std::array<KeyEntry, KeyId::kCount> kKeys = {{
    {"0", 0x00, 0x27}, {"1", 0x00, 0x1E}, {"2", 0x00, 0x1F}, {"3", 0x00, 0x20},
    {"4", 0x00, 0x21}, {"5", 0x00, 0x22}, {"6", 0x00, 0x23}, {"7", 0x00, 0x24},
    {"8", 0x00, 0x25}, {"9", 0x00, 0x26},
    {"a", 0x00, 0x04}, {"b", 0x00, 0x05}, {"c", 0x00, 0x06}, {"d", 0x00, 0x07},
    {"e", 0x00, 0x08}, {"f", 0x00, 0x09}, {"g", 0x00, 0x0A}, {"h", 0x00, 0x0B},
    {"i", 0x00, 0x0C}, {"j", 0x00, 0x0D}, {"k", 0x00, 0x0E}, {"l", 0x00, 0x0F},
    {"m", 0x00, 0x10}, {"n", 0x00, 0x11}, {"o", 0x00, 0x12}, {"p", 0x00, 0x13},
    {"q", 0x00, 0x14}, {"r", 0x00, 0x15}, {"s", 0x00, 0x16}, {"t", 0x00, 0x17},
    {"u", 0x00, 0x18}, {"v", 0x00, 0x19}, {"w", 0x00, 0x1A}, {"x", 0x00, 0x1B},
    {"y", 0x00, 0x1C}, {"z", 0x00, 0x1D},
    {"A", 0x02, 0x04}, {"B", 0x02, 0x05}, {"C", 0x02, 0x06}, {"D", 0x02, 0x07},
    {"E", 0x02, 0x08}, {"F", 0x02, 0x09}, {"G", 0x02, 0x0A}, {"H", 0x02, 0x0B},
    {"I", 0x02, 0x0C}, {"J", 0x02, 0x0D}, {"K", 0x02, 0x0E}, {"L", 0x02, 0x0F},
    {"M", 0x02, 0x10}, {"N", 0x02, 0x11}, {"O", 0x02, 0x12}, {"P", 0x02, 0x13},
    {"Q", 0x02, 0x14}, {"R", 0x02, 0x15}, {"S", 0x02, 0x16}, {"T", 0x02, 0x17},
    {"U", 0x02, 0x18}, {"V", 0x02, 0x19}, {"W", 0x02, 0x1A}, {"X", 0x02, 0x1B},
    {"Y", 0x02, 0x1C}, {"Z", 0x02, 0x1D},
    {".", 0x00, 0x37}, {",", 0x00, 0x36}, {"SPACE", 0x00, 0x2C},
    {"BACKSPACE", 0x00, 0x2A},
    // modifier-only keys: no usage in the keycode array
    {"CTRL", 0x01, 0x00}, {"ALT", 0x04, 0x00}, {"SHIFT", 0x02, 0x00},
    {"ENTER", 0x00, 0x28},
}};

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::toupper(static_cast<unsigned char>(x)) ==
                  std::toupper(static_cast<unsigned char>(y));
         });
}

}  // namespace

KeyId::KeyId(int index) : index_(index) {
  if (index < 0 || index >= kCount) {
    throw InvalidArgument("key index out of range: " + std::to_string(index));
  }
}

std::string_view KeyId::label() const noexcept { return kKeys[index_].label; }

std::optional<KeyId> KeyId::find(std::string_view label) {
  for (int i = 0; i < kCount; ++i) {
    if (kKeys[i].label == label) return KeyId(i);
  }
  if (label.size() > 1) {
    if (iequals(label, "PERIOD")) return find(".");
    if (iequals(label, "COMMA")) return find(",");
    for (int i = 0; i < kCount; ++i) {
      if (kKeys[i].label.size() > 1 && iequals(kKeys[i].label, label)) return KeyId(i);
    }
  }
  return std::nullopt;
}

KeyId KeyId::from_label(std::string_view label) {
  if (auto key = find(label)) return *key;
  throw InvalidArgument("unknown key '" + std::string(label) +
                        "'; valid keys: " + key_labels_joined());
}

const std::array<KeyId, KeyId::kCount>& KeyId::all() {
  static const auto keys = [] {
    std::array<KeyId, kCount> out;
    for (int i = 0; i < kCount; ++i) out[i] = KeyId(i);
    return out;
  }();
  return keys;
}

std::string key_labels_joined() {
  std::string out;
  for (const auto& k : kKeys) {
    if (!out.empty()) out += ',';
    out += k.label;
  }
  return out;
}

std::array<std::uint8_t, 8> HidReport::bytes() const {
  std::array<std::uint8_t, 8> out{};
  out[0] = modifier;
  out[1] = reserved;
  std::copy(keycodes.begin(), keycodes.end(), out.begin() + 2);
  return out;
}

HidReport hid_report_for_key(KeyId key) {
  const auto& e = kKeys[key.index()];
  HidReport r;
  r.modifier = e.modifier;
  r.keycodes[0] = e.usage;
  return r;
}

std::vector<KeyTableRow> key_table() {
  std::vector<KeyTableRow> rows;
  rows.reserve(KeyId::kCount);
  for (int i = 0; i < KeyId::kCount; ++i) {
    rows.push_back({i, std::string(kKeys[i].label), kKeys[i].modifier, kKeys[i].usage});
  }
  return rows;
}

void write_key_table(std::ostream& out) {
  out << "# HID Usage Tables, Keyboard/Keypad page 0x07; modifier = boot report byte 0\n";
  out << "# index\tlabel\tmodifier\tusage\n";
  for (const auto& row : key_table()) {
    std::ostringstream line;
    line << row.index << '\t' << row.label << '\t' << "0x" << std::hex
         << std::setw(2) << std::setfill('0') << int(row.modifier) << '\t' << "0x"
         << std::setw(2) << int(row.usage);
    out << line.str() << '\n';
  }
}

std::vector<KeyTableRow> read_key_table(std::istream& in) {
  std::vector<KeyTableRow> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    KeyTableRow row;
    std::string mod, usage;
    if (!(fields >> row.index >> row.label >> mod >> usage)) {
      throw ParseError(lineno, "expected: index label modifier usage");
    }
    try {
      row.modifier = static_cast<std::uint8_t>(std::stoul(mod, nullptr, 16));
      row.usage = static_cast<std::uint8_t>(std::stoul(usage, nullptr, 16));
    } catch (const std::exception&) {
      throw ParseError(lineno, "bad hex field");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace emanakey
