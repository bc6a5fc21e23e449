#include "emanakey/reference_set.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "emanakey/error.hpp"
#include "internal/binary.hpp"

namespace emanakey {

std::string_view to_string(ReferenceMethod m) noexcept {
  return m == ReferenceMethod::Analytic ? "analytic" : "wired";
}

std::uint64_t ReferenceConfig::hash() const {
  std::ostringstream s;
  s.precision(17);
  s << int{frame.address} << ' ' << int{frame.endpoint} << ' ' << frame.gap_bits << ' '
    << frame.include_sof << ' ' << frame.sof_frame_number << ' ' << frame.nak_polls << ' '
    << int{pid_code(data_toggle)} << ' ' << probe_sample_rate << ' ' << probe.high_volts << ' '
    << probe.rise_time << ' ' << wired.lowpass_pass_hz << ' ' << wired.lowpass_stop_hz << ' '
    << wired.stopband_db << ' ' << wired.threshold_fraction << ' ' << wired.min_separation_bits;
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s.str()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<std::uint64_t> pack_slots(const EdgeSeries& s, std::size_t words) {
  std::vector<std::uint64_t> out(words, 0);
  for (std::size_t k = 0; k < s.size() && k < words * 64; ++k) {
    if (s.slots[k]) out[k / 64] |= std::uint64_t{1} << (k % 64);
  }
  return out;
}

ReferenceSet::ReferenceSet(std::vector<EdgeSeries> entries, double bit_rate,
                           ReferenceMethod method, std::uint64_t config_hash)
    : entries_(std::move(entries)), bit_rate_(bit_rate), method_(method), config_hash_(config_hash) {
  if (!(bit_rate > 0.0)) throw InvalidArgument("reference bit rate must be positive");
  for (const auto& e : entries_) max_length_ = std::max(max_length_, e.size());
  words_ = std::max<std::size_t>(1, (max_length_ + 63) / 64);
  packed_.reserve(entries_.size() * words_);
  for (const auto& e : entries_) {
    const auto p = pack_slots(e, words_);
    packed_.insert(packed_.end(), p.begin(), p.end());
  }
}

bool ReferenceSet::same_series(const ReferenceSet& other) const {
  if (entries_.size() != other.entries_.size()) return false;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].slots != other.entries_[i].slots) return false;
  }
  return bit_rate_ == other.bit_rate_;
}

ReferenceSet build_reference_set(ReferenceMethod method, const ReferenceConfig& config) {
  std::vector<EdgeSeries> entries;
  entries.reserve(KeyId::kCount);
  double bit_rate = kFullSpeedBitRate;
  for (auto key : KeyId::all()) {
    const auto frame = build_keystroke_transaction(key, config.data_toggle, config.frame);
    bit_rate = frame.bit_rate;
    if (method == ReferenceMethod::Analytic) {
      entries.push_back(edges_analytic(frame));
    } else {
      const auto w = simulate_probed_waveform(frame, config.probe_sample_rate, config.probe);
      auto s = wired_pipeline_edges(w, frame.bit_width(), config.wired);
      s.origin = 0.0;
      entries.push_back(std::move(s));
    }
  }
  return ReferenceSet(std::move(entries), bit_rate, method, config.hash());
}

ClosestPair min_pairwise_distance(const ReferenceSet& refs) {
  if (refs.size() < 2) throw InvalidArgument("need at least two references");
  ClosestPair best{KeyId(0), KeyId(1), static_cast<std::size_t>(-1)};
  const auto& e = refs.entries();
  for (std::size_t i = 0; i < e.size(); ++i) {
    for (std::size_t j = i + 1; j < e.size(); ++j) {
      const auto d = hamming_distance(e[i], e[j]);
      if (d < best.distance) best = {KeyId(static_cast<int>(i)), KeyId(static_cast<int>(j)), d};
    }
  }
  return best;
}

void write_reference_file(const ReferenceSet& refs, std::ostream& out) {
  out.write("EMRF", 4);
  detail::put_le<std::uint16_t>(out, kReferenceFileVersion);
  detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(std::llround(refs.bit_rate())));
  detail::put_le<std::uint16_t>(out, static_cast<std::uint16_t>(refs.size()));
  for (std::size_t i = 0; i < refs.size(); ++i) {
    const auto& s = refs.entries()[i];
    detail::put_le<std::uint8_t>(out, static_cast<std::uint8_t>(i));
    detail::put_le<std::uint16_t>(out, static_cast<std::uint16_t>(s.size()));
    std::vector<char> bytes((s.size() + 7) / 8, 0);
    for (std::size_t k = 0; k < s.size(); ++k) {
      if (s.slots[k]) bytes[k / 8] = static_cast<char>(bytes[k / 8] | (0x80 >> (k % 8)));
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  }
  if (!out) throw IoError("failed writing reference file");
}

void write_reference_file(const ReferenceSet& refs, const std::filesystem::path& path) {
  detail::write_atomically(path, [&](std::ostream& out) { write_reference_file(refs, out); });
}

ReferenceSet read_reference_file(std::istream& in) {
  detail::expect_magic(in, "EMRF");
  const auto version = detail::get_le<std::uint16_t>(in, "header");
  if (version != kReferenceFileVersion) {
    throw VersionMismatch("reference file version " + std::to_string(version) +
                          ", expected " + std::to_string(kReferenceFileVersion));
  }
  const auto bit_rate = detail::get_le<std::uint32_t>(in, "header");
  const auto count = detail::get_le<std::uint16_t>(in, "header");
  if (count != KeyId::kCount) {
    throw FormatError("reference file holds " + std::to_string(count) + " entries, expected " +
                      std::to_string(KeyId::kCount));
  }
  if (bit_rate == 0) throw FormatError("reference file bit rate is zero");
  std::vector<EdgeSeries> entries(count);
  std::vector<bool> seen(count, false);
  for (std::size_t e = 0; e < count; ++e) {
    const auto key = detail::get_le<std::uint8_t>(in, "entry header");
    const auto n = detail::get_le<std::uint16_t>(in, "entry header");
    if (key >= count || seen[key]) {
      throw FormatError("reference file has invalid or repeated key index " + std::to_string(key));
    }
    seen[key] = true;
    std::vector<char> bytes((n + 7u) / 8u);
    detail::read_exact(in, bytes.data(), bytes.size(), "entry slots");
    auto& s = entries[key];
    s.bit_width = 1.0 / bit_rate;
    s.slots.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      s.slots[k] = (static_cast<unsigned char>(bytes[k / 8]) >> (7 - k % 8)) & 1u;
    }
  }
  return ReferenceSet(std::move(entries), bit_rate);
}

ReferenceSet read_reference_file(const std::filesystem::path& path) {
  auto in = detail::open_input(path);
  return read_reference_file(in);
}

}  // namespace emanakey
