#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "emanakey/edge_series.hpp"
#include "emanakey/frame.hpp"
#include "emanakey/keys.hpp"
#include "emanakey/probe.hpp"

namespace emanakey {

enum class ReferenceMethod : std::uint8_t { Analytic, WiredPipeline };

std::string_view to_string(ReferenceMethod m) noexcept;

struct ReferenceConfig {
  FrameConfig frame;
  PacketKind data_toggle = PacketKind::Data0;
  double probe_sample_rate = 250e6;
  ProbeConfig probe;
  WiredPipelineConfig wired;

  /// FNV-1a over the fields that shape the reference series.
  std::uint64_t hash() const;
};

/// One reference edge series per key, indexed by key index.
class ReferenceSet {
 public:
  ReferenceSet() = default;
  ReferenceSet(std::vector<EdgeSeries> entries, double bit_rate,
               ReferenceMethod method = ReferenceMethod::Analytic, std::uint64_t config_hash = 0);

  const EdgeSeries& at(KeyId key) const { return entries_.at(static_cast<std::size_t>(key.index())); }
  const std::vector<EdgeSeries>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  std::size_t max_length() const noexcept { return max_length_; }
  double bit_rate() const noexcept { return bit_rate_; }
  ReferenceMethod method() const noexcept { return method_; }
  std::uint64_t config_hash() const noexcept { return config_hash_; }

  /// Slots packed 64 per word, words_per_entry() words per key.
  std::span<const std::uint64_t> packed(std::size_t index) const {
    return {packed_.data() + index * words_, words_};
  }
  std::size_t words_per_entry() const noexcept { return words_; }

  /// Same series for every key; method and hash are provenance only.
  bool same_series(const ReferenceSet& other) const;

 private:
  std::vector<EdgeSeries> entries_;
  std::vector<std::uint64_t> packed_;
  std::size_t words_ = 0;
  std::size_t max_length_ = 0;
  double bit_rate_ = kFullSpeedBitRate;
  ReferenceMethod method_ = ReferenceMethod::Analytic;
  std::uint64_t config_hash_ = 0;
};

/// Packs slots 64 per word, slot k in bit (k % 64) of word k / 64.
std::vector<std::uint64_t> pack_slots(const EdgeSeries& s, std::size_t words);

ReferenceSet build_reference_set(ReferenceMethod method, const ReferenceConfig& config = {});

struct ClosestPair {
  KeyId a;
  KeyId b;
  std::size_t distance = 0;
};
/// Minimum pairwise Hamming distance over all key pairs, first pair in
/// index order on ties.
ClosestPair min_pairwise_distance(const ReferenceSet& refs);

void write_reference_file(const ReferenceSet& refs, std::ostream& out);
/// Writes to a sibling temporary file, then renames it over `path`.
void write_reference_file(const ReferenceSet& refs, const std::filesystem::path& path);
/// Throws FormatError, VersionMismatch or TruncatedFile.
ReferenceSet read_reference_file(std::istream& in);
ReferenceSet read_reference_file(const std::filesystem::path& path);

inline constexpr std::uint16_t kReferenceFileVersion = 1;

}  // namespace emanakey
