#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "emanakey/channel.hpp"

namespace emanakey {

inline constexpr std::uint16_t kTraceFileVersion = 1;
/// Bytes before the first sample: magic, version, rate, channels, count.
inline constexpr std::size_t kTraceHeaderSize = 23;

/// Little-endian EMTR layout: header, f32 samples, then a u32 byte count
/// and a UTF-8 JSON block with ground truth, preset snapshot and seed.
void write_trace(const EmanationTrace& trace, std::ostream& out);
/// Writes to a sibling temporary file and renames it into place.
void write_trace(const EmanationTrace& trace, const std::filesystem::path& path);

/// Channel `channel` of a possibly interleaved file. Throws FormatError,
/// VersionMismatch or TruncatedFile.
EmanationTrace read_trace(std::istream& in, std::size_t channel = 0);
EmanationTrace read_trace(const std::filesystem::path& path, std::size_t channel = 0);

/// One sample per line; a non-numeric first line is taken as a header.
/// Blank lines are skipped. Throws ParseError citing the 1-based line.
EmanationTrace import_csv(std::istream& in, double sample_rate);
EmanationTrace import_csv(const std::filesystem::path& path, double sample_rate);

struct SweepRow {
  std::string preset;
  double gain_db = 0.0;
  double noise_density = 0.0;
  std::string key;
  std::size_t repeats = 0;
  std::size_t correct = 0;
  double mean_score = 0.0;
  double mean_margin = 0.0;

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

struct PresetAccuracy {
  std::string preset;
  std::size_t trials = 0;
  std::size_t correct = 0;
  double accuracy() const noexcept {
    return trials ? static_cast<double>(correct) / static_cast<double>(trials) : 0.0;
  }
  friend bool operator==(const PresetAccuracy&, const PresetAccuracy&) = default;
};

struct SweepReport {
  /// JSON text of the configuration that produced the rows.
  std::string config;
  std::vector<SweepRow> rows;

  /// Per preset, in order of first appearance.
  std::vector<PresetAccuracy> aggregates() const;
  friend bool operator==(const SweepReport&, const SweepReport&) = default;
};

enum class ReportFormat : std::uint8_t { Csv, Json };

/// Throws InvalidArgument on an empty report.
void write_report(const SweepReport& report, std::ostream& out, ReportFormat format);
void write_report(const SweepReport& report, const std::filesystem::path& path, ReportFormat format);
SweepReport read_report(std::istream& in, ReportFormat format);

}  // namespace emanakey
