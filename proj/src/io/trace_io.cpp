#include "emanakey/trace_io.hpp"

#include <charconv>
#include <cmath>
#include <cstring>
#include <istream>
#include <json.hpp>
#include <limits>
#include <ostream>

#include "emanakey/error.hpp"
#include "emanakey/presets.hpp"
#include "internal/binary.hpp"

namespace emanakey {

namespace {

using nlohmann::json;

std::string metadata_json(const EmanationTrace& t) {
  json j;
  j["ground_truth"] = t.ground_truth ? json(std::string(t.ground_truth->label())) : json(nullptr);
  j["preset"] = t.preset ? json::parse(preset_to_json(*t.preset, -1)) : json(nullptr);
  j["seed"] = t.seed ? json(*t.seed) : json(nullptr);
  return j.dump();
}

void apply_metadata(EmanationTrace& t, const std::string& text) {
  json j;
  try {
    j = json::parse(text);
    if (!j.is_object()) throw FormatError("trace metadata is not a JSON object");
    if (j.contains("ground_truth") && !j["ground_truth"].is_null()) {
      const auto label = j["ground_truth"].get<std::string>();
      const auto key = KeyId::find(label);
      if (!key) throw FormatError("trace metadata names unknown key '" + label + "'");
      t.ground_truth = *key;
    }
    if (j.contains("preset") && !j["preset"].is_null()) {
      t.preset = preset_from_json(j["preset"].dump());
    }
    if (j.contains("seed") && !j["seed"].is_null()) t.seed = j["seed"].get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("trace metadata: ") + e.what());
  } catch (const ParseError& e) {
    throw FormatError(std::string("trace metadata: ") + e.what());
  }
}

}  // namespace

void write_trace(const EmanationTrace& trace, std::ostream& out) {
  if (!(trace.sample_rate > 0.0) || trace.sample_rate != std::floor(trace.sample_rate)) {
    throw InvalidArgument("trace files store an integral, positive sample rate");
  }
  out.write("EMTR", 4);
  detail::put_le<std::uint16_t>(out, kTraceFileVersion);
  detail::put_le<std::uint64_t>(out, static_cast<std::uint64_t>(trace.sample_rate));
  detail::put_le<std::uint8_t>(out, 1);
  detail::put_le<std::uint64_t>(out, trace.samples.size());
  std::vector<char> buf(trace.samples.size() * 4);
  for (std::size_t i = 0; i < trace.samples.size(); ++i) {
    std::uint32_t bits;
    std::memcpy(&bits, &trace.samples[i], 4);
    for (int b = 0; b < 4; ++b) buf[i * 4 + b] = static_cast<char>((bits >> (8 * b)) & 0xFF);
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  const auto meta = metadata_json(trace);
  detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(meta.size()));
  out.write(meta.data(), static_cast<std::streamsize>(meta.size()));
  if (!out) throw IoError("failed writing trace");
}

void write_trace(const EmanationTrace& trace, const std::filesystem::path& path) {
  detail::write_atomically(path, [&](std::ostream& out) { write_trace(trace, out); });
}

EmanationTrace read_trace(std::istream& in, std::size_t channel) {
  detail::expect_magic(in, "EMTR");
  const auto version = detail::get_le<std::uint16_t>(in, "header");
  if (version != kTraceFileVersion) {
    throw VersionMismatch("trace file version " + std::to_string(version) + ", expected " +
                          std::to_string(kTraceFileVersion));
  }
  const auto rate = detail::get_le<std::uint64_t>(in, "header");
  const auto channels = detail::get_le<std::uint8_t>(in, "header");
  const auto count = detail::get_le<std::uint64_t>(in, "header");
  if (rate == 0) throw FormatError("trace sample rate is zero");
  if (channels == 0) throw FormatError("trace has zero channels");
  if (channel >= channels) {
    throw InvalidArgument("trace has " + std::to_string(channels) + " channel(s), requested " +
                          std::to_string(channel));
  }

  EmanationTrace t;
  t.sample_rate = static_cast<double>(rate);
  // Read in bounded chunks so a corrupt count cannot force a huge allocation.
  constexpr std::uint64_t kChunkFrames = 1 << 16;
  std::vector<char> buf;
  for (std::uint64_t done = 0; done < count;) {
    const auto frames = std::min(kChunkFrames, count - done);
    buf.resize(frames * channels * 4);
    detail::read_exact(in, buf.data(), buf.size(), "sample payload");
    for (std::uint64_t f = 0; f < frames; ++f) {
      const auto* p = reinterpret_cast<const unsigned char*>(buf.data()) + (f * channels + channel) * 4;
      const std::uint32_t bits = p[0] | (p[1] << 8) | (p[2] << 16) | (std::uint32_t{p[3]} << 24);
      float v;
      std::memcpy(&v, &bits, 4);
      t.samples.push_back(v);
    }
    done += frames;
  }
  const auto meta_len = detail::get_le<std::uint32_t>(in, "metadata length");
  std::string meta(meta_len, '\0');
  detail::read_exact(in, meta.data(), meta.size(), "metadata");
  apply_metadata(t, meta);
  return t;
}

EmanationTrace read_trace(const std::filesystem::path& path, std::size_t channel) {
  auto in = detail::open_input(path);
  return read_trace(in, channel);
}

EmanationTrace import_csv(std::istream& in, double sample_rate) {
  if (!(sample_rate > 0.0)) throw InvalidArgument("sample rate must be positive");
  EmanationTrace t;
  t.sample_rate = sample_rate;
  std::string line;
  std::size_t lineno = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++lineno;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto last = line.find_last_not_of(" \t\r");
    const std::string_view field(line.data() + first, last - first + 1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(v)) {
      if (first_content) {
        first_content = false;  // header
        continue;
      }
      throw ParseError(lineno, "not a number: '" + std::string(field) + "'");
    }
    first_content = false;
    t.samples.push_back(static_cast<float>(v));
  }
  return t;
}

EmanationTrace import_csv(const std::filesystem::path& path, double sample_rate) {
  auto in = detail::open_input(path);
  return import_csv(in, sample_rate);
}

}  // namespace emanakey
