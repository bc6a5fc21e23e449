#include <algorithm>
#include <charconv>
#include <istream>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "emanakey/error.hpp"
#include "emanakey/trace_io.hpp"
#include "internal/binary.hpp"

namespace emanakey {

namespace {

using nlohmann::json;

constexpr const char* kColumns = "preset,gain_db,noise_density,key,repeats,correct,mean_score,mean_margin";

std::string canonical_config(const std::string& text) {
  if (text.empty()) return "{}";
  try {
    return json::parse(text).dump();
  } catch (const json::parse_error&) {
    throw InvalidArgument("report config is not valid JSON");
  }
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv(const std::string& line, std::size_t lineno) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else if (c != '\r') {
      fields.back() += c;
    }
  }
  if (quoted) throw ParseError(lineno, "unterminated quoted field");
  return fields;
}

template <typename T>
T parse_number(const std::string& s, std::size_t lineno) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError(lineno, "bad number '" + s + "'");
  }
  return v;
}

void write_csv(const SweepReport& r, std::ostream& out) {
  out << "# config: " << canonical_config(r.config) << '\n';
  out << kColumns << '\n';
  for (const auto& row : r.rows) {
    out << csv_field(row.preset) << ',' << format_double(row.gain_db) << ','
        << format_double(row.noise_density) << ',' << csv_field(row.key) << ',' << row.repeats << ','
        << row.correct << ',' << format_double(row.mean_score) << ','
        << format_double(row.mean_margin) << '\n';
  }
  for (const auto& a : r.aggregates()) {
    out << "# accuracy: " << csv_field(a.preset) << ',' << a.correct << '/' << a.trials << ','
        << format_double(a.accuracy()) << '\n';
  }
}

void write_json(const SweepReport& r, std::ostream& out) {
  json j;
  j["config"] = json::parse(canonical_config(r.config));
  j["rows"] = json::array();
  for (const auto& row : r.rows) {
    j["rows"].push_back({{"preset", row.preset},
                         {"gain_db", row.gain_db},
                         {"noise_density", row.noise_density},
                         {"key", row.key},
                         {"repeats", row.repeats},
                         {"correct", row.correct},
                         {"mean_score", row.mean_score},
                         {"mean_margin", row.mean_margin}});
  }
  j["aggregates"] = json::array();
  for (const auto& a : r.aggregates()) {
    j["aggregates"].push_back(
        {{"preset", a.preset}, {"trials", a.trials}, {"correct", a.correct}, {"accuracy", a.accuracy()}});
  }
  out << j.dump(2) << '\n';
}

SweepReport read_csv(std::istream& in) {
  SweepReport r;
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line.rfind("# config: ", 0) == 0) {
      r.config = canonical_config(line.substr(10));
      continue;
    }
    if (line[0] == '#') continue;
    if (!header) {
      if (line != kColumns && line != std::string(kColumns) + "\r") {
        throw ParseError(lineno, "unexpected report header");
      }
      header = true;
      continue;
    }
    const auto f = split_csv(line, lineno);
    if (f.size() != 8) throw ParseError(lineno, "expected 8 columns");
    SweepRow row;
    row.preset = f[0];
    row.gain_db = parse_number<double>(f[1], lineno);
    row.noise_density = parse_number<double>(f[2], lineno);
    row.key = f[3];
    row.repeats = parse_number<std::size_t>(f[4], lineno);
    row.correct = parse_number<std::size_t>(f[5], lineno);
    row.mean_score = parse_number<double>(f[6], lineno);
    row.mean_margin = parse_number<double>(f[7], lineno);
    r.rows.push_back(std::move(row));
  }
  if (!header) throw ParseError(lineno, "report has no column header");
  return r;
}

SweepReport read_json(std::istream& in) {
  SweepReport r;
  try {
    const auto j = json::parse(in);
    r.config = j.at("config").dump();
    for (const auto& row : j.at("rows")) {
      r.rows.push_back({row.at("preset").get<std::string>(), row.at("gain_db").get<double>(),
                        row.at("noise_density").get<double>(), row.at("key").get<std::string>(),
                        row.at("repeats").get<std::size_t>(), row.at("correct").get<std::size_t>(),
                        row.at("mean_score").get<double>(), row.at("mean_margin").get<double>()});
    }
  } catch (const json::exception& e) {
    throw ParseError(0, std::string("report JSON: ") + e.what());
  }
  return r;
}

}  // namespace

std::vector<PresetAccuracy> SweepReport::aggregates() const {
  std::vector<PresetAccuracy> out;
  for (const auto& row : rows) {
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& a) { return a.preset == row.preset; });
    if (it == out.end()) {
      out.push_back({row.preset, 0, 0});
      it = std::prev(out.end());
    }
    it->trials += row.repeats;
    it->correct += row.correct;
  }
  return out;
}

void write_report(const SweepReport& report, std::ostream& out, ReportFormat format) {
  if (report.rows.empty()) throw InvalidArgument("refusing to write an empty report");
  if (format == ReportFormat::Csv) write_csv(report, out);
  else write_json(report, out);
  if (!out) throw IoError("failed writing report");
}

void write_report(const SweepReport& report, const std::filesystem::path& path, ReportFormat format) {
  if (report.rows.empty()) throw InvalidArgument("refusing to write an empty report");
  detail::write_atomically(path, [&](std::ostream& out) { write_report(report, out, format); });
}

SweepReport read_report(std::istream& in, ReportFormat format) {
  return format == ReportFormat::Csv ? read_csv(in) : read_json(in);
}

}  // namespace emanakey
