#include "emanakey/presets.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "emanakey/error.hpp"

namespace emanakey {

namespace {

using nlohmann::json;

// Path gain at 3.8 m open space, set where the detector's accuracy first
// drops below 100% for kReferenceNoiseDensity. Closer presets then stay at
// 100% over a 70 x 10 sweep.
constexpr double kReferenceGainDb = 2.0;
constexpr double kReferenceDistance = 3.8;

std::vector<Interferer> urban_interferers() {
  return {
      {"fm-broadcast", 98e6, 20e6, 4e-3},
      {"mobile-740", 740e6, 10e6, 1e-3},
  };
}

ChannelPreset through_wall(std::string name, std::string description, double distance_m,
                           double offset_db) {
  ChannelPreset p;
  p.name = std::move(name);
  p.description = std::move(description);
  p.gain_db = open_space_gain_db(distance_m) + offset_db;
  p.noise_density = kReferenceNoiseDensity;
  p.interferers = urban_interferers();
  p.glitches.rate = 0.5;
  return p;
}

}  // namespace

double open_space_gain_db(double distance_m) {
  if (!(distance_m > 0.0)) throw InvalidArgument("distance must be positive");
  return kReferenceGainDb - 20.0 * std::log10(distance_m / kReferenceDistance);
}

ChannelPreset open_space_preset(double distance_m) {
  ChannelPreset p;
  std::ostringstream name;
  name << "open-space-" << distance_m << "m";
  p.name = name.str();
  p.description = "line of sight, free-space path loss";
  p.gain_db = open_space_gain_db(distance_m);
  p.noise_density = kReferenceNoiseDensity;
  return p;
}

const std::vector<ChannelPreset>& builtin_presets() {
  static const std::vector<ChannelPreset> presets = [] {
    std::vector<ChannelPreset> v;
    for (double d : {0.5, 2.5, 3.0, 3.8}) v.push_back(open_space_preset(d));
    // The offsets put both settings on the operating point of open space
    // at 3 m; interferers and glitches come on top.
    v.push_back(through_wall("office-12m", "office through a 14 cm wall, 12 m", 12.0, kOfficeOffsetDb));
    v.push_back(through_wall("building-9.4m", "across a building, 9.4 m", 9.4, kBuildingOffsetDb));
    return v;
  }();
  return presets;
}

std::optional<ChannelPreset> find_builtin_preset(std::string_view name) {
  for (const auto& p : builtin_presets()) {
    if (p.name == name) return p;
  }
  return std::nullopt;
}

std::string builtin_preset_names() {
  std::string out;
  for (const auto& p : builtin_presets()) {
    if (!out.empty()) out += ", ";
    out += p.name;
  }
  return out;
}

std::string preset_to_json(const ChannelPreset& p, int indent) {
  json j;
  j["name"] = p.name;
  j["description"] = p.description;
  j["gain_db"] = p.gain_db;
  j["noise_density_v_per_rthz"] = p.noise_density;
  j["interferers"] = json::array();
  for (const auto& i : p.interferers) {
    j["interferers"].push_back(
        {{"name", i.name}, {"center_hz", i.center_hz}, {"bandwidth_hz", i.bandwidth_hz}, {"power_v2", i.power}});
  }
  j["glitches"] = {{"rate_per_trace", p.glitches.rate},
                   {"amplitude_min", p.glitches.amplitude_min},
                   {"amplitude_max", p.glitches.amplitude_max}};
  j["body_coupling_gain"] = p.body_coupling_gain;
  j["shielding_db"] = p.shielding_db;
  j["seed"] = p.seed;
  return j.dump(indent);
}

ChannelPreset preset_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(0, std::string("preset JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError(0, "preset JSON must be an object");
  ChannelPreset p;
  try {
    p.name = j.value("name", "");
    p.description = j.value("description", "");
    p.gain_db = j.value("gain_db", 0.0);
    p.noise_density = j.value("noise_density_v_per_rthz", 0.0);
    for (const auto& i : j.value("interferers", json::array())) {
      p.interferers.push_back({i.value("name", ""), i.at("center_hz").get<double>(),
                               i.value("bandwidth_hz", 0.0), i.at("power_v2").get<double>()});
    }
    if (j.contains("glitches")) {
      const auto& g = j.at("glitches");
      p.glitches.rate = g.value("rate_per_trace", 0.0);
      p.glitches.amplitude_min = g.value("amplitude_min", p.glitches.amplitude_min);
      p.glitches.amplitude_max = g.value("amplitude_max", p.glitches.amplitude_max);
    }
    p.body_coupling_gain = j.value("body_coupling_gain", 1.0);
    p.shielding_db = j.value("shielding_db", 0.0);
    p.seed = j.value("seed", std::uint64_t{0});
  } catch (const json::exception& e) {
    throw ParseError(0, std::string("preset JSON field: ") + e.what());
  }
  p.validate();
  return p;
}

ChannelPreset load_preset(const std::string& name_or_path) {
  if (auto p = find_builtin_preset(name_or_path)) return *p;
  std::ifstream in(name_or_path);
  if (!in) {
    throw InvalidArgument("unknown preset '" + name_or_path +
                          "' (not a file; built-ins: " + builtin_preset_names() + ")");
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return preset_from_json(buf.str());
}

}  // namespace emanakey
