#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "emanakey/channel.hpp"

namespace emanakey {

/// Path gain of the open-space channel at `distance_m`; free-space 1/d
/// amplitude law anchored at the 3.8 m reference point.
double open_space_gain_db(double distance_m);

/// Through-wall settings add this much path gain at the same distance
/// because the attack succeeds out to a longer range.
inline constexpr double kOfficeOffsetDb = 12.041199826559248;    // 20 log10(12 / 3)
inline constexpr double kBuildingOffsetDb = 9.9214616968479;     // 20 log10(9.4 / 3)
inline constexpr double kReferenceNoiseDensity = 1e-5;           // V/sqrt(Hz)

ChannelPreset open_space_preset(double distance_m);
const std::vector<ChannelPreset>& builtin_presets();
std::optional<ChannelPreset> find_builtin_preset(std::string_view name);
std::string builtin_preset_names();

std::string preset_to_json(const ChannelPreset& preset, int indent = 2);
/// Throws ParseError on malformed JSON or InvalidArgument on bad fields.
ChannelPreset preset_from_json(std::string_view text);

/// A built-in preset name, or a path to a preset JSON file.
ChannelPreset load_preset(const std::string& name_or_path);

}  // namespace emanakey
