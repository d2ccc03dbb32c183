#pragma once

// JSON scenario files: omega, the quality model (angle in degrees), the
// initial nodes (explicit or drawn from a seeded random layout) and the
// simulation settings.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "uavcov/sim.hpp"

namespace uavcov {

struct Scenario {
  std::string name;
  SwarmState state;
  SimConfig sim;
  std::string output_dir;
};

// Throws ParseError for malformed input and ValidationError (with the
// offending field) for values that violate a constraint. A seed overrides
// the one in the file; it only matters for random layouts.
Scenario parse_scenario_text(const std::string& text, const std::string& name,
                             std::optional<std::uint64_t> seed = std::nullopt);
Scenario parse_scenario(const std::filesystem::path& path,
                        std::optional<std::uint64_t> seed = std::nullopt);

// A path to an existing file, or the name of a bundled scenario
// ("case_study_1" or "case_study_1.json"). Throws IoError if neither exists.
std::filesystem::path resolve_scenario(const std::string& name_or_path);
std::filesystem::path bundled_scenario_dir();

}  // namespace uavcov
