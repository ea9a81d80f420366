#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mrftrack/harness.hpp"
#include "mrftrack/simulator.hpp"

namespace mrftrack {

// JSON schema of the run configuration. Nested objects map to dotted keys
// (e.g. "motion.sigma_x"); every leaf can also be set from the command line
// as --motion.sigma_x. Unknown keys are rejected.

[[nodiscard]] nlohmann::json to_json(const ScenarioConfig& cfg);
[[nodiscard]] nlohmann::json to_json(const RunConfig& cfg);

/// Throws ConfigError listing every unknown key, type mismatch and violated
/// constraint.
[[nodiscard]] RunConfig run_config_from_json(const nlohmann::json& j);
[[nodiscard]] ScenarioConfig scenario_from_json(const nlohmann::json& j);
[[nodiscard]] CompareConfig compare_config_from_json(const nlohmann::json& j);

/// Reads a JSON file (IoError / ConfigError on failure).
[[nodiscard]] nlohmann::json load_json_file(const std::filesystem::path& path);

/// Scalar leaves of a JSON object as (dotted key, value); arrays and nulls
/// are skipped.
[[nodiscard]] std::vector<std::pair<std::string, nlohmann::json>> json_leaves(
    const nlohmann::json& j);

/// Every overridable leaf of a run configuration, with a value of the right
/// JSON type, as (dotted key, example value).
[[nodiscard]] std::vector<std::pair<std::string, nlohmann::json>> run_config_leaves();

/// Sets a dotted key from command-line text, converting to the type of
/// `example` (number, integer, boolean or string).
void set_dotted(nlohmann::json& j, std::string_view key, const std::string& text,
                const nlohmann::json& example);

} // namespace mrftrack
