#pragma once

// Run settings for the command-line tool: built-in defaults, a flat-key JSON
// config file on top, then command-line flags on top of that.

#include <cstddef>
#include <cstdint>
#include <nlohmann/json.hpp>
#include <stdexcept>
#include <string>
#include <vector>

#include <beamforge/dataset.hpp>
#include <beamforge/evaluation.hpp>
#include <beamforge/nn.hpp>

namespace beamforge::cli {

/// Bad config file, unknown key or ill-typed value (exit status 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Settings {
    DesignConstraints constraints;
    SteelGrade grade;
    std::size_t catalog_count = 1000;
    ArrangementMode arrangement_mode = ArrangementMode::patterned;
    CheckOptions checks;
    int max_sweeps = 50;
    std::size_t max_cycle_period = 4;

    std::size_t k_max = 5;
    std::size_t dataset_count = 10000;
    std::uint64_t dataset_seed = 0;
    FilterBand band;
    std::size_t max_systems = 1'000'000;
    std::size_t block_size = 256;

    std::size_t izone_samples = 25;
    std::size_t izone_m = 17;
    std::uint64_t izone_seed = 0;

    NetworkConfig net;
    std::size_t metrics_every = 1;

    GridSpec study;

    std::size_t generalize_m_min = 1;
    std::size_t generalize_m_max = 20;
    std::size_t generalize_points = 1000;
    std::uint64_t generalize_seed = 0;
    std::size_t generalize_max_systems = 20'000;

    std::string disperse_partition = "test";

    std::vector<std::uint64_t> robust_seeds{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};

    std::size_t threads = 1;

    [[nodiscard]] DesignOptions design_options() const;
    [[nodiscard]] DatasetOptions dataset_options() const;
};

struct KeyInfo {
    std::string name;
    std::string type;
    std::string description;
};

/// Every accepted config key, in documentation order.
[[nodiscard]] const std::vector<KeyInfo>& config_keys();

/// Applies one key; throws ConfigError for unknown keys or bad values.
void apply_setting(Settings& s, const std::string& key, const nlohmann::json& value);

/// Applies every key of a JSON object file.
void apply_config_file(Settings& s, const std::string& path);

/// Current values of every key.
[[nodiscard]] nlohmann::ordered_json settings_json(const Settings& s);

}  // namespace beamforge::cli
