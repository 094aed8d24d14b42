#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "pgt/neighbourhood.hpp"
#include "pgt/pipeline.hpp"
#include "pgt/recognizer.hpp"
#include "pgt/simulate.hpp"

namespace pgt {

/// Invalid configuration: unknown key, wrong type or out-of-range value.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct BackendConfig {
    enum class Kind { simulated, external };
    Kind kind = Kind::simulated;
    /// p_sub per iteration; the last entry repeats for later iterations.
    std::vector<double> noise_schedule{0.02};
    double coverage_min = 0.5;
    double pad_space_chars = 0.5;
    double vconf_floor = 0.5;
    std::vector<std::string> command;
    std::vector<std::string> env;
    std::size_t workers = 1;
    double timeout_s = 30.0;
};

struct PathsConfig {
    std::filesystem::path scenes;
    std::filesystem::path detections;
    std::filesystem::path annotations;
    std::filesystem::path out_dir;
};

struct RunConfig {
    std::uint64_t seed = 0;
    SearchConstants search;
    AcceptThresholds accept;
    BackendConfig backend;
    std::size_t parallelism = 1;
    int max_iters = 1;
    std::optional<std::size_t> stop_delta;
    bool rerecognize_detections = false;
    std::size_t k_max = kDefaultMaxK;
    bool emit_baselines = false;
    PathsConfig paths;
    SimulationConfig simulate;
};

struct ConfigKeyDoc {
    const char* key;
    const char* type;
    const char* description;
};

/// Every accepted configuration key.
const std::vector<ConfigKeyDoc>& config_keys();
std::string config_keys_help();

/// Parses a configuration document. Relative paths are resolved against
/// base_dir. Throws ConfigError.
RunConfig config_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});

/// Sets a dotted key (e.g. "search.c") in a configuration document. The value
/// is parsed as JSON, falling back to a plain string.
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// Reads a config file, applies overrides, then the PGT_SEED environment
/// variable, then an explicit seed. Throws IoError or ConfigError.
RunConfig load_config(const std::filesystem::path& path,
                      const std::vector<std::string>& overrides = {},
                      std::optional<std::uint64_t> seed = std::nullopt);

MiningOptions mining_options(const RunConfig& config);
NoiseModel noise_for_iteration(const BackendConfig& backend, int iteration);

/// Builds the per-iteration backend described by the configuration. The
/// simulated backend needs the scenes; the external one ignores them.
BackendFactory make_backend_factory(const RunConfig& config, std::vector<SceneSpec> scenes);

}  // namespace pgt
