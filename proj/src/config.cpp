#include "pgt/config.hpp"

#include <cstdlib>
#include <map>
#include <sstream>

#include "pgt/external_backend.hpp"
#include "pgt/io.hpp"

namespace pgt {

using nlohmann::json;

const std::vector<ConfigKeyDoc>& config_keys()
{
    static const std::vector<ConfigKeyDoc> keys = {
        {"seed", "uint", "global seed; PGT_SEED overrides it"},
        {"search.c", "int", "max horizontal extension/shrink in characters (7)"},
        {"search.beta", "int", "top extension divisor (2)"},
        {"search.gamma", "int", "top shrink divisor (4)"},
        {"search.delta", "int", "horizontal units per character (4)"},
        {"search.kappa", "int", "vertical units per box height (4)"},
        {"search.o", "int", "max spread of the chosen side offset, in horizontal units (8)"},
        {"accept.theta", "number", "normalized distance bound for close accepts (0.35)"},
        {"accept.lambda", "uint", "close accepts need more than lambda characters (4)"},
        {"backend.kind", "string", "'simulated' or 'external'"},
        {"backend.noise_schedule", "number[]", "simulated p_sub per iteration; last entry repeats"},
        {"backend.coverage_min", "number", "simulated: covered fraction needed to read a character"},
        {"backend.pad_space_chars", "number", "simulated: slack in characters that reads as a space"},
        {"backend.vconf_floor", "number", "simulated: minimal covered fraction of the text height"},
        {"backend.command", "string[]", "external: worker command line"},
        {"backend.env", "string[]", "external: extra NAME=value environment entries"},
        {"backend.workers", "uint", "external: number of worker processes (1)"},
        {"backend.timeout_s", "number", "external: seconds to wait for one batch (30)"},
        {"pipeline.parallelism", "uint", "images mined concurrently (1)"},
        {"pipeline.max_iters", "uint", "mining iterations (1)"},
        {"pipeline.stop_delta", "uint|null", "stop when mined count grows less; null = 1% of previous"},
        {"pipeline.rerecognize_detections", "bool", "re-read detection boxes with each iteration's backend"},
        {"pipeline.k_max", "uint", "longest k-gram in words (5)"},
        {"pipeline.emit_baselines", "bool", "also write exact-match baseline PGT per iteration"},
        {"paths.scenes", "path", "scene JSONL (simulated backend, simulate output)"},
        {"paths.detections", "path", "detections JSONL"},
        {"paths.annotations", "path", "weak annotation JSONL"},
        {"paths.out_dir", "path", "directory for PGT, stats and reports"},
        {"simulate.n_scenes", "uint", "number of scenes (500)"},
        {"simulate.instances_min", "uint", "fewest text instances per scene (2)"},
        {"simulate.instances_max", "uint", "most text instances per scene (4)"},
        {"simulate.image_width", "number", "scene width in pixels (1024)"},
        {"simulate.image_height", "number", "scene height in pixels (768)"},
        {"simulate.char_width_min", "number", "smallest character width in pixels (8)"},
        {"simulate.char_width_max", "number", "largest character width in pixels (16)"},
        {"simulate.max_angle_deg", "number", "largest absolute text angle in degrees (10)"},
        {"simulate.h_jitter_chars", "number", "left/right edge jitter in characters (2)"},
        {"simulate.v_jitter_frac", "number", "top/bottom edge jitter as a fraction of h (0.25)"},
        {"simulate.drop_prob", "number", "probability that an instance is not detected (0)"},
        {"simulate.p_sub", "number", "substitution noise of the detection transcriptions (0.02)"},
        {"simulate.false_positive_prob", "number", "probability of one background detection per scene (0.5)"},
        {"simulate.missing_annotation_prob", "number", "probability that an instance lacks a weak text (0.05)"},
        {"simulate.distractor_texts", "uint", "weak texts absent from the scene (1)"},
        {"simulate.multiword_prob", "number", "probability of a two-word instance (0.15)"},
        {"simulate.group_texts_prob", "number", "probability of merging a weak text into the previous (0.2)"},
        {"simulate.unreadable_prob", "number", "probability of a '**' word in a weak text (0.05)"},
        {"simulate.stopword_prob", "number", "probability of a leading 'the' in a weak text (0.05)"},
        {"simulate.capitalize_prob", "number", "probability of capitalizing an instance word (0.3)"},
        {"simulate.words_file", "path", "word list, one word per line (built-in list if absent)"},
    };
    return keys;
}

std::string config_keys_help()
{
    std::ostringstream out;
    out << "Configuration keys (JSON, dotted paths):\n";
    for (const auto& k : config_keys()) {
        out << "  " << k.key << " <" << k.type << ">  " << k.description << '\n';
    }
    return out.str();
}

namespace {

void flatten(const json& j, const std::string& prefix, std::map<std::string, json>& out)
{
    if (j.is_object() && (prefix.empty() || !j.empty())) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
        }
        return;
    }
    out[prefix] = j;
}

bool type_matches(const std::string& type, const json& v)
{
    if (type == "int") return v.is_number_integer();
    if (type == "uint") return v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0);
    if (type == "uint|null") return v.is_null() || type_matches("uint", v);
    if (type == "number") return v.is_number();
    if (type == "bool") return v.is_boolean();
    if (type == "string" || type == "path") return v.is_string();
    if (type == "number[]") {
        if (!v.is_array()) return false;
        for (const auto& e : v) {
            if (!e.is_number()) return false;
        }
        return true;
    }
    if (type == "string[]") {
        if (!v.is_array()) return false;
        for (const auto& e : v) {
            if (!e.is_string()) return false;
        }
        return true;
    }
    return false;
}

void require(bool ok, const std::string& message)
{
    if (!ok) throw ConfigError(message);
}

void require_probability(double p, const char* key)
{
    require(p >= 0.0 && p <= 1.0, std::string(key) + " must lie in [0, 1]");
}

}  // namespace

RunConfig config_from_json(const json& doc, const std::filesystem::path& base_dir)
{
    if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");

    std::map<std::string, json> leaves;
    flatten(doc, "", leaves);
    std::map<std::string, std::string> types;
    for (const auto& k : config_keys()) types[k.key] = k.type;
    for (const auto& [key, value] : leaves) {
        auto it = types.find(key);
        if (it == types.end()) throw ConfigError("unknown config key '" + key + "'");
        if (!type_matches(it->second, value)) {
            throw ConfigError("config key '" + key + "' must be of type " + it->second);
        }
    }

    auto has = [&](const char* k) { return leaves.contains(k); };
    auto get = [&]<class T>(const char* k, T& dst) {
        if (has(k)) dst = leaves.at(k).get<T>();
    };
    auto path = [&](const char* k, std::filesystem::path& dst) {
        if (!has(k)) return;
        std::filesystem::path p = leaves.at(k).get<std::string>();
        dst = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
    };

    RunConfig c;
    get("seed", c.seed);
    get("search.c", c.search.c);
    get("search.beta", c.search.beta);
    get("search.gamma", c.search.gamma);
    get("search.delta", c.search.delta);
    get("search.kappa", c.search.kappa);
    get("search.o", c.search.o);
    get("accept.theta", c.accept.theta);
    get("accept.lambda", c.accept.lambda);

    std::string kind = "simulated";
    get("backend.kind", kind);
    if (kind == "simulated") {
        c.backend.kind = BackendConfig::Kind::simulated;
    } else if (kind == "external") {
        c.backend.kind = BackendConfig::Kind::external;
    } else {
        throw ConfigError("backend.kind must be 'simulated' or 'external'");
    }
    get("backend.noise_schedule", c.backend.noise_schedule);
    get("backend.coverage_min", c.backend.coverage_min);
    get("backend.pad_space_chars", c.backend.pad_space_chars);
    get("backend.vconf_floor", c.backend.vconf_floor);
    get("backend.command", c.backend.command);
    get("backend.env", c.backend.env);
    get("backend.workers", c.backend.workers);
    get("backend.timeout_s", c.backend.timeout_s);

    get("pipeline.parallelism", c.parallelism);
    get("pipeline.max_iters", c.max_iters);
    if (has("pipeline.stop_delta") && !leaves.at("pipeline.stop_delta").is_null()) {
        c.stop_delta = leaves.at("pipeline.stop_delta").get<std::size_t>();
    }
    get("pipeline.rerecognize_detections", c.rerecognize_detections);
    get("pipeline.k_max", c.k_max);
    get("pipeline.emit_baselines", c.emit_baselines);

    path("paths.scenes", c.paths.scenes);
    path("paths.detections", c.paths.detections);
    path("paths.annotations", c.paths.annotations);
    path("paths.out_dir", c.paths.out_dir);

    auto& s = c.simulate;
    get("simulate.n_scenes", s.n_scenes);
    get("simulate.instances_min", s.instances_min);
    get("simulate.instances_max", s.instances_max);
    get("simulate.image_width", s.image_width);
    get("simulate.image_height", s.image_height);
    get("simulate.char_width_min", s.char_width_min);
    get("simulate.char_width_max", s.char_width_max);
    get("simulate.max_angle_deg", s.max_angle_deg);
    get("simulate.h_jitter_chars", s.h_jitter_chars);
    get("simulate.v_jitter_frac", s.v_jitter_frac);
    get("simulate.drop_prob", s.drop_prob);
    get("simulate.p_sub", s.p_sub);
    get("simulate.false_positive_prob", s.false_positive_prob);
    get("simulate.missing_annotation_prob", s.missing_annotation_prob);
    get("simulate.distractor_texts", s.distractor_texts);
    get("simulate.multiword_prob", s.multiword_prob);
    get("simulate.group_texts_prob", s.group_texts_prob);
    get("simulate.unreadable_prob", s.unreadable_prob);
    get("simulate.stopword_prob", s.stopword_prob);
    get("simulate.capitalize_prob", s.capitalize_prob);
    s.seed = c.seed;
    s.noise.coverage_min = c.backend.coverage_min;
    s.noise.pad_space_chars = c.backend.pad_space_chars;
    s.noise.vconf_floor = c.backend.vconf_floor;
    if (has("simulate.words_file")) {
        std::filesystem::path words_file;
        path("simulate.words_file", words_file);
        std::istringstream in(read_text_file(words_file));
        for (std::string w; in >> w;) s.words.push_back(w);
        require(!s.words.empty(), "simulate.words_file contains no words");
    }

    try {
        c.search.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    require(c.accept.theta > 0.0 && c.accept.theta <= 1.0, "accept.theta must lie in (0, 1]");
    require(!c.backend.noise_schedule.empty(), "backend.noise_schedule must not be empty");
    for (double p : c.backend.noise_schedule) require_probability(p, "backend.noise_schedule");
    require_probability(c.backend.coverage_min, "backend.coverage_min");
    require_probability(c.backend.vconf_floor, "backend.vconf_floor");
    require(c.backend.pad_space_chars >= 0.0, "backend.pad_space_chars must be non-negative");
    require(c.backend.workers >= 1, "backend.workers must be at least 1");
    require(c.backend.timeout_s > 0.0, "backend.timeout_s must be positive");
    if (c.backend.kind == BackendConfig::Kind::external) {
        require(!c.backend.command.empty(), "backend.command is required for the external backend");
    }
    require(c.parallelism >= 1, "pipeline.parallelism must be at least 1");
    require(c.max_iters >= 1, "pipeline.max_iters must be at least 1");
    require(c.k_max >= 1, "pipeline.k_max must be at least 1");
    require(s.instances_min <= s.instances_max, "simulate.instances_min exceeds instances_max");
    require(s.image_width > 0 && s.image_height > 0, "simulate image size must be positive");
    require(s.char_width_min > 0 && s.char_width_min <= s.char_width_max,
            "simulate character widths must satisfy 0 < min <= max");
    for (auto [p, key] : {std::pair{s.drop_prob, "simulate.drop_prob"},
                          std::pair{s.p_sub, "simulate.p_sub"},
                          std::pair{s.false_positive_prob, "simulate.false_positive_prob"},
                          std::pair{s.missing_annotation_prob, "simulate.missing_annotation_prob"},
                          std::pair{s.multiword_prob, "simulate.multiword_prob"},
                          std::pair{s.group_texts_prob, "simulate.group_texts_prob"},
                          std::pair{s.unreadable_prob, "simulate.unreadable_prob"},
                          std::pair{s.stopword_prob, "simulate.stopword_prob"},
                          std::pair{s.capitalize_prob, "simulate.capitalize_prob"}}) {
        require_probability(p, key);
    }
    return c;
}

void apply_override(json& doc, const std::string& assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ConfigError("override must look like key=value: '" + assignment + "'");
    }
    const std::string key = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);
    json value;
    try {
        value = json::parse(raw);
    } catch (const json::parse_error&) {
        value = raw;
    }
    json* node = &doc;
    std::size_t start = 0;
    for (;;) {
        const auto dot = key.find('.', start);
        const std::string part = key.substr(start, dot == std::string::npos ? dot : dot - start);
        if (part.empty()) throw ConfigError("malformed override key '" + key + "'");
        if (!node->is_object()) throw ConfigError("override key '" + key + "' crosses a non-object");
        if (dot == std::string::npos) {
            (*node)[part] = value;
            return;
        }
        node = &(*node)[part];
        if (node->is_null()) *node = json::object();
        start = dot + 1;
    }
}

RunConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides,
                      std::optional<std::uint64_t> seed)
{
    json doc;
    try {
        doc = read_json_file(path);
    } catch (const FormatError& e) {
        throw ConfigError(e.what());
    }
    if (!doc.is_object()) throw ConfigError(path.string() + ": configuration must be a JSON object");
    for (const auto& o : overrides) apply_override(doc, o);
    if (const char* env = std::getenv("PGT_SEED"); env != nullptr && *env != '\0') {
        try {
            std::size_t used = 0;
            const unsigned long long v = std::stoull(env, &used);
            if (used != std::string(env).size()) throw std::invalid_argument("trailing characters");
            doc["seed"] = v;
        } catch (const std::exception&) {
            throw ConfigError(std::string("PGT_SEED is not an unsigned integer: '") + env + "'");
        }
    }
    if (seed) doc["seed"] = *seed;
    return config_from_json(doc, path.parent_path());
}

MiningOptions mining_options(const RunConfig& config)
{
    MiningOptions o;
    o.seed = config.seed;
    o.consts = config.search;
    o.thresholds = config.accept;
    o.k_max = config.k_max;
    o.parallelism = config.parallelism;
    o.max_iters = config.max_iters;
    o.stop_delta = config.stop_delta;
    o.rerecognize_detections = config.rerecognize_detections;
    return o;
}

NoiseModel noise_for_iteration(const BackendConfig& backend, int iteration)
{
    NoiseModel n;
    const auto& sched = backend.noise_schedule;
    const std::size_t idx =
        std::min(sched.size() - 1, static_cast<std::size_t>(std::max(1, iteration) - 1));
    n.p_sub = sched[idx];
    n.coverage_min = backend.coverage_min;
    n.pad_space_chars = backend.pad_space_chars;
    n.vconf_floor = backend.vconf_floor;
    return n;
}

BackendFactory make_backend_factory(const RunConfig& config, std::vector<SceneSpec> scenes)
{
    if (config.backend.kind == BackendConfig::Kind::external) {
        ExternalBackendOptions opts;
        opts.command = config.backend.command;
        opts.env = config.backend.env;
        opts.workers = config.backend.workers;
        opts.timeout = std::chrono::milliseconds(
            static_cast<long long>(config.backend.timeout_s * 1000.0));
        auto backend = std::make_shared<ExternalBackend>(std::move(opts));
        return [backend](int) { return backend; };
    }

    auto shared_scenes = std::make_shared<const std::vector<SceneSpec>>(std::move(scenes));
    const BackendConfig backend = config.backend;
    const std::uint64_t seed = derive_seed(config.seed, "backend");
    return [shared_scenes, backend, seed](int iteration) -> std::shared_ptr<RecognitionBackend> {
        return std::make_shared<SimulatedBackend>(*shared_scenes,
                                                  noise_for_iteration(backend, iteration), seed);
    };
}

}  // namespace pgt
