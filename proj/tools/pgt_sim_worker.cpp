// Serves the simulated recognizer over the line-delimited JSON worker
// protocol, so the external backend can be exercised end to end.

#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "pgt/io.hpp"
#include "pgt/recognizer.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"Simulated recognition worker (stdin/stdout JSON lines)"};
    std::string scenes_path;
    pgt::NoiseModel noise;
    std::uint64_t seed = 0;
    app.add_option("--scenes", scenes_path, "scene JSONL")->required();
    app.add_option("--p-sub", noise.p_sub, "substitution probability")->check(CLI::Range(0.0, 1.0));
    app.add_option("--coverage-min", noise.coverage_min)->check(CLI::Range(0.0, 1.0));
    app.add_option("--pad-space-chars", noise.pad_space_chars);
    app.add_option("--vconf-floor", noise.vconf_floor)->check(CLI::Range(0.0, 1.0));
    app.add_option("--seed", seed, "noise seed");
    CLI11_PARSE(app, argc, argv);

    std::unique_ptr<pgt::SimulatedBackend> backend;
    try {
        backend = std::make_unique<pgt::SimulatedBackend>(pgt::load_scenes(scenes_path), noise, seed);
    } catch (const std::exception& e) {
        std::cerr << "pgt-sim-worker: " << e.what() << '\n';
        return 3;
    }

    std::ios::sync_with_stdio(false);
    for (std::string line; std::getline(std::cin, line);) {
        if (line.empty()) continue;
        nlohmann::json reply;
        try {
            const auto req = nlohmann::json::parse(line);
            std::vector<pgt::OrientedBox> boxes;
            for (const auto& b : req.at("boxes")) boxes.push_back(pgt::box_from_json(b));
            nlohmann::json results = nlohmann::json::array();
            for (const auto& r : backend->recognize_batch(req.at("image_id").get<std::string>(), boxes)) {
                results.push_back({{"text", r.text}, {"confidence", r.confidence}});
            }
            reply["results"] = std::move(results);
        } catch (const std::exception& e) {
            reply = {{"error", e.what()}};
        }
        std::cout << reply.dump() << '\n' << std::flush;
    }
    return 0;
}
