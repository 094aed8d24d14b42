#include "pgt/cli.hpp"

#include <algorithm>
#include <iostream>

#include <CLI11.hpp>

#include "pgt/detector_post.hpp"
#include "pgt/io.hpp"
#include "pgt/metrics.hpp"

namespace pgt::cli {

namespace {

template <class Fn>
int guarded(std::ostream& err, Fn&& fn)
{
    try {
        return fn();
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << '\n';
        return kExitIo;
    } catch (const FormatError& e) {
        err << "input error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

void require_path(const std::filesystem::path& p, const char* key)
{
    if (p.empty()) throw ConfigError(std::string(key) + " is required");
}

std::filesystem::path iteration_file(const std::filesystem::path& dir, const char* stem, int it)
{
    return dir / (std::string(stem) + std::to_string(it) + ".jsonl");
}

}  // namespace

int simulate(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        require_path(config.paths.scenes, "paths.scenes");
        require_path(config.paths.detections, "paths.detections");
        require_path(config.paths.annotations, "paths.annotations");

        const SimCorpus corpus = simulate_corpus(config.simulate);
        std::vector<nlohmann::json> scenes, dets, anns;
        std::size_t instances = 0;
        std::size_t detections = 0;
        for (const auto& s : corpus.scenes) {
            scenes.push_back(scene_to_json(s));
            instances += s.instances.size();
        }
        for (const auto& d : corpus.detections) {
            dets.push_back(image_detections_to_json(d));
            detections += d.detections.size();
        }
        for (const auto& a : corpus.annotations) anns.push_back(annotations_to_json(a));
        write_jsonl(config.paths.scenes, scenes);
        write_jsonl(config.paths.detections, dets);
        write_jsonl(config.paths.annotations, anns);

        out << "simulated " << corpus.scenes.size() << " scenes, " << instances << " instances, "
            << detections << " detections\n";
        return kExitOk;
    });
}

int mine(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        require_path(config.paths.detections, "paths.detections");
        require_path(config.paths.annotations, "paths.annotations");
        require_path(config.paths.out_dir, "paths.out_dir");
        if (config.backend.kind == BackendConfig::Kind::simulated) {
            require_path(config.paths.scenes, "paths.scenes");
        }

        const auto detections = load_detections(config.paths.detections);
        const auto annotations = load_annotations(config.paths.annotations);
        std::vector<SceneSpec> scenes;
        if (config.backend.kind == BackendConfig::Kind::simulated) {
            scenes = load_scenes(config.paths.scenes);
        }
        const Dataset dataset = make_dataset(detections, annotations);

        MiningOptions options = mining_options(config);
        options.log = [&err](const std::string& line) { err << line << '\n'; };
        const MiningResult result =
            mine_iterations(dataset, make_backend_factory(config, std::move(scenes)), options);

        std::filesystem::create_directories(config.paths.out_dir);
        for (std::size_t i = 0; i < result.pgt.size(); ++i) {
            const int it = static_cast<int>(i) + 1;
            save_pgt(iteration_file(config.paths.out_dir, "pgt_iter", it), result.pgt[i]);
            if (config.emit_baselines) {
                save_pgt(iteration_file(config.paths.out_dir, "baseline_exact_iter", it),
                         result.baseline[i]);
            }
        }
        nlohmann::json stats_json = mining_stats_to_json(result.stats);
        stats_json["report"] = iteration_report_json(result.stats);
        write_text_file(config.paths.out_dir / "stats.json", stats_json.dump(2) + "\n");
        const std::string table = iteration_report_table(result.stats);
        write_text_file(config.paths.out_dir / "report.txt", table);
        out << table;
        if (!result.stats.failures.empty()) {
            out << result.stats.failures.size() << " image(s) failed; see stats.json\n";
        }
        return kExitOk;
    });
}

int eval(const EvalOptions& options, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        const auto pgt = load_pgt(options.pgt);
        const auto scenes = load_scenes(options.scenes);
        std::vector<ManualLabel> manual;
        if (options.manual) manual = load_manual_labels(*options.manual);
        const ErrorReport report = classify_errors(pgt, scenes, options.iou_min, manual);
        out << error_report_table(report);
        if (options.json_out) {
            write_text_file(*options.json_out, error_report_to_json(report).dump(2) + "\n");
        }
        return kExitOk;
    });
}

int boxes_from_maps(const MapsOptions& options, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        if (!std::filesystem::is_directory(options.maps_dir)) {
            throw IoError("not a directory: " + options.maps_dir.string());
        }
        std::vector<std::filesystem::path> sidecars;
        for (const auto& entry : std::filesystem::directory_iterator(options.maps_dir)) {
            if (entry.is_regular_file() && entry.path().extension() == ".json") {
                sidecars.push_back(entry.path());
            }
        }
        std::sort(sidecars.begin(), sidecars.end());

        std::vector<nlohmann::json> rows;
        std::size_t total = 0;
        for (const auto& sidecar : sidecars) {
            const PredictionMaps maps = read_maps(sidecar);
            ImageDetections rec;
            rec.image_id = sidecar.stem().string();
            rec.size = ImageSize{double(maps.width), double(maps.height)};
            for (const auto& box : boxes_from_maps(maps, options.thr_tr, options.thr_tcl)) {
                rec.detections.push_back({box, "", 0.0});
            }
            total += rec.detections.size();
            rows.push_back(image_detections_to_json(rec));
        }
        write_jsonl(options.out, rows);
        out << "wrote " << total << " boxes from " << sidecars.size() << " map dump(s)\n";
        return kExitOk;
    });
}

int stats(const std::filesystem::path& stats_file, bool as_json, std::ostream& out,
          std::ostream& err)
{
    return guarded(err, [&] {
        const nlohmann::json doc = read_json_file(stats_file);
        MiningStats s;
        try {
            s = mining_stats_from_json(doc);
        } catch (const nlohmann::json::exception& e) {
            throw FormatError(stats_file.string() + ": " + e.what());
        }
        if (as_json) {
            out << iteration_report_json(s).dump(2) << '\n';
        } else {
            out << iteration_report_table(s);
        }
        return kExitOk;
    });
}

int run(int argc, char** argv)
{
    CLI::App app{"Pseudo ground truth mining from weakly annotated images"};
    app.require_subcommand(1);

    std::filesystem::path config_path;
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> parallelism;

    auto add_config_options = [&](CLI::App* sub) {
        sub->add_option("-c,--config", config_path, "JSON configuration file")->required();
        sub->add_option("--set", overrides, "override a config key, e.g. --set search.c=5");
        sub->add_option("--seed", seed, "override the seed (after PGT_SEED)");
        sub->footer(config_keys_help());
    };

    auto* sim_cmd = app.add_subcommand("simulate", "generate a synthetic scene corpus");
    add_config_options(sim_cmd);

    auto* mine_cmd = app.add_subcommand("mine", "mine PGT from detections and weak annotations");
    add_config_options(mine_cmd);
    mine_cmd->add_option("-j,--parallelism", parallelism, "images mined concurrently");

    EvalOptions eval_opts;
    auto* eval_cmd = app.add_subcommand("eval", "classify PGT errors against scene ground truth");
    eval_cmd->add_option("--pgt", eval_opts.pgt, "PGT JSONL")->required();
    eval_cmd->add_option("--scenes", eval_opts.scenes, "scene JSONL")->required();
    eval_cmd->add_option("--manual", eval_opts.manual, "manual error annotations JSONL");
    eval_cmd->add_option("--json", eval_opts.json_out, "write the report as JSON");
    eval_cmd->add_option("--iou-min", eval_opts.iou_min, "IoU below which a record is not text")
        ->check(CLI::Range(0.0, 1.0));

    MapsOptions maps_opts;
    auto* maps_cmd = app.add_subcommand("boxes-from-maps", "fit oriented boxes to prediction maps");
    maps_cmd->add_option("--maps", maps_opts.maps_dir, "directory of <id>.json + <id>.bin dumps")
        ->required();
    maps_cmd->add_option("-o,--out", maps_opts.out, "detections JSONL to write")->required();
    maps_cmd->add_option("--tr", maps_opts.thr_tr, "text region threshold")->check(CLI::Range(0.0, 1.0));
    maps_cmd->add_option("--tcl", maps_opts.thr_tcl, "center line threshold")->check(CLI::Range(0.0, 1.0));

    std::filesystem::path stats_path;
    bool stats_json = false;
    auto* stats_cmd = app.add_subcommand("stats", "print the per-iteration mining table");
    stats_cmd->add_option("stats_file", stats_path, "stats.json written by mine")->required();
    stats_cmd->add_flag("--json", stats_json, "print JSON instead of a table");

    // Set last: subcommands inherit the footer present when they are created.
    app.footer(config_keys_help());

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    auto load = [&]() { return load_config(config_path, overrides, seed); };

    if (sim_cmd->parsed()) {
        RunConfig cfg;
        if (int rc = guarded(std::cerr, [&] { cfg = load(); return kExitOk; }); rc != kExitOk) {
            return rc;
        }
        return simulate(cfg, std::cout, std::cerr);
    }
    if (mine_cmd->parsed()) {
        RunConfig cfg;
        if (int rc = guarded(std::cerr, [&] { cfg = load(); return kExitOk; }); rc != kExitOk) {
            return rc;
        }
        if (parallelism) {
            if (*parallelism == 0) {
                std::cerr << "config error: --parallelism must be at least 1\n";
                return kExitConfig;
            }
            cfg.parallelism = *parallelism;
        }
        return mine(cfg, std::cout, std::cerr);
    }
    if (eval_cmd->parsed()) return eval(eval_opts, std::cout, std::cerr);
    if (maps_cmd->parsed()) return boxes_from_maps(maps_opts, std::cout, std::cerr);
    if (stats_cmd->parsed()) return stats(stats_path, stats_json, std::cout, std::cerr);
    return kExitConfig;
}

}  // namespace pgt::cli
