#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pgt/config.hpp"

namespace pgt::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIo = 3;

/// Simulates the corpus described by config.simulate and writes the scenes,
/// detections and annotations files named in config.paths.
int simulate(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Mines config.paths.detections + annotations and writes pgt_iter<i>.jsonl,
/// stats.json and report.txt into config.paths.out_dir.
int mine(const RunConfig& config, std::ostream& out, std::ostream& err);

struct EvalOptions {
    std::filesystem::path pgt;
    std::filesystem::path scenes;
    std::optional<std::filesystem::path> manual;
    std::optional<std::filesystem::path> json_out;
    double iou_min = 0.3;
};

int eval(const EvalOptions& options, std::ostream& out, std::ostream& err);

struct MapsOptions {
    std::filesystem::path maps_dir;
    std::filesystem::path out;
    double thr_tr = 0.4;
    double thr_tcl = 0.7;
};

int boxes_from_maps(const MapsOptions& options, std::ostream& out, std::ostream& err);

int stats(const std::filesystem::path& stats_file, bool as_json, std::ostream& out,
          std::ostream& err);

/// Full command line entry point (`pgt <subcommand> ...`).
int run(int argc, char** argv);

}  // namespace pgt::cli
