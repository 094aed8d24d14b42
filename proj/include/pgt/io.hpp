#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "pgt/geometry.hpp"
#include "pgt/matching.hpp"
#include "pgt/pipeline.hpp"
#include "pgt/recognizer.hpp"
#include "pgt/weak_labels.hpp"

namespace pgt {

/// A file could not be opened, read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A file was readable but its content does not follow the expected format.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);
nlohmann::json read_json_file(const std::filesystem::path& path);

/// Non-empty lines of a JSON Lines file, parsed. Errors name the line number.
std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path);
void write_jsonl(const std::filesystem::path& path, const std::vector<nlohmann::json>& rows);

// Boxes are [cx, cy, w, h, alpha] everywhere.
nlohmann::json box_to_json(const OrientedBox& box);
OrientedBox box_from_json(const nlohmann::json& j);

nlohmann::json detection_to_json(const Detection& d);
Detection detection_from_json(const nlohmann::json& j);

/// One line of a detections file. width/height are optional.
struct ImageDetections {
    std::string image_id;
    std::optional<ImageSize> size;
    std::vector<Detection> detections;
};

nlohmann::json image_detections_to_json(const ImageDetections& d);
ImageDetections image_detections_from_json(const nlohmann::json& j);

/// One line of a weak-annotation file: {"image_id", "texts": [[word, ...], ...]}.
struct ImageAnnotations {
    std::string image_id;
    std::vector<AnnotationText> texts;
};

nlohmann::json annotations_to_json(const ImageAnnotations& a);
ImageAnnotations annotations_from_json(const nlohmann::json& j);

nlohmann::json scene_to_json(const SceneSpec& s);
SceneSpec scene_from_json(const nlohmann::json& j);

nlohmann::json pgt_record_to_json(const PgtRecord& r);
PgtRecord pgt_record_from_json(const nlohmann::json& j);

nlohmann::json mining_stats_to_json(const MiningStats& stats);
MiningStats mining_stats_from_json(const nlohmann::json& j);

std::vector<ImageDetections> load_detections(const std::filesystem::path& path);
std::vector<ImageAnnotations> load_annotations(const std::filesystem::path& path);
std::vector<SceneSpec> load_scenes(const std::filesystem::path& path);
std::vector<PgtRecord> load_pgt(const std::filesystem::path& path);
void save_pgt(const std::filesystem::path& path, const std::vector<PgtRecord>& records);

/// Joins detections and annotations by image id, in detections-file order.
/// Images without annotations get an empty text list.
Dataset make_dataset(const std::vector<ImageDetections>& detections,
                     const std::vector<ImageAnnotations>& annotations);

}  // namespace pgt
