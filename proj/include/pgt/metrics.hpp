#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pgt/pipeline.hpp"
#include "pgt/recognizer.hpp"

namespace pgt {

using TextPair = std::pair<std::string, std::string>;  // (predicted, reference)

/// Percentage of pairs equal after canon() and space removal; with alnum_only
/// non-alphanumeric ASCII characters are dropped too. nullopt for no pairs.
std::optional<double> word_accuracy(const std::vector<TextPair>& pairs, bool alnum_only = false);

/// 100 × mean normalized edit distance of the canon() strings; lower is
/// better. nullopt for no pairs.
std::optional<double> ned_score(const std::vector<TextPair>& pairs);

enum class ErrorClass {
    correct,
    wrong_text,
    not_text,
    ambiguous_gt,
    unclear_gt,
    wrong_weak_punct,
    wrong_weak_other,
};

inline constexpr std::array<ErrorClass, 7> kAllErrorClasses = {
    ErrorClass::correct,      ErrorClass::wrong_text,       ErrorClass::not_text,
    ErrorClass::ambiguous_gt, ErrorClass::unclear_gt,       ErrorClass::wrong_weak_punct,
    ErrorClass::wrong_weak_other,
};

const char* to_string(ErrorClass c);
ErrorClass error_class_from_string(const std::string& s);

/// Human judgment for one record, addressed by image and the record's index
/// among that image's records.
struct ManualLabel {
    std::string image_id;
    std::size_t record_index = 0;
    ErrorClass cls = ErrorClass::correct;
};

std::vector<ManualLabel> load_manual_labels(const std::filesystem::path& path);

struct ErrorReport {
    std::map<ErrorClass, std::size_t> counts;
    /// Records whose image has no scene.
    std::size_t missing_scene = 0;
    std::size_t total = 0;
    /// (label, matched instance text or "") for every classified record.
    std::vector<TextPair> pairs;

    std::size_t count(ErrorClass c) const;
    /// (wrong_text + not_text) / classified records; 0 for an empty report.
    double error_rate() const;
};

inline constexpr double kDefaultIouMin = 0.3;

/// Matches every record to the instance of maximal IoU: at or above iou_min
/// it is correct or wrong_text by canon() equality, below it not_text. A
/// record that would be an error still counts as correct when at least half
/// of its box lies inside an instance whose text contains the label as a
/// whole-word run (a k-gram of a longer instance). Manual labels override the
/// automatic class of the records they address.
ErrorReport classify_errors(const std::vector<PgtRecord>& pgt, const std::vector<SceneSpec>& scenes,
                            double iou_min = kDefaultIouMin,
                            const std::vector<ManualLabel>& manual = {});

nlohmann::json error_report_to_json(const ErrorReport& report);
std::string error_report_table(const ErrorReport& report);

struct IterationRow {
    int iteration = 1;
    std::size_t mined_with_ns = 0;
    std::size_t mined_without_ns = 0;
    std::ptrdiff_t delta = 0;
};

std::vector<IterationRow> iteration_rows(const MiningStats& stats);
/// Aligned text table with thousands separators.
std::string iteration_report_table(const MiningStats& stats);
nlohmann::json iteration_report_json(const MiningStats& stats);

/// 92909 -> "92,909".
std::string group_thousands(long long value);

}  // namespace pgt
