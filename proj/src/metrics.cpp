#include "pgt/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <sstream>

#include "pgt/geometry.hpp"
#include "pgt/io.hpp"
#include "pgt/matching.hpp"
#include "pgt/text.hpp"

namespace pgt {

namespace {

std::string normalize_for_accuracy(const std::string& s, bool alnum_only)
{
    std::string out;
    for (char c : canon(s)) {
        if (c == ' ') continue;
        const auto uc = static_cast<unsigned char>(c);
        if (alnum_only && uc < 0x80 && !std::isalnum(uc)) continue;
        out.push_back(c);
    }
    return out;
}

}  // namespace

std::optional<double> word_accuracy(const std::vector<TextPair>& pairs, bool alnum_only)
{
    if (pairs.empty()) return std::nullopt;
    std::size_t hits = 0;
    for (const auto& [pred, ref] : pairs) {
        if (normalize_for_accuracy(pred, alnum_only) == normalize_for_accuracy(ref, alnum_only)) {
            ++hits;
        }
    }
    return 100.0 * static_cast<double>(hits) / static_cast<double>(pairs.size());
}

std::optional<double> ned_score(const std::vector<TextPair>& pairs)
{
    if (pairs.empty()) return std::nullopt;
    double sum = 0.0;
    for (const auto& [pred, ref] : pairs) sum += normalized_distance(canon(pred), canon(ref));
    return 100.0 * sum / static_cast<double>(pairs.size());
}

const char* to_string(ErrorClass c)
{
    switch (c) {
    case ErrorClass::correct:
        return "correct";
    case ErrorClass::wrong_text:
        return "wrong_text";
    case ErrorClass::not_text:
        return "not_text";
    case ErrorClass::ambiguous_gt:
        return "ambiguous_gt";
    case ErrorClass::unclear_gt:
        return "unclear_gt";
    case ErrorClass::wrong_weak_punct:
        return "wrong_weak_punct";
    case ErrorClass::wrong_weak_other:
        return "wrong_weak_other";
    }
    return "correct";
}

ErrorClass error_class_from_string(const std::string& s)
{
    for (ErrorClass c : kAllErrorClasses) {
        if (s == to_string(c)) return c;
    }
    throw FormatError("unknown error class '" + s + "'");
}

std::vector<ManualLabel> load_manual_labels(const std::filesystem::path& path)
{
    std::vector<ManualLabel> out;
    for (const auto& row : read_jsonl(path)) {
        try {
            ManualLabel m;
            m.image_id = row.at("image_id").get<std::string>();
            m.record_index = row.at("record_index").get<std::size_t>();
            m.cls = error_class_from_string(row.at("class").get<std::string>());
            out.push_back(std::move(m));
        } catch (const nlohmann::json::exception& e) {
            throw FormatError(path.string() + ": " + e.what());
        }
    }
    return out;
}

std::size_t ErrorReport::count(ErrorClass c) const
{
    auto it = counts.find(c);
    return it == counts.end() ? 0 : it->second;
}

double ErrorReport::error_rate() const
{
    const std::size_t classified = total - missing_scene;
    if (classified == 0) return 0.0;
    return static_cast<double>(count(ErrorClass::wrong_text) + count(ErrorClass::not_text)) /
           static_cast<double>(classified);
}

namespace {

constexpr double kContainedFraction = 0.5;

bool is_word_run(const std::string& needle, const std::string& hay)
{
    if (needle.empty() || needle.size() >= hay.size()) return false;
    for (std::size_t pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) {
        const std::size_t end = pos + needle.size();
        if ((pos == 0 || hay[pos - 1] == ' ') && (end == hay.size() || hay[end] == ' ')) return true;
    }
    return false;
}

}  // namespace

ErrorReport classify_errors(const std::vector<PgtRecord>& pgt, const std::vector<SceneSpec>& scenes,
                            double iou_min, const std::vector<ManualLabel>& manual)
{
    std::map<std::string, const SceneSpec*> by_id;
    for (const auto& s : scenes) by_id[s.image_id] = &s;
    std::map<std::pair<std::string, std::size_t>, ErrorClass> overrides;
    for (const auto& m : manual) overrides[{m.image_id, m.record_index}] = m.cls;

    ErrorReport report;
    for (ErrorClass c : kAllErrorClasses) report.counts[c] = 0;
    std::map<std::string, std::size_t> per_image_index;

    for (const PgtRecord& r : pgt) {
        ++report.total;
        const std::size_t index = per_image_index[r.image_id]++;
        auto it = by_id.find(r.image_id);
        if (it == by_id.end()) {
            ++report.missing_scene;
            continue;
        }

        const TextInstance* best = nullptr;
        double best_iou = 0.0;
        for (const auto& inst : it->second->instances) {
            const double v = iou(r.box, inst.box);
            if (v > best_iou) {
                best_iou = v;
                best = &inst;
            }
        }

        ErrorClass cls = ErrorClass::not_text;
        std::string reference;
        if (best != nullptr && best_iou >= iou_min) {
            reference = best->text;
            cls = canon(r.label) == canon(best->text) ? ErrorClass::correct : ErrorClass::wrong_text;
        }
        if (cls != ErrorClass::correct) {
            // A box lying mostly inside a multi-word instance can carry one of its word runs.
            for (const auto& inst : it->second->instances) {
                if (intersection_area(r.box, inst.box) >= kContainedFraction * r.box.area() &&
                    is_word_run(canon(r.label), canon(inst.text))) {
                    cls = ErrorClass::correct;
                    reference = r.label;
                    break;
                }
            }
        }
        if (auto o = overrides.find({r.image_id, index}); o != overrides.end()) cls = o->second;
        ++report.counts[cls];
        report.pairs.emplace_back(r.label, reference);
    }
    return report;
}

nlohmann::json error_report_to_json(const ErrorReport& report)
{
    nlohmann::json counts = nlohmann::json::object();
    for (ErrorClass c : kAllErrorClasses) counts[to_string(c)] = report.count(c);
    nlohmann::json j{{"total", report.total},
                     {"missing_scene", report.missing_scene},
                     {"counts", std::move(counts)},
                     {"error_rate", report.error_rate()}};
    if (auto acc = word_accuracy(report.pairs)) j["word_accuracy"] = *acc;
    if (auto acc = word_accuracy(report.pairs, true)) j["word_accuracy_alnum"] = *acc;
    if (auto ned = ned_score(report.pairs)) j["ned"] = *ned;
    return j;
}

std::string error_report_table(const ErrorReport& report)
{
    std::ostringstream out;
    char line[128];
    for (ErrorClass c : kAllErrorClasses) {
        std::snprintf(line, sizeof line, "%-18s %10s\n", to_string(c),
                      group_thousands(static_cast<long long>(report.count(c))).c_str());
        out << line;
    }
    std::snprintf(line, sizeof line, "%-18s %10s\n", "missing scene",
                  group_thousands(static_cast<long long>(report.missing_scene)).c_str());
    out << line;
    std::snprintf(line, sizeof line, "%-18s %10s\n", "total",
                  group_thousands(static_cast<long long>(report.total)).c_str());
    out << line;
    std::snprintf(line, sizeof line, "%-18s %9.2f%%\n", "error rate", 100.0 * report.error_rate());
    out << line;
    if (auto acc = word_accuracy(report.pairs)) {
        std::snprintf(line, sizeof line, "%-18s %9.2f%%\n", "accuracy", *acc);
        out << line;
    }
    if (auto ned = ned_score(report.pairs)) {
        std::snprintf(line, sizeof line, "%-18s %10.2f\n", "NED", *ned);
        out << line;
    }
    return out.str();
}

std::string group_thousands(long long value)
{
    const bool negative = value < 0;
    std::string digits = std::to_string(negative ? -value : value);
    std::string out;
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (i > 0 && (digits.size() - i) % 3 == 0) out.push_back(',');
        out.push_back(digits[i]);
    }
    return negative ? "-" + out : out;
}

std::vector<IterationRow> iteration_rows(const MiningStats& stats)
{
    std::vector<IterationRow> rows;
    for (const auto& it : stats.iterations) {
        rows.push_back({it.iteration, it.mined_with_ns, it.mined_without_ns, it.delta()});
    }
    return rows;
}

std::string iteration_report_table(const MiningStats& stats)
{
    std::ostringstream out;
    char line[160];
    std::snprintf(line, sizeof line, "%9s | %14s | %14s | %10s\n", "Iteration", "with neigh. s.",
                  "w/o neigh. s.", "Delta");
    out << line;
    out << std::string(9, '-') << "-+-" << std::string(14, '-') << "-+-" << std::string(14, '-')
        << "-+-" << std::string(10, '-') << '\n';
    for (const auto& row : iteration_rows(stats)) {
        std::snprintf(line, sizeof line, "%9d | %14s | %14s | %10s\n", row.iteration,
                      group_thousands(static_cast<long long>(row.mined_with_ns)).c_str(),
                      group_thousands(static_cast<long long>(row.mined_without_ns)).c_str(),
                      group_thousands(row.delta).c_str());
        out << line;
    }
    return out.str();
}

nlohmann::json iteration_report_json(const MiningStats& stats)
{
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : iteration_rows(stats)) {
        rows.push_back({{"iteration", row.iteration},
                        {"mined_with_ns", row.mined_with_ns},
                        {"mined_without_ns", row.mined_without_ns},
                        {"delta", row.delta}});
    }
    return nlohmann::json{{"rows", std::move(rows)}};
}

}  // namespace pgt
