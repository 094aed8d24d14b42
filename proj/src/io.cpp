#include "pgt/io.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace pgt {

using nlohmann::json;

std::string read_text_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("cannot read " + path.string());
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content)
{
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << content;
    out.flush();
    if (!out) throw IoError("cannot write " + path.string());
}

json read_json_file(const std::filesystem::path& path)
{
    const std::string text = read_text_file(path);
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

std::vector<json> read_jsonl(const std::filesystem::path& path)
{
    std::istringstream in(read_text_file(path));
    std::vector<json> rows;
    std::size_t lineno = 0;
    for (std::string line; std::getline(in, line);) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            rows.push_back(json::parse(line));
        } catch (const json::parse_error& e) {
            throw FormatError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return rows;
}

void write_jsonl(const std::filesystem::path& path, const std::vector<json>& rows)
{
    std::string content;
    for (const auto& r : rows) {
        content += r.dump();
        content += '\n';
    }
    write_text_file(path, content);
}

json box_to_json(const OrientedBox& box)
{
    return json::array({box.cx, box.cy, box.w, box.h, box.alpha});
}

OrientedBox box_from_json(const json& j)
{
    if (!j.is_array() || j.size() != 5) {
        throw FormatError("box must be an array [cx, cy, w, h, alpha]");
    }
    for (const auto& v : j) {
        if (!v.is_number()) throw FormatError("box entries must be numbers");
    }
    try {
        return OrientedBox(j[0].get<double>(), j[1].get<double>(), j[2].get<double>(),
                           j[3].get<double>(), j[4].get<double>());
    } catch (const std::invalid_argument& e) {
        throw FormatError(e.what());
    }
}

namespace {

template <class T>
T field(const json& j, const char* key)
{
    if (!j.is_object()) throw FormatError("expected a JSON object");
    auto it = j.find(key);
    if (it == j.end()) throw FormatError(std::string("missing field '") + key + "'");
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        throw FormatError(std::string("field '") + key + "' has the wrong type");
    }
}

template <class Fn>
auto load_rows(const std::filesystem::path& path, Fn&& parse)
{
    std::vector<decltype(parse(json{}))> out;
    std::size_t index = 0;
    for (const auto& row : read_jsonl(path)) {
        ++index;
        try {
            out.push_back(parse(row));
        } catch (const FormatError& e) {
            throw FormatError(path.string() + ": record " + std::to_string(index) + ": " +
                              e.what());
        }
    }
    return out;
}

}  // namespace

json detection_to_json(const Detection& d)
{
    return json{{"box", box_to_json(d.box)}, {"text", d.text}, {"confidence", d.confidence}};
}

Detection detection_from_json(const json& j)
{
    Detection d;
    d.box = box_from_json(field<json>(j, "box"));
    d.text = j.contains("text") ? field<std::string>(j, "text") : std::string{};
    d.confidence = j.contains("confidence") ? field<double>(j, "confidence") : 0.0;
    if (d.confidence < 0.0 || d.confidence > 1.0) throw FormatError("confidence outside [0, 1]");
    return d;
}

json image_detections_to_json(const ImageDetections& d)
{
    json j;
    j["image_id"] = d.image_id;
    if (d.size) {
        j["width"] = d.size->width;
        j["height"] = d.size->height;
    }
    json dets = json::array();
    for (const auto& det : d.detections) dets.push_back(detection_to_json(det));
    j["detections"] = std::move(dets);
    return j;
}

ImageDetections image_detections_from_json(const json& j)
{
    ImageDetections d;
    d.image_id = field<std::string>(j, "image_id");
    if (j.contains("width") || j.contains("height")) {
        d.size = ImageSize{field<double>(j, "width"), field<double>(j, "height")};
    }
    for (const auto& det : field<json>(j, "detections")) d.detections.push_back(detection_from_json(det));
    return d;
}

json annotations_to_json(const ImageAnnotations& a)
{
    json texts = json::array();
    for (const auto& t : a.texts) texts.push_back(t.words());
    return json{{"image_id", a.image_id}, {"texts", std::move(texts)}};
}

ImageAnnotations annotations_from_json(const json& j)
{
    ImageAnnotations a;
    a.image_id = field<std::string>(j, "image_id");
    for (const auto& t : field<json>(j, "texts")) {
        try {
            if (t.is_string()) {
                a.texts.push_back(AnnotationText::from_string(t.get<std::string>()));
            } else {
                a.texts.emplace_back(t.get<std::vector<std::string>>());
            }
        } catch (const json::exception&) {
            throw FormatError("texts must be lists of words");
        } catch (const std::invalid_argument& e) {
            throw FormatError(e.what());
        }
    }
    return a;
}

json scene_to_json(const SceneSpec& s)
{
    json inst = json::array();
    for (const auto& i : s.instances) {
        inst.push_back(json{{"text", i.text}, {"box", box_to_json(i.box)}, {"char_width", i.char_width}});
    }
    return json{{"image_id", s.image_id},
                {"width", s.width},
                {"height", s.height},
                {"instances", std::move(inst)}};
}

SceneSpec scene_from_json(const json& j)
{
    SceneSpec s;
    s.image_id = field<std::string>(j, "image_id");
    s.width = field<double>(j, "width");
    s.height = field<double>(j, "height");
    if (!(s.width > 0) || !(s.height > 0)) throw FormatError("scene size must be positive");
    for (const auto& i : field<json>(j, "instances")) {
        TextInstance t;
        t.text = field<std::string>(i, "text");
        t.box = box_from_json(field<json>(i, "box"));
        t.char_width = field<double>(i, "char_width");
        if (!(t.char_width > 0)) throw FormatError("char_width must be positive");
        s.instances.push_back(std::move(t));
    }
    return s;
}

json pgt_record_to_json(const PgtRecord& r)
{
    return json{{"image_id", r.image_id},         {"box", box_to_json(r.box)},
                {"label", r.label},               {"final_text", r.final_text},
                {"d", r.d},                       {"accept_kind", to_string(r.accept_kind)},
                {"iteration", r.iteration}};
}

PgtRecord pgt_record_from_json(const json& j)
{
    PgtRecord r;
    r.image_id = field<std::string>(j, "image_id");
    r.box = box_from_json(field<json>(j, "box"));
    r.label = field<std::string>(j, "label");
    r.final_text = j.contains("final_text") ? field<std::string>(j, "final_text") : r.label;
    r.d = j.contains("d") ? field<double>(j, "d") : 0.0;
    const std::string kind = j.contains("accept_kind") ? field<std::string>(j, "accept_kind") : "exact";
    if (kind == "exact") {
        r.accept_kind = AcceptKind::exact;
    } else if (kind == "close") {
        r.accept_kind = AcceptKind::close;
    } else {
        throw FormatError("accept_kind must be 'exact' or 'close'");
    }
    r.iteration = j.contains("iteration") ? field<int>(j, "iteration") : 1;
    return r;
}

json mining_stats_to_json(const MiningStats& stats)
{
    json rows = json::array();
    for (const auto& it : stats.iterations) {
        rows.push_back(json{{"iteration", it.iteration},
                            {"images", it.images},
                            {"failed_images", it.failed_images},
                            {"detections", it.counts.detections},
                            {"proposals", it.counts.proposals},
                            {"exact", it.counts.exact},
                            {"close", it.counts.close},
                            {"rejects", it.counts.rejects},
                            {"recognitions", it.counts.recognitions},
                            {"mined_with_ns", it.mined_with_ns},
                            {"mined_without_ns", it.mined_without_ns},
                            {"delta", it.delta()}});
    }
    json failures = json::array();
    for (const auto& f : stats.failures) {
        failures.push_back(
            json{{"iteration", f.iteration}, {"image_id", f.image_id}, {"message", f.message}});
    }
    return json{{"iterations", std::move(rows)}, {"failures", std::move(failures)}};
}

MiningStats mining_stats_from_json(const json& j)
{
    MiningStats stats;
    for (const auto& row : field<json>(j, "iterations")) {
        IterationStats it;
        it.iteration = field<int>(row, "iteration");
        auto opt = [&](const char* key) {
            return row.contains(key) ? field<std::size_t>(row, key) : std::size_t{0};
        };
        it.images = opt("images");
        it.failed_images = opt("failed_images");
        it.counts.detections = opt("detections");
        it.counts.proposals = opt("proposals");
        it.counts.exact = opt("exact");
        it.counts.close = opt("close");
        it.counts.rejects = opt("rejects");
        it.counts.recognitions = opt("recognitions");
        it.mined_with_ns = field<std::size_t>(row, "mined_with_ns");
        it.mined_without_ns = field<std::size_t>(row, "mined_without_ns");
        stats.iterations.push_back(it);
    }
    if (j.contains("failures")) {
        for (const auto& f : field<json>(j, "failures")) {
            stats.failures.push_back({field<int>(f, "iteration"), field<std::string>(f, "image_id"),
                                      field<std::string>(f, "message")});
        }
    }
    return stats;
}

std::vector<ImageDetections> load_detections(const std::filesystem::path& path)
{
    return load_rows(path, image_detections_from_json);
}

std::vector<ImageAnnotations> load_annotations(const std::filesystem::path& path)
{
    return load_rows(path, annotations_from_json);
}

std::vector<SceneSpec> load_scenes(const std::filesystem::path& path)
{
    return load_rows(path, scene_from_json);
}

std::vector<PgtRecord> load_pgt(const std::filesystem::path& path)
{
    return load_rows(path, pgt_record_from_json);
}

void save_pgt(const std::filesystem::path& path, const std::vector<PgtRecord>& records)
{
    std::vector<json> rows;
    rows.reserve(records.size());
    for (const auto& r : records) rows.push_back(pgt_record_to_json(r));
    write_jsonl(path, rows);
}

Dataset make_dataset(const std::vector<ImageDetections>& detections,
                     const std::vector<ImageAnnotations>& annotations)
{
    std::map<std::string, const ImageAnnotations*> by_id;
    for (const auto& a : annotations) by_id[a.image_id] = &a;

    Dataset out;
    out.reserve(detections.size());
    for (const auto& d : detections) {
        ImageItem item;
        item.image_id = d.image_id;
        item.size = d.size;
        item.detections = d.detections;
        if (auto it = by_id.find(d.image_id); it != by_id.end()) item.texts = it->second->texts;
        out.push_back(std::move(item));
    }
    return out;
}

}  // namespace pgt
