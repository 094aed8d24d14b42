#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/operators.h>

#include "pgt/detector_post.hpp"
#include "pgt/geometry.hpp"
#include "pgt/matching.hpp"
#include "pgt/metrics.hpp"
#include "pgt/neighbourhood.hpp"
#include "pgt/pipeline.hpp"
#include "pgt/recognizer.hpp"
#include "pgt/simulate.hpp"
#include "pgt/weak_labels.hpp"

namespace py = pybind11;
using namespace pgt;

namespace {

WeakLabelSet labels_from_texts(const std::vector<std::vector<std::string>>& texts, std::size_t k_max)
{
    std::vector<AnnotationText> ann;
    ann.reserve(texts.size());
    for (const auto& t : texts) ann.emplace_back(t);
    return expand_kgrams(ann, k_max);
}

}  // namespace

PYBIND11_MODULE(_pgt, m)
{
    m.doc() = "Pseudo ground truth mining: geometry, matching, neighbourhood search and pipeline";

    py::register_exception<DegenerateBoxError>(m, "DegenerateBoxError", PyExc_ValueError);
    py::register_exception<BackendError>(m, "BackendError", PyExc_RuntimeError);

    py::class_<OrientedBox>(m, "OrientedBox")
        .def(py::init<double, double, double, double, double>(), py::arg("cx"), py::arg("cy"),
             py::arg("w"), py::arg("h"), py::arg("alpha") = 0.0)
        .def_readonly("cx", &OrientedBox::cx)
        .def_readonly("cy", &OrientedBox::cy)
        .def_readonly("w", &OrientedBox::w)
        .def_readonly("h", &OrientedBox::h)
        .def_readonly("alpha", &OrientedBox::alpha)
        .def("corners",
             [](const OrientedBox& b) {
                 std::vector<std::pair<double, double>> out;
                 for (const auto& p : b.corners()) out.emplace_back(p.x, p.y);
                 return out;
             })
        .def("to_list", [](const OrientedBox& b) { return std::vector{b.cx, b.cy, b.w, b.h, b.alpha}; })
        .def(py::self == py::self)
        .def("__repr__", [](const OrientedBox& b) {
            return "OrientedBox(" + std::to_string(b.cx) + ", " + std::to_string(b.cy) + ", " +
                   std::to_string(b.w) + ", " + std::to_string(b.h) + ", " + std::to_string(b.alpha) + ")";
        });

    m.def("apply_offset",
          [](const OrientedBox& b, double t, double l, double r, double char_unit, double vert_unit) {
              return apply_offset(b, OffsetF{t, l, r}, char_unit, vert_unit);
          },
          py::arg("box"), py::arg("t"), py::arg("l"), py::arg("r"), py::arg("char_unit"),
          py::arg("vert_unit"));
    m.def("within_image", py::overload_cast<const OrientedBox&, double, double>(&within_image),
          py::arg("box"), py::arg("img_w"), py::arg("img_h"));
    m.def("overlaps", &overlaps);
    m.def("iou", &iou);

    m.def("expand_kgrams",
          [](const std::vector<std::vector<std::string>>& texts, std::size_t k_max) {
              return labels_from_texts(texts, k_max).labels();
          },
          py::arg("texts"), py::arg("k_max") = kDefaultMaxK);

    m.def("levenshtein", py::overload_cast<std::string_view, std::string_view>(&levenshtein));
    m.def("normalized_distance", &normalized_distance);
    m.def("canon", &canon);

    py::class_<Detection>(m, "Detection")
        .def(py::init([](const OrientedBox& b, std::string text, double conf) {
                 return Detection{b, std::move(text), conf};
             }),
             py::arg("box"), py::arg("text"), py::arg("confidence") = 1.0)
        .def_readwrite("box", &Detection::box)
        .def_readwrite("text", &Detection::text)
        .def_readwrite("confidence", &Detection::confidence);

    m.def("assign_weak",
          [](const std::vector<Detection>& dets, const std::vector<std::vector<std::string>>& texts,
             std::uint64_t seed) {
              Rng rng(seed);
              std::vector<std::tuple<std::size_t, std::string, std::size_t>> out;
              for (const auto& p : assign_weak(dets, labels_from_texts(texts, kDefaultMaxK), rng)) {
                  out.emplace_back(p.detection_index, p.label, p.distance);
              }
              return out;
          },
          py::arg("detections"), py::arg("texts"), py::arg("seed") = 0,
          "Returns (detection index, label, distance) triples.");

    py::class_<SearchConstants>(m, "SearchConstants")
        .def(py::init<>())
        .def_readwrite("c", &SearchConstants::c)
        .def_readwrite("beta", &SearchConstants::beta)
        .def_readwrite("gamma", &SearchConstants::gamma)
        .def_readwrite("delta", &SearchConstants::delta)
        .def_readwrite("kappa", &SearchConstants::kappa)
        .def_readwrite("o", &SearchConstants::o);

    py::class_<AcceptThresholds>(m, "AcceptThresholds")
        .def(py::init<>())
        .def_readwrite("theta", &AcceptThresholds::theta)
        .def_readwrite("lambda_", &AcceptThresholds::lambda);

    m.def("candidate_offsets",
          [](const std::string& direction, const SearchConstants& consts) {
              if (direction != "left" && direction != "right") {
                  throw py::value_error("direction must be 'left' or 'right'");
              }
              std::vector<std::tuple<int, int, int>> out;
              for (const auto& o : candidate_offsets(
                       direction == "left" ? Direction::left : Direction::right, consts)) {
                  out.emplace_back(o.t, o.l, o.r);
              }
              return out;
          },
          py::arg("direction"), py::arg("consts") = SearchConstants{});

    m.def("is_pgt",
          [](const std::string& tt, const std::string& g, double theta, std::size_t lambda) {
              const auto d = is_pgt(tt, g, {theta, lambda});
              return std::pair<std::string, double>{to_string(d.kind), d.d};
          },
          py::arg("recognized"), py::arg("label"), py::arg("theta") = 0.35, py::arg("lambda_") = 4);

    py::class_<NoiseModel>(m, "NoiseModel")
        .def(py::init<>())
        .def_readwrite("p_sub", &NoiseModel::p_sub)
        .def_readwrite("coverage_min", &NoiseModel::coverage_min)
        .def_readwrite("pad_space_chars", &NoiseModel::pad_space_chars)
        .def_readwrite("vconf_floor", &NoiseModel::vconf_floor);

    py::class_<TextInstance>(m, "TextInstance")
        .def(py::init([](std::string text, const OrientedBox& box, double cw) {
                 return TextInstance{std::move(text), box, cw};
             }),
             py::arg("text"), py::arg("box"), py::arg("char_width"))
        .def_readonly("text", &TextInstance::text)
        .def_readonly("box", &TextInstance::box)
        .def_readonly("char_width", &TextInstance::char_width);

    py::class_<SceneSpec>(m, "SceneSpec")
        .def(py::init([](std::string id, double w, double h, std::vector<TextInstance> inst) {
                 return SceneSpec{std::move(id), w, h, std::move(inst)};
             }),
             py::arg("image_id"), py::arg("width"), py::arg("height"), py::arg("instances"))
        .def_readonly("image_id", &SceneSpec::image_id)
        .def_readonly("width", &SceneSpec::width)
        .def_readonly("height", &SceneSpec::height)
        .def_readonly("instances", &SceneSpec::instances);

    py::class_<RecognitionBackend, std::shared_ptr<RecognitionBackend>>(m, "RecognitionBackend")
        .def("recognize_batch",
             [](RecognitionBackend& b, const std::string& id, const std::vector<OrientedBox>& boxes) {
                 std::vector<std::pair<std::string, double>> out;
                 for (const auto& r : b.recognize_batch(id, boxes)) out.emplace_back(r.text, r.confidence);
                 return out;
             })
        .def_property_readonly("recognitions", &RecognitionBackend::recognitions);

    py::class_<SimulatedBackend, RecognitionBackend, std::shared_ptr<SimulatedBackend>>(
        m, "SimulatedBackend")
        .def(py::init<std::vector<SceneSpec>, NoiseModel, std::uint64_t>(), py::arg("scenes"),
             py::arg("noise") = NoiseModel{}, py::arg("seed") = 0);

    m.def("find_optimal_box",
          [](RecognitionBackend& backend, const std::string& image_id, const Detection& det,
             const std::string& label, const SearchConstants& consts) {
              ImageRef ref{image_id, backend.image_size(image_id)};
              const auto o = find_optimal_box(ref, det, label, backend, consts);
              return py::make_tuple(o.box, o.text, o.candidate_recognitions);
          },
          py::arg("backend"), py::arg("image_id"), py::arg("detection"), py::arg("label"),
          py::arg("consts") = SearchConstants{},
          "Returns (box, text, candidate recognitions).");

    py::class_<PgtRecord>(m, "PgtRecord")
        .def_readonly("image_id", &PgtRecord::image_id)
        .def_readonly("box", &PgtRecord::box)
        .def_readonly("label", &PgtRecord::label)
        .def_readonly("final_text", &PgtRecord::final_text)
        .def_readonly("d", &PgtRecord::d)
        .def_property_readonly("accept_kind", [](const PgtRecord& r) { return to_string(r.accept_kind); })
        .def_readonly("iteration", &PgtRecord::iteration);

    m.def("pgt_gen",
          [](RecognitionBackend& backend, const std::string& image_id,
             const std::vector<Detection>& dets, const std::vector<std::vector<std::string>>& texts,
             std::uint64_t seed, const SearchConstants& consts, const AcceptThresholds& thr) {
              Rng rng(derive_seed(seed, image_id));
              ImageRef ref{image_id, backend.image_size(image_id)};
              return pgt_gen(ref, dets, labels_from_texts(texts, kDefaultMaxK), backend, consts, thr,
                             rng)
                  .records;
          },
          py::arg("backend"), py::arg("image_id"), py::arg("detections"), py::arg("texts"),
          py::arg("seed") = 0, py::arg("consts") = SearchConstants{},
          py::arg("thresholds") = AcceptThresholds{});

    m.def("exact_match_baseline",
          [](const std::string& image_id, const std::vector<Detection>& dets,
             const std::vector<std::vector<std::string>>& texts, std::uint64_t seed) {
              Rng rng(derive_seed(seed, image_id));
              return exact_match_baseline(image_id, dets, labels_from_texts(texts, kDefaultMaxK), rng);
          },
          py::arg("image_id"), py::arg("detections"), py::arg("texts"), py::arg("seed") = 0);

    m.def("confidence_filter", &confidence_filter, py::arg("image_id"), py::arg("detections"),
          py::arg("t"), py::arg("iteration") = 1);
    m.attr("CONFIDENCE_PRESETS") = std::vector<double>(kConfidencePresets.begin(), kConfidencePresets.end());

    m.def("fit_box",
          [](const std::vector<std::pair<int, int>>& pixels, const std::vector<float>& radius,
             std::size_t width) {
              Component c;
              for (auto [x, y] : pixels) c.push_back({x, y});
              return fit_box(c, radius, width);
          },
          py::arg("pixels"), py::arg("radius"), py::arg("width"));

    m.def("boxes_from_maps",
          [](std::size_t width, std::size_t height, std::vector<float> tr, std::vector<float> tcl,
             std::vector<float> radius, double thr_tr, double thr_tcl) {
              PredictionMaps maps{width, height, std::move(tr), std::move(tcl), std::move(radius),
                                  std::vector<float>(width * height, 0.0f)};
              return boxes_from_maps(maps, thr_tr, thr_tcl);
          },
          py::arg("width"), py::arg("height"), py::arg("tr"), py::arg("tcl"), py::arg("radius"),
          py::arg("thr_tr") = kDefaultTrThreshold, py::arg("thr_tcl") = kDefaultTclThreshold);

    m.def("word_accuracy", &word_accuracy, py::arg("pairs"), py::arg("alnum_only") = false);
    m.def("ned_score", &ned_score, py::arg("pairs"));
}
