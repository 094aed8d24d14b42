#include <doctest.h>

#include <algorithm>

#include "pgt/pipeline.hpp"
#include "pgt/simulate.hpp"

using namespace pgt;

namespace {

SceneSpec cartoon_scene()
{
    return {"img", 400, 200, {{"cartoon", OrientedBox(200, 100, 70, 20, 0), 10.0}}};
}

WeakLabelSet g_of(std::initializer_list<const char*> texts)
{
    std::vector<AnnotationText> t;
    for (const char* s : texts) t.push_back(AnnotationText::from_string(s));
    return expand_kgrams(t);
}

Dataset small_dataset(std::size_t n_scenes, std::uint64_t seed, std::vector<SceneSpec>* scenes)
{
    SimulationConfig cfg;
    cfg.seed = seed;
    cfg.n_scenes = n_scenes;
    const SimCorpus corpus = simulate_corpus(cfg);
    *scenes = corpus.scenes;
    Dataset d;
    for (std::size_t i = 0; i < corpus.scenes.size(); ++i) {
        d.push_back({corpus.scenes[i].image_id, corpus.scenes[i].size(),
                     corpus.detections[i].detections, corpus.annotations[i].texts});
    }
    return d;
}

}  // namespace

TEST_CASE("pgt_gen examples")
{
    SimulatedBackend backend({cartoon_scene()}, NoiseModel{}, 1);
    const ImageRef img{"img", ImageSize{400, 200}};
    Rng rng(1);

    SUBCASE("no detections")
    {
        const auto r = pgt_gen(img, {}, g_of({"cartoon"}), backend, {}, {}, rng);
        CHECK(r.records.empty());
        CHECK(r.counts.detections == 0);
    }
    SUBCASE("exact detection keeps its box")
    {
        const Detection det{OrientedBox(200, 100, 70, 20, 0), "cartoon", 1.0};
        const auto r = pgt_gen(img, {det}, g_of({"cartoon"}), backend, {}, {}, rng);
        REQUIRE(r.records.size() == 1);
        CHECK(r.records[0].accept_kind == AcceptKind::exact);
        CHECK(r.records[0].box == det.box);
        CHECK(backend.recognitions() == 0);
    }
    SUBCASE("truncated detection is widened and accepted")
    {
        const Detection det{OrientedBox(180, 100, 30, 20, 0), "car", 1.0};
        const auto r = pgt_gen(img, {det}, g_of({"cartoon"}), backend, {}, {}, rng);
        REQUIRE(r.records.size() == 1);
        CHECK(r.records[0].label == "cartoon");
        CHECK(r.records[0].accept_kind == AcceptKind::exact);
        CHECK(r.records[0].box.w > det.box.w);
        CHECK(r.counts.recognitions > 0);
    }
}

TEST_CASE("baselines")
{
    const std::vector<Detection> dets{{OrientedBox(20, 20, 30, 10, 0), "cafe", 0.95},
                                      {OrientedBox(80, 20, 30, 10, 0), "hous", 1.0}};
    Rng rng(3);
    const auto exact = exact_match_baseline("img", dets, g_of({"cafe", "house"}), rng);
    REQUIRE(exact.size() == 1);
    CHECK(exact[0].label == "cafe");
    CHECK(exact[0].box == dets[0].box);
    CHECK(exact[0].final_text == "cafe");

    CHECK(confidence_filter("img", dets, 0.99).size() == 1);
    CHECK(confidence_filter("img", dets, 0.99)[0].label == "hous");
    CHECK(confidence_filter("img", dets, 0.5).size() == 2);
    CHECK(confidence_filter("img", dets, 1.0).empty());
    CHECK_THROWS_AS(confidence_filter("img", dets, 1.5), std::invalid_argument);
    CHECK(kConfidencePresets == std::array<double, 4>{0.99, 0.90, 0.80, 0.50});
}

TEST_CASE("mine_iterations: single pass and constant backend")
{
    std::vector<SceneSpec> scenes;
    const Dataset data = small_dataset(20, 5, &scenes);
    auto factory = [&](int) { return std::make_shared<SimulatedBackend>(scenes, NoiseModel{0.02}, 1); };

    MiningOptions opt;
    opt.seed = 9;
    const auto one = mine_iterations(data, factory, opt);
    CHECK(one.stats.iterations.size() == 1);
    CHECK(one.pgt.size() == 1);
    CHECK(one.stats.iterations[0].mined_with_ns == one.pgt[0].size());

    opt.max_iters = 3;
    opt.stop_delta = 0;
    const auto three = mine_iterations(data, factory, opt);
    REQUIRE(three.stats.iterations.size() == 3);
    CHECK(three.pgt[0].size() == three.pgt[1].size());
    CHECK(three.pgt[1].size() == three.pgt[2].size());
    CHECK(three.pgt[2].front().iteration == 3);

    // With the default 1% rule an unchanged count stops after iteration 2.
    opt.stop_delta.reset();
    CHECK(mine_iterations(data, factory, opt).stats.iterations.size() == 2);
}

TEST_CASE("mine_once isolates failing images and is order deterministic")
{
    std::vector<SceneSpec> scenes;
    Dataset data = small_dataset(30, 8, &scenes);
    data.push_back({"ghost", ImageSize{100, 100}, {{OrientedBox(50, 50, 20, 10, 0), "cafx", 0.5}},
                    {AnnotationText({"cafe"})}});
    std::rotate(data.begin(), data.end() - 1, data.end());

    SimulatedBackend backend(scenes, NoiseModel{0.02}, 4);
    MiningOptions opt;
    opt.seed = 2;
    std::vector<std::string> logged;
    opt.log = [&](const std::string& s) { logged.push_back(s); };
    const auto serial = mine_once(data, backend, opt, 1);
    CHECK(serial.stats.failed_images == 1);
    REQUIRE(serial.failures.size() == 1);
    CHECK(serial.failures[0].image_id == "ghost");
    CHECK(logged.size() == 1);

    opt.parallelism = 6;
    const auto parallel = mine_once(data, backend, opt, 1);
    CHECK(parallel.pgt == serial.pgt);
    CHECK(parallel.baseline == serial.baseline);
}

TEST_CASE("exact baseline is contained in the full method")
{
    std::vector<SceneSpec> scenes;
    const Dataset data = small_dataset(25, 12, &scenes);
    SimulatedBackend backend(scenes, NoiseModel{0.02}, 3);
    MiningOptions opt;
    opt.seed = 4;
    const auto out = mine_once(data, backend, opt, 1);
    for (const auto& b : out.baseline) {
        CHECK(std::find(out.pgt.begin(), out.pgt.end(), b) != out.pgt.end());
    }
    CHECK(out.stats.delta() >= 0);
}
