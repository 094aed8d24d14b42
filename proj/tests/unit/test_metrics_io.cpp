#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "pgt/io.hpp"
#include "pgt/metrics.hpp"

using namespace pgt;
using doctest::Approx;

namespace {

std::filesystem::path scratch(const char* name)
{
    const auto dir = std::filesystem::temp_directory_path() / "pgt_metrics_io_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

PgtRecord record(const std::string& image, const OrientedBox& box, const std::string& label)
{
    return {image, box, label, label, 0.0, AcceptKind::exact, 1};
}

}  // namespace

TEST_CASE("word_accuracy examples")
{
    CHECK(*word_accuracy({{"cafe", "cafe"}}) == Approx(100.0));
    CHECK(*word_accuracy({{" CAFE", "cafe"}, {"x", "y"}}) == Approx(50.0));
    CHECK(*word_accuracy({{"st.reet", "street"}}, true) == Approx(100.0));
    CHECK(*word_accuracy({{"st.reet", "street"}}, false) == Approx(0.0));
    CHECK_FALSE(word_accuracy({}).has_value());
}

TEST_CASE("ned_score examples")
{
    CHECK(*ned_score({{"a", "a"}, {"bc", "bc"}}) == Approx(0.0));
    CHECK(*ned_score({{"abc", "xyz"}}) == Approx(100.0));
    CHECK(*ned_score({{"streeet", "street"}}) == Approx(100.0 / 7).epsilon(1e-4));
    CHECK_FALSE(ned_score({}).has_value());
}

TEST_CASE("classify_errors examples")
{
    const SceneSpec scene{"s1",
                          300,
                          100,
                          {{"cancer", OrientedBox(50, 50, 60, 20, 0), 10.0},
                           {"dog ferry", OrientedBox(200, 50, 90, 20, 0), 10.0}}};
    const std::vector<PgtRecord> pgt{
        record("s1", OrientedBox(50, 50, 60, 20, 0), "cancer"),
        record("s1", OrientedBox(120, 85, 20, 10, 0), "the"),
        record("s1", OrientedBox(52, 50, 64, 20, 0), "career"),
        record("s1", OrientedBox(225, 50, 40, 20, 0), "ferry"),
        record("missing", OrientedBox(5, 5, 2, 2, 0), "x"),
    };
    const auto rep = classify_errors(pgt, {scene});
    CHECK(rep.total == 5);
    CHECK(rep.missing_scene == 1);
    CHECK(rep.count(ErrorClass::correct) == 2);
    CHECK(rep.count(ErrorClass::not_text) == 1);
    CHECK(rep.count(ErrorClass::wrong_text) == 1);
    CHECK(rep.error_rate() == Approx(0.5));

    std::size_t sum = rep.missing_scene;
    for (ErrorClass c : kAllErrorClasses) sum += rep.count(c);
    CHECK(sum == rep.total);

    // A manual label overrides the automatic class of record 2 of image s1.
    const auto manual = classify_errors(pgt, {scene}, 0.3, {{"s1", 2, ErrorClass::ambiguous_gt}});
    CHECK(manual.count(ErrorClass::wrong_text) == 0);
    CHECK(manual.count(ErrorClass::ambiguous_gt) == 1);
}

TEST_CASE("iteration report")
{
    MiningStats s;
    IterationStats it;
    it.iteration = 1;
    it.mined_with_ns = 92909;
    it.mined_without_ns = 72990;
    s.iterations.push_back(it);
    const auto rows = iteration_rows(s);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].delta == 19919);
    const std::string table = iteration_report_table(s);
    CHECK(table.find("92,909") != std::string::npos);
    CHECK(table.find("72,990") != std::string::npos);
    CHECK(table.find("19,919") != std::string::npos);
    CHECK(iteration_report_json(s)["rows"][0]["delta"] == 19919);

    it.iteration = 2;
    it.mined_without_ns = it.mined_with_ns;
    s.iterations.push_back(it);
    CHECK(iteration_rows(s)[1].delta == 0);

    CHECK(group_thousands(0) == "0");
    CHECK(group_thousands(999) == "999");
    CHECK(group_thousands(1000) == "1,000");
    CHECK(group_thousands(-1234567) == "-1,234,567");
}

TEST_CASE("jsonl round trips")
{
    const PgtRecord r{"img", OrientedBox(1.5, 2.25, 3, 4, 0.1), "Baker Street", " Baker Streot", 1.0 / 12,
                      AcceptKind::close, 2};
    save_pgt(scratch("pgt.jsonl"), {r, r});
    const auto back = load_pgt(scratch("pgt.jsonl"));
    REQUIRE(back.size() == 2);
    CHECK(back[0] == r);

    const SceneSpec s{"s", 100, 50, {{"a b", OrientedBox(10, 10, 20, 5, 0), 6.5}}};
    CHECK(scene_from_json(scene_to_json(s)) == s);

    const auto ann = annotations_from_json(
        nlohmann::json::parse(R"({"image_id":"i","texts":[["Sherlock","Holmes"],"221B Baker Street"]})"));
    REQUIRE(ann.texts.size() == 2);
    CHECK(ann.texts[1].words() == std::vector<std::string>{"221B", "Baker", "Street"});
}

TEST_CASE("io errors carry context")
{
    CHECK_THROWS_AS(read_text_file(scratch("does-not-exist")), IoError);
    {
        std::ofstream f(scratch("bad.jsonl"));
        f << R"({"image_id":"a","detections":[]})" << "\n\n" << "{oops\n";
    }
    try {
        load_detections(scratch("bad.jsonl"));
        FAIL("expected a format error");
    } catch (const FormatError& e) {
        CHECK(std::string(e.what()).find(":3") != std::string::npos);
    }
    {
        std::ofstream f(scratch("badbox.jsonl"));
        f << R"({"image_id":"a","detections":[{"box":[1,2,0,4,0],"text":"x","confidence":1}]})" << "\n";
    }
    CHECK_THROWS_AS(load_detections(scratch("badbox.jsonl")), FormatError);
    std::filesystem::remove_all(scratch("").parent_path());
}
