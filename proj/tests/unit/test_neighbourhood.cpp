#include <doctest.h>

#include <functional>
#include <set>

#include "pgt/neighbourhood.hpp"
#include "pgt/recognizer.hpp"

using namespace pgt;
using doctest::Approx;

namespace {

// Backend driven by a function of the query box; records every query.
class ScriptedBackend : public RecognitionBackend {
public:
    explicit ScriptedBackend(std::function<std::string(const OrientedBox&)> fn) : fn_(std::move(fn)) {}

    std::vector<RecognitionResult> recognize_batch(const std::string&,
                                                   std::span<const OrientedBox> boxes) override
    {
        std::vector<RecognitionResult> out;
        for (const auto& b : boxes) {
            queries.push_back(b);
            out.push_back({fn_(b), 0.9});
        }
        count_recognitions(boxes.size());
        return out;
    }

    std::vector<OrientedBox> queries;

private:
    std::function<std::string(const OrientedBox&)> fn_;
};

SceneSpec cartoon_scene()
{
    // "cartoon": 7 characters of 10px, x in [165, 235], y in [90, 110].
    return {"img", 400, 200, {{"cartoon", OrientedBox(200, 100, 70, 20, 0), 10.0}}};
}

}  // namespace

TEST_CASE("candidate_offsets examples")
{
    SUBCASE("default constants")
    {
        for (Direction dir : {Direction::left, Direction::right}) {
            const auto offs = candidate_offsets(dir, SearchConstants{});
            CHECK(offs.size() == 342);
            std::set<int> t, side;
            for (const auto& o : offs) {
                t.insert(o.t);
                side.insert(dir == Direction::left ? o.l : o.r);
                CHECK((dir == Direction::left ? o.r : o.l) == 0);
            }
            CHECK(*t.begin() == -1);
            CHECK(*t.rbegin() == 4);
            CHECK(t.size() == 6);
            CHECK(*side.begin() == -28);
            CHECK(*side.rbegin() == 28);
            CHECK(side.size() == 57);
        }
    }
    SUBCASE("small constants")
    {
        SearchConstants k;
        k.c = 1;
        k.delta = 1;
        CHECK(candidate_offsets(Direction::left, k).size() == 18);
    }
    SUBCASE("invalid constants")
    {
        SearchConstants k;
        k.delta = 0;
        CHECK_THROWS_AS(candidate_offsets(Direction::left, k), std::invalid_argument);
    }
}

TEST_CASE("choose_side example")
{
    DirectionalResult left;
    left.t = {0, 1};
    left.l = {2, 3};
    left.r = {0};
    const SideChoice c = choose_side(left, Direction::left, 8);
    CHECK(c.t == 0);
    CHECK(c.side == Approx(2.5));

    // A wide minimal set is capped at o units beyond its minimum.
    DirectionalResult wide;
    wide.t = {-1, 2};
    wide.r = {-4, 20};
    wide.l = {0};
    const SideChoice w = choose_side(wide, Direction::right, 8);
    CHECK(w.t == -1);
    CHECK(w.side == Approx((-4 + 4) / 2.0));
}

TEST_CASE("find_optimal_box short-circuits on an exact detection")
{
    ScriptedBackend backend([](const OrientedBox&) { return std::string("x"); });
    const Detection det{OrientedBox(50, 50, 40, 10, 0.1), "Cafe ", 0.8};
    const auto out = find_optimal_box({"img", ImageSize{100, 100}}, det, "cafe", backend, {});
    CHECK(out.box == det.box);
    CHECK(out.text == det.text);
    CHECK(out.candidate_recognitions == 0);
    CHECK(out.short_circuit);
    CHECK(backend.recognitions() == 0);
}

TEST_CASE("find_optimal_box only queries valid candidates")
{
    ScriptedBackend backend([](const OrientedBox&) { return std::string("cafx"); });
    // Near the left image border: many left extensions leave the image.
    const Detection det{OrientedBox(25, 50, 40, 10, 0), "cafx", 0.8};
    const ImageSize size{100, 100};
    const auto out = find_optimal_box({"img", size}, det, "cafe", backend, {});
    CHECK(out.candidate_recognitions < 2 * 342);
    CHECK(backend.recognitions() == out.candidate_recognitions + 1);
    for (std::size_t i = 0; i + 1 < backend.queries.size(); ++i) {
        CHECK(within_image(backend.queries[i], size));
        CHECK(overlaps(backend.queries[i], det.box));
    }
    CHECK(within_image(out.box, size));
}

TEST_CASE("find_optimal_box widens a truncated detection")
{
    SimulatedBackend backend({cartoon_scene()}, NoiseModel{}, 1);
    // Covers characters 0-2 ("car") exactly.
    const Detection det{OrientedBox(180, 100, 30, 20, 0), "car", 1.0};
    const auto out = find_optimal_box({"img", ImageSize{400, 200}}, det, "cartoon", backend, {});
    CHECK(canon(out.text) == "cartoon");
    CHECK(out.box.w > 60);
    // The box now spans the whole word: its right edge lies beyond the last character.
    CHECK(out.box.cx + out.box.w / 2 >= 230);
    CHECK(out.candidate_recognitions > 0);
    CHECK(is_pgt(out.text, "cartoon").kind == AcceptKind::exact);
}

TEST_CASE("is_pgt truth table")
{
    const auto exact = is_pgt("street", "street");
    CHECK(exact.kind == AcceptKind::exact);
    CHECK(exact.d == 0.0);

    const auto close = is_pgt("streeet", "street");
    CHECK(close.kind == AcceptKind::close);
    CHECK(close.d == Approx(1.0 / 7.0));

    const auto short_word = is_pgt("cat", "car");
    CHECK(short_word.kind == AcceptKind::reject);
    CHECK(short_word.d == Approx(1.0 / 3.0));

    const auto far = is_pgt("the", "theatre");
    CHECK(far.kind == AcceptKind::reject);
    CHECK(far.d == Approx(4.0 / 7.0));

    // First or last character differs.
    CHECK(is_pgt("xtreet", "street").kind == AcceptKind::reject);
    CHECK(is_pgt("streex", "street").kind == AcceptKind::reject);
    // Canonical comparison: case and boundary spaces are ignored.
    CHECK(is_pgt(" STREET ", "Street").kind == AcceptKind::exact);
    // Thresholds are parameters.
    CHECK(is_pgt("cat", "cut", {0.35, 2}).kind == AcceptKind::close);
    CHECK(is_pgt("streeet", "street", {0.1, 4}).kind == AcceptKind::reject);
}
