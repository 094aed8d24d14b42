#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "oracles.hpp"
#include "pgt/detector_post.hpp"
#include "pgt/io.hpp"

using namespace pgt;
using doctest::Approx;

namespace {

PredictionMaps filled(std::size_t w, std::size_t h, float tr, float tcl, float r = 0.0f)
{
    const std::size_t n = w * h;
    return {w, h, std::vector<float>(n, tr), std::vector<float>(n, tcl), std::vector<float>(n, r),
            std::vector<float>(n, 0.0f)};
}

Mask mask_of(std::size_t w, std::size_t h, std::initializer_list<Pixel> on)
{
    Mask m{w, h, std::vector<std::uint8_t>(w * h)};
    for (Pixel p : on) m.bits[static_cast<std::size_t>(p.y) * w + static_cast<std::size_t>(p.x)] = 1;
    return m;
}

}  // namespace

TEST_CASE("binarize examples")
{
    CHECK(binarize(filled(8, 4, 0, 0)).count() == 0);
    CHECK(binarize(filled(8, 4, 0.5f, 0.8f)).count() == 32);
    CHECK(binarize(filled(8, 4, 0.5f, 0.5f)).count() == 0);
    // Thresholds are inclusive.
    CHECK(binarize(filled(2, 2, 0.4f, 0.7f), 0.4f, 0.7f).count() == 4);

    auto bad = filled(4, 4, 1, 1);
    bad.tcl.pop_back();
    CHECK_THROWS_AS(binarize(bad), std::invalid_argument);
}

TEST_CASE("connected_components examples")
{
    CHECK(connected_components(mask_of(5, 5, {{2, 2}})).size() == 1);
    CHECK(connected_components(mask_of(5, 5, {{1, 1}, {2, 2}})).size() == 1);
    CHECK(connected_components(mask_of(5, 5, {{1, 1}, {3, 1}})).size() == 2);
    CHECK(connected_components(mask_of(5, 5, {})).empty());

    const auto comps = connected_components(mask_of(6, 6, {{4, 0}, {0, 3}, {1, 3}, {5, 5}}));
    REQUIRE(comps.size() == 3);
    CHECK(comps[0] == Component{{4, 0}});
    CHECK(comps[1] == Component{{0, 3}, {1, 3}});
    CHECK(comps[2] == Component{{5, 5}});
}

TEST_CASE("fit_box examples")
{
    const std::size_t W = 64;
    std::vector<float> r4(W * W, 4.0f);

    SUBCASE("horizontal segment")
    {
        Component c;
        for (int x = 10; x <= 40; ++x) c.push_back({x, 20});
        const auto b = fit_box(c, r4, W);
        CHECK(b.cx == Approx(25));
        CHECK(b.cy == Approx(20));
        CHECK(b.w == Approx(38));
        CHECK(b.h == Approx(8));
        CHECK(b.alpha == Approx(0));
    }
    SUBCASE("rotated segment")
    {
        const double a = std::numbers::pi / 6;
        const auto px = oracle::rasterize_segment(32 - 15 * std::cos(a), 32 - 15 * std::sin(a),
                                                  32 + 15 * std::cos(a), 32 + 15 * std::sin(a));
        Component c;
        for (auto p : px) c.push_back({p.x, p.y});
        const auto b = fit_box(c, r4, W);
        CHECK(b.alpha * 180 / std::numbers::pi == Approx(30).epsilon(0.03));
        CHECK(b.h == Approx(8));
        CHECK(b.w == Approx(38).epsilon(0.05));
        CHECK(b.cx == Approx(32).epsilon(0.02));
        CHECK(b.cy == Approx(32).epsilon(0.02));
    }
    SUBCASE("single pixel")
    {
        std::vector<float> r5(W * W, 5.0f);
        const auto b = fit_box({{7, 9}}, r5, W);
        CHECK(b.cx == Approx(7));
        CHECK(b.cy == Approx(9));
        CHECK(b.w == Approx(10));
        CHECK(b.h == Approx(10));
        CHECK(b.alpha == Approx(0));
    }
    SUBCASE("errors")
    {
        CHECK_THROWS_AS(fit_box({}, r4, W), std::invalid_argument);
        std::vector<float> r0(W * W, 0.0f);
        CHECK_THROWS_AS(fit_box({{1, 1}}, r0, W), DegenerateBoxError);
    }
}

TEST_CASE("boxes_from_maps end to end and map file round trip")
{
    auto maps = filled(40, 20, 0, 0, 3.0f);
    for (int x = 5; x <= 30; ++x) {
        const std::size_t i = 10 * 40 + static_cast<std::size_t>(x);
        maps.tr[i] = 0.9f;
        maps.tcl[i] = 0.9f;
    }
    maps.tr[2 * 40 + 36] = maps.tcl[2 * 40 + 36] = 0.9f;
    maps.radius[2 * 40 + 36] = 0.0f;  // zero radius: skipped

    const auto boxes = boxes_from_maps(maps);
    REQUIRE(boxes.size() == 1);
    CHECK(boxes[0].cx == Approx(17.5));
    CHECK(boxes[0].w == Approx(25 + 6));

    const auto dir = std::filesystem::temp_directory_path() / "pgt_maps_test";
    std::filesystem::create_directories(dir);
    write_maps(maps, dir / "img.json");
    const auto back = read_maps(dir / "img.json");
    CHECK(back.width == maps.width);
    CHECK(back.tr == maps.tr);
    CHECK(back.radius == maps.radius);

    std::filesystem::resize_file(dir / "img.bin", 10);
    CHECK_THROWS_AS(read_maps(dir / "img.json"), FormatError);
    CHECK_THROWS_AS(read_maps(dir / "missing.json"), IoError);
    std::filesystem::remove_all(dir);
}
