#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "pgt/geometry.hpp"
#include "pgt/random.hpp"

using namespace pgt;
using doctest::Approx;

namespace {

void check_box(const OrientedBox& b, double cx, double cy, double w, double h, double alpha)
{
    CHECK(b.cx == Approx(cx));
    CHECK(b.cy == Approx(cy));
    CHECK(b.w == Approx(w));
    CHECK(b.h == Approx(h));
    CHECK(b.alpha == Approx(alpha));
}

}  // namespace

TEST_CASE("oriented box validates and normalizes")
{
    CHECK_THROWS_AS(OrientedBox(0, 0, 0, 1, 0), std::invalid_argument);
    CHECK_THROWS_AS(OrientedBox(0, 0, 1, -1, 0), std::invalid_argument);
    CHECK_THROWS_AS(OrientedBox(0, 0, NAN, 1, 0), std::invalid_argument);
    CHECK_THROWS_AS(OrientedBox(INFINITY, 0, 1, 1, 0), std::invalid_argument);

    const double pi = std::numbers::pi;
    CHECK(OrientedBox(0, 0, 1, 1, pi).alpha == Approx(0.0));
    CHECK(OrientedBox(0, 0, 1, 1, -pi / 2).alpha == Approx(pi / 2));
    CHECK(OrientedBox(0, 0, 1, 1, 3 * pi / 4).alpha == Approx(-pi / 4));
}

TEST_CASE("corners match a direct rotation")
{
    const OrientedBox b(50, 40, 20, 10, 0.3);
    const auto expect = oracle::rotated_corners(50, 40, 20, 10, 0.3);
    const auto got = b.corners();
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(got[i].x == Approx(expect[i].x));
        CHECK(got[i].y == Approx(expect[i].y));
    }
}

TEST_CASE("apply_offset examples")
{
    const OrientedBox b(100, 50, 40, 16, 0);
    SUBCASE("zero offset is identity")
    {
        CHECK(apply_offset(b, BoxOffset{0, 0, 0}, 2.5, 4) == b);
        CHECK(apply_offset(b, BoxOffset{0, 0, 0}, 7.0, 0.5) == b);
    }
    SUBCASE("left extension")
    {
        const auto r = oracle::grow(100, 50, 40, 16, 0, 4 * 2.5, 0);
        check_box(apply_offset(b, BoxOffset{0, 4, 0}, 2.5, 4), r.cx, r.cy, r.w, r.h, 0);
        check_box(apply_offset(b, BoxOffset{0, 4, 0}, 2.5, 4), 95, 50, 50, 16, 0);
    }
    SUBCASE("top extension")
    {
        const auto r = oracle::grow(100, 50, 40, 16, 2 * 4, 0, 0);
        check_box(apply_offset(b, BoxOffset{2, 0, 0}, 2.5, 4), r.cx, r.cy, r.w, r.h, 0);
        check_box(apply_offset(b, BoxOffset{2, 0, 0}, 2.5, 4), 100, 46, 40, 24, 0);
    }
    SUBCASE("shrinks and combined moves agree with hand geometry")
    {
        for (int t : {-1, 0, 3}) {
            for (int l : {-5, 0, 6}) {
                for (int r : {-3, 0, 2}) {
                    const auto want = oracle::grow(100, 50, 40, 16, t * 4.0, l * 2.5, r * 2.5);
                    check_box(apply_offset(b, BoxOffset{t, l, r}, 2.5, 4), want.cx, want.cy, want.w,
                              want.h, 0);
                }
            }
        }
    }
    SUBCASE("collapsing offsets are degenerate")
    {
        CHECK_THROWS_AS(apply_offset(b, BoxOffset{0, -8, -8}, 2.5, 4), DegenerateBoxError);
        CHECK_THROWS_AS(apply_offset(b, BoxOffset{-4, 0, 0}, 2.5, 4), DegenerateBoxError);
        CHECK_FALSE(try_apply_offset(b, OffsetF{0, -8, -8}, 2.5, 4).has_value());
    }
}

TEST_CASE("apply_offset keeps the bottom edge and angle of a rotated box")
{
    const double a = 0.4;
    const OrientedBox b(200, 120, 60, 20, a);
    const OrientedBox g = apply_offset(b, BoxOffset{2, 3, -1}, 2.0, 5.0);
    CHECK(g.alpha == Approx(a));
    CHECK(g.h == Approx(30));
    CHECK(g.w == Approx(60 + 6 - 2));
    // Bottom-left corner moves only along the axis: 3 units of 2px outwards.
    const auto bc = b.corners();
    const auto gc = g.corners();
    CHECK(gc[3].x == Approx(bc[3].x - 6 * std::cos(a)));
    CHECK(gc[3].y == Approx(bc[3].y - 6 * std::sin(a)));
}

TEST_CASE("within_image examples")
{
    CHECK(within_image(OrientedBox(5, 5, 4, 4, 0), 100, 100));
    CHECK_FALSE(within_image(OrientedBox(1, 1, 10, 10, 0), 100, 100));
    CHECK(within_image(OrientedBox(50, 50, 20, 10, std::numbers::pi / 4), 100, 100));
    CHECK(within_image(OrientedBox(50, 50, 100, 100, 0), 100, 100));
    CHECK_FALSE(within_image(OrientedBox(50, 50, 100.1, 100, 0), 100, 100));
}

TEST_CASE("overlaps examples")
{
    const OrientedBox a(0, 0, 2, 2, 0);
    CHECK(overlaps(a, a));
    CHECK_FALSE(overlaps(a, OrientedBox(10, 10, 2, 2, 0)));
    CHECK(overlaps(OrientedBox(0, 0, 4, 4, 0), OrientedBox(3, 0, 4, 4, 0)));
    // Touching edges do not overlap.
    CHECK_FALSE(overlaps(OrientedBox(0, 0, 4, 4, 0), OrientedBox(4, 0, 4, 4, 0)));
    // A diamond near the corner of a square: bounding boxes intersect, shapes do not.
    CHECK_FALSE(overlaps(OrientedBox(0, 0, 2, 2, 0),
                         OrientedBox(2.5, 2.5, 2, 2, std::numbers::pi / 4)));
}

TEST_CASE("overlaps is symmetric and agrees with intersection area")
{
    Rng rng(11);
    for (int i = 0; i < 500; ++i) {
        const OrientedBox a(rng.uniform(0, 40), rng.uniform(0, 40), rng.uniform(1, 20),
                            rng.uniform(1, 20), rng.uniform(-1.5, 1.5));
        const OrientedBox b(rng.uniform(0, 40), rng.uniform(0, 40), rng.uniform(1, 20),
                            rng.uniform(1, 20), rng.uniform(-1.5, 1.5));
        CHECK(overlaps(a, b) == overlaps(b, a));
        const double inter = intersection_area(a, b);
        if (inter > 1e-6) CHECK(overlaps(a, b));
        if (!overlaps(a, b)) CHECK(inter == Approx(0.0));
        CHECK(iou(a, b) == Approx(iou(b, a)));
        CHECK(iou(a, b) >= 0.0);
        CHECK(iou(a, b) <= 1.0 + 1e-12);
    }
}

TEST_CASE("intersection area and iou")
{
    CHECK(intersection_area(OrientedBox(0, 0, 4, 4, 0), OrientedBox(3, 0, 4, 4, 0)) == Approx(4.0));
    CHECK(iou(OrientedBox(0, 0, 4, 4, 0), OrientedBox(0, 0, 4, 4, 0)) == Approx(1.0));
    CHECK(iou(OrientedBox(0, 0, 4, 4, 0), OrientedBox(2, 0, 4, 4, 0)) == Approx(8.0 / 24.0));
    // A square rotated by 90 degrees is the same square.
    CHECK(iou(OrientedBox(5, 5, 4, 4, 0), OrientedBox(5, 5, 4, 4, std::numbers::pi / 2)) ==
          Approx(1.0));
}

TEST_CASE("clip_to_image")
{
    const ImageSize img{100, 100};
    SUBCASE("inside is unchanged")
    {
        const OrientedBox b(50, 50, 20, 10, 0.2);
        CHECK(*clip_to_image(b, img) == b);
    }
    SUBCASE("right overflow pulls in the right edge only")
    {
        const auto c = clip_to_image(OrientedBox(95, 50, 20, 10, 0), img);
        REQUIRE(c);
        check_box(*c, 92.5, 50, 15, 10, 0);
    }
    SUBCASE("top overflow pulls in the top edge, keeping the bottom")
    {
        const auto c = clip_to_image(OrientedBox(50, 3, 20, 10, 0), img);
        REQUIRE(c);
        check_box(*c, 50, 4, 20, 8, 0);
    }
    SUBCASE("rotated overflow ends up inside with the same angle")
    {
        const auto c = clip_to_image(OrientedBox(90, 50, 40, 10, 0.3), img);
        REQUIRE(c);
        CHECK(within_image(*c, img));
        CHECK(c->alpha == Approx(0.3));
    }
    SUBCASE("box entirely outside cannot be clipped")
    {
        CHECK_FALSE(clip_to_image(OrientedBox(150, 150, 10, 10, 0), img).has_value());
    }
}

TEST_CASE("clip_to_image keeps boxes centered in the image")
{
    const ImageSize img{200, 120};
    Rng rng(23);
    for (int i = 0; i < 2000; ++i) {
        const OrientedBox b(rng.uniform(5, 195), rng.uniform(5, 115), rng.uniform(4, 160),
                            rng.uniform(4, 40), rng.uniform(-1.2, 1.2));
        const auto c = clip_to_image(b, img);
        REQUIRE(c);
        CHECK(within_image(*c, img));
        CHECK(c->alpha == Approx(b.alpha));
        CHECK(c->w <= b.w + 1e-9);
        CHECK(c->h <= b.h + 1e-9);
    }
}
