#include "pgt/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pgt {

namespace {

constexpr double kEdgeTolerance = 1e-9;

double cross(Point o, Point a, Point b)
{
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

double signed_area(const std::vector<Point>& poly)
{
    double s = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point& p = poly[i];
        const Point& q = poly[(i + 1) % poly.size()];
        s += p.x * q.y - q.x * p.y;
    }
    return 0.5 * s;
}

// Sutherland-Hodgman against a convex clipper.
std::vector<Point> clip_convex(std::vector<Point> subject, const std::vector<Point>& clipper)
{
    const double orient = signed_area(clipper) >= 0.0 ? 1.0 : -1.0;
    for (std::size_t e = 0; e < clipper.size() && !subject.empty(); ++e) {
        const Point a = clipper[e];
        const Point b = clipper[(e + 1) % clipper.size()];
        auto side = [&](Point p) { return orient * cross(a, b, p); };

        std::vector<Point> out;
        out.reserve(subject.size() + 2);
        for (std::size_t i = 0; i < subject.size(); ++i) {
            const Point cur = subject[i];
            const Point prev = subject[(i + subject.size() - 1) % subject.size()];
            const double sc = side(cur);
            const double sp = side(prev);
            if (sc >= 0.0) {
                if (sp < 0.0) {
                    const double t = sp / (sp - sc);
                    out.push_back({prev.x + t * (cur.x - prev.x), prev.y + t * (cur.y - prev.y)});
                }
                out.push_back(cur);
            } else if (sp >= 0.0) {
                const double t = sp / (sp - sc);
                out.push_back({prev.x + t * (cur.x - prev.x), prev.y + t * (cur.y - prev.y)});
            }
        }
        subject = std::move(out);
    }
    return subject;
}

// Box described by its edge positions in the local (axis, up) frame around a
// fixed origin. s0/s1 are the left/right edges, v0/v1 the bottom/top edges.
struct LocalBox {
    Point origin;
    Point u;
    Point n;
    double s0, s1, v0, v1;

    Point at(double s, double v) const
    {
        return {origin.x + u.x * s + n.x * v, origin.y + u.y * s + n.y * v};
    }
};

// Interval of t for which (base + k·t) stays in [0, limit].
bool feasible_interval(double base, double k, double limit, double& lo, double& hi)
{
    if (std::abs(k) < 1e-15) {
        return base >= -kEdgeTolerance && base <= limit + kEdgeTolerance;
    }
    double a = (0.0 - base) / k;
    double b = (limit - base) / k;
    if (a > b) std::swap(a, b);
    lo = std::max(lo, a);
    hi = std::min(hi, b);
    return lo <= hi;
}

// Moves one edge inward as little as possible so that its two corners fit.
// `edge` points at the edge coordinate; `o0`/`o1` are the fixed coordinates of
// its two corners in the perpendicular direction. `inward` is +1 when
// shrinking means increasing the coordinate. A move that would cross
// `opposite` is skipped.
void pull_edge(LocalBox& box, double* edge, double opposite, bool along_axis, double o0, double o1,
               double inward, const ImageSize& size)
{
    double lo = -1e300;
    double hi = 1e300;
    for (double o : {o0, o1}) {
        const Point base = along_axis ? box.at(0.0, o) : box.at(o, 0.0);
        const Point dir = along_axis ? box.u : box.n;
        if (!feasible_interval(base.x, dir.x, size.width, lo, hi)) return;
        if (!feasible_interval(base.y, dir.y, size.height, lo, hi)) return;
    }
    if (lo > hi) return;
    if (inward > 0) {
        if (*edge < lo && lo < opposite) *edge = lo;
    } else {
        if (*edge > hi && hi > opposite) *edge = hi;
    }
}

}  // namespace

double normalize_angle(double alpha)
{
    constexpr double pi = std::numbers::pi;
    double a = std::fmod(alpha, pi);
    if (a <= -pi / 2) a += pi;
    if (a > pi / 2) a -= pi;
    return a;
}

OrientedBox::OrientedBox(double cx_, double cy_, double w_, double h_, double alpha_)
    : cx(cx_), cy(cy_), w(w_), h(h_), alpha(normalize_angle(alpha_))
{
    if (!(w > 0.0) || !(h > 0.0)) {
        throw std::invalid_argument("oriented box needs positive width and height");
    }
    if (!std::isfinite(cx) || !std::isfinite(cy) || !std::isfinite(w) || !std::isfinite(h) ||
        !std::isfinite(alpha)) {
        throw std::invalid_argument("oriented box needs finite parameters");
    }
}

Point OrientedBox::axis() const { return {std::cos(alpha), std::sin(alpha)}; }

Point OrientedBox::up() const { return {std::sin(alpha), -std::cos(alpha)}; }

std::array<Point, 4> OrientedBox::corners() const
{
    const Point u = axis();
    const Point n = up();
    const double hw = w / 2;
    const double hh = h / 2;
    auto at = [&](double s, double v) {
        return Point{cx + u.x * s + n.x * v, cy + u.y * s + n.y * v};
    };
    return {at(-hw, hh), at(hw, hh), at(hw, -hh), at(-hw, -hh)};
}

std::optional<OrientedBox> try_apply_offset(const OrientedBox& box, const OffsetF& off,
                                            double char_unit, double vert_unit)
{
    const double dl = off.l * char_unit;
    const double dr = off.r * char_unit;
    const double dt = off.t * vert_unit;
    const double w = box.w + dl + dr;
    const double h = box.h + dt;
    if (!(w > 0.0) || !(h > 0.0)) return std::nullopt;

    const Point u = box.axis();
    const Point n = box.up();
    const double ds = (dr - dl) / 2;
    const double dv = dt / 2;
    OrientedBox out;
    out.cx = box.cx + u.x * ds + n.x * dv;
    out.cy = box.cy + u.y * ds + n.y * dv;
    out.w = w;
    out.h = h;
    out.alpha = box.alpha;
    return out;
}

OrientedBox apply_offset(const OrientedBox& box, const OffsetF& off, double char_unit,
                         double vert_unit)
{
    if (!(char_unit > 0.0) || !(vert_unit > 0.0)) {
        throw std::invalid_argument("offset units must be positive");
    }
    auto out = try_apply_offset(box, off, char_unit, vert_unit);
    if (!out) throw DegenerateBoxError("offset collapses the box");
    return *out;
}

OrientedBox apply_offset(const OrientedBox& box, const BoxOffset& off, double char_unit,
                         double vert_unit)
{
    return apply_offset(box, OffsetF{double(off.t), double(off.l), double(off.r)}, char_unit,
                        vert_unit);
}

bool within_image(const OrientedBox& box, double img_w, double img_h)
{
    for (const Point& p : box.corners()) {
        if (p.x < -kEdgeTolerance || p.y < -kEdgeTolerance) return false;
        if (p.x > img_w + kEdgeTolerance || p.y > img_h + kEdgeTolerance) return false;
    }
    return true;
}

bool overlaps(const OrientedBox& a, const OrientedBox& b)
{
    const auto ca = a.corners();
    const auto cb = b.corners();
    for (const Point axis : {a.axis(), a.up(), b.axis(), b.up()}) {
        double amin = 1e300, amax = -1e300, bmin = 1e300, bmax = -1e300;
        for (const Point& p : ca) {
            const double d = p.x * axis.x + p.y * axis.y;
            amin = std::min(amin, d);
            amax = std::max(amax, d);
        }
        for (const Point& p : cb) {
            const double d = p.x * axis.x + p.y * axis.y;
            bmin = std::min(bmin, d);
            bmax = std::max(bmax, d);
        }
        if (std::max(amin, bmin) >= std::min(amax, bmax)) return false;
    }
    return true;
}

double intersection_area(const OrientedBox& a, const OrientedBox& b)
{
    const auto ca = a.corners();
    const auto cb = b.corners();
    std::vector<Point> pa(ca.begin(), ca.end());
    std::vector<Point> pb(cb.begin(), cb.end());
    const auto poly = clip_convex(pa, pb);
    if (poly.size() < 3) return 0.0;
    return std::abs(signed_area(poly));
}

double iou(const OrientedBox& a, const OrientedBox& b)
{
    const double inter = intersection_area(a, b);
    const double uni = a.area() + b.area() - inter;
    return uni > 0.0 ? inter / uni : 0.0;
}

std::optional<OrientedBox> clip_to_image(const OrientedBox& box, const ImageSize& size)
{
    if (within_image(box, size)) return box;

    LocalBox lb{{box.cx, box.cy}, box.axis(), box.up(), -box.w / 2, box.w / 2, -box.h / 2,
                box.h / 2};
    auto current = [&]() -> std::optional<OrientedBox> {
        const double w = lb.s1 - lb.s0;
        const double h = lb.v1 - lb.v0;
        if (!(w > 0.0) || !(h > 0.0)) return std::nullopt;
        const Point c = lb.at((lb.s0 + lb.s1) / 2, (lb.v0 + lb.v1) / 2);
        OrientedBox out;
        out.cx = c.x;
        out.cy = c.y;
        out.w = w;
        out.h = h;
        out.alpha = box.alpha;
        return out;
    };

    for (int use_bottom = 0; use_bottom < 2; ++use_bottom) {
        for (int round = 0; round < 8; ++round) {
            pull_edge(lb, &lb.s0, lb.s1, true, lb.v0, lb.v1, +1, size);
            pull_edge(lb, &lb.s1, lb.s0, true, lb.v0, lb.v1, -1, size);
            pull_edge(lb, &lb.v1, lb.v0, false, lb.s0, lb.s1, -1, size);
            if (use_bottom) pull_edge(lb, &lb.v0, lb.v1, false, lb.s0, lb.s1, +1, size);
            auto out = current();
            if (!out) return std::nullopt;
            if (within_image(*out, size)) return out;
        }
    }

    // Edge pulls can stall near image corners; shrink about the center instead.
    const Point c{box.cx, box.cy};
    if (c.x <= 0.0 || c.y <= 0.0 || c.x >= size.width || c.y >= size.height) return std::nullopt;
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 60; ++i) {
        const double k = (lo + hi) / 2;
        OrientedBox probe = box;
        probe.w = box.w * k;
        probe.h = box.h * k;
        (within_image(probe, size) ? lo : hi) = k;
    }
    if (!(lo > 0.0)) return std::nullopt;
    OrientedBox out = box;
    out.w = box.w * lo;
    out.h = box.h * lo;
    return out;
}

}  // namespace pgt
