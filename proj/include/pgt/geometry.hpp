#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <vector>

namespace pgt {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Oriented rectangle in image pixel coordinates (x right, y down).
///
/// The text axis is the unit vector (cos alpha, sin alpha); "up" (towards the
/// top edge) is (sin alpha, -cos alpha), so for alpha = 0 the top edge is the
/// one with the smaller y. Alpha is normalized to (-pi/2, pi/2].
struct OrientedBox {
    double cx = 0.0;
    double cy = 0.0;
    double w = 1.0;
    double h = 1.0;
    double alpha = 0.0;

    OrientedBox() = default;
    /// Throws std::invalid_argument when w <= 0 or h <= 0.
    OrientedBox(double cx, double cy, double w, double h, double alpha = 0.0);

    Point axis() const;
    Point up() const;
    /// Corners in order: top-left, top-right, bottom-right, bottom-left.
    std::array<Point, 4> corners() const;
    double area() const { return w * h; }

    bool operator==(const OrientedBox&) const = default;
};

double normalize_angle(double alpha);

class DegenerateBoxError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Integer offset in search units: t on the top edge, l and r on the left and
/// right edges. Positive values extend the box, negative values shrink it.
struct BoxOffset {
    int t = 0;
    int l = 0;
    int r = 0;

    bool operator==(const BoxOffset&) const = default;
};

/// Real-valued offset; the final composed offset of the search is fractional.
struct OffsetF {
    double t = 0.0;
    double l = 0.0;
    double r = 0.0;
};

/// Moves the left/right edges along the text axis by l·char_unit and
/// r·char_unit, and the top edge by t·vert_unit. The bottom edge and the angle
/// stay fixed. Throws DegenerateBoxError if the result has w <= 0 or h <= 0.
OrientedBox apply_offset(const OrientedBox& box, const OffsetF& off, double char_unit,
                         double vert_unit);
OrientedBox apply_offset(const OrientedBox& box, const BoxOffset& off, double char_unit,
                         double vert_unit);

/// Same as apply_offset but returns nullopt for degenerate results.
std::optional<OrientedBox> try_apply_offset(const OrientedBox& box, const OffsetF& off,
                                            double char_unit, double vert_unit);

struct ImageSize {
    double width = 0.0;
    double height = 0.0;

    bool operator==(const ImageSize&) const = default;
};

bool within_image(const OrientedBox& box, double img_w, double img_h);
inline bool within_image(const OrientedBox& box, const ImageSize& size)
{
    return within_image(box, size.width, size.height);
}

/// Separating-axis test; true iff the interiors intersect.
bool overlaps(const OrientedBox& a, const OrientedBox& b);

/// Area of the intersection polygon of two oriented rectangles.
double intersection_area(const OrientedBox& a, const OrientedBox& b);
double iou(const OrientedBox& a, const OrientedBox& b);

/// Pulls the edges of a box in until all corners lie inside the image.
/// Left, right and top are tried first, the bottom edge only if still needed.
/// If edge pulls do not converge the box is shrunk about its center. Returns
/// nullopt when no non-degenerate box remains.
std::optional<OrientedBox> clip_to_image(const OrientedBox& box, const ImageSize& size);

}  // namespace pgt
