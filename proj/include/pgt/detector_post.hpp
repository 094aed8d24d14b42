#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "pgt/geometry.hpp"

namespace pgt {

/// Per-pixel detector outputs, row-major, all of width × height.
struct PredictionMaps {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<float> tr;
    std::vector<float> tcl;
    std::vector<float> radius;
    std::vector<float> angle;

    /// Throws std::invalid_argument if a plane does not have width·height values.
    void validate() const;
};

struct Mask {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> bits;

    bool at(std::size_t x, std::size_t y) const { return bits[y * width + x] != 0; }
    std::size_t count() const;
};

struct Pixel {
    int x = 0;
    int y = 0;

    bool operator==(const Pixel&) const = default;
};

using Component = std::vector<Pixel>;

inline constexpr double kDefaultTrThreshold = 0.4;
inline constexpr double kDefaultTclThreshold = 0.7;

/// (tr >= thr_tr) AND (tcl >= thr_tcl).
Mask binarize(const PredictionMaps& maps, double thr_tr = kDefaultTrThreshold,
              double thr_tcl = kDefaultTclThreshold);

/// 8-connected components, ordered by (min y, min x) of each component.
std::vector<Component> connected_components(const Mask& mask);

/// Oriented box from a center-line component: the angle is the direction of
/// the total-least-squares line through the points, the height twice the
/// largest radius, and the width the extent of the projections plus the
/// height. `radius` is the row-major radius plane of width `width`.
OrientedBox fit_box(const Component& component, const std::vector<float>& radius,
                    std::size_t width);

/// binarize + connected_components + fit_box.
std::vector<OrientedBox> boxes_from_maps(const PredictionMaps& maps,
                                         double thr_tr = kDefaultTrThreshold,
                                         double thr_tcl = kDefaultTclThreshold);

/// Map dump: <stem>.bin holds four little-endian float32 planes (tr, tcl,
/// radius, angle) row-major; <stem>.json holds {"width", "height"}.
PredictionMaps read_maps(const std::filesystem::path& sidecar_json);
void write_maps(const PredictionMaps& maps, const std::filesystem::path& sidecar_json);

}  // namespace pgt
