#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pgt/geometry.hpp"
#include "pgt/matching.hpp"
#include "pgt/recognizer.hpp"

namespace pgt {

/// Constants of the box neighbourhood. c is in characters; the others are
/// dimensionless except o, which is in horizontal search units.
struct SearchConstants {
    int c = 7;
    int beta = 2;
    int gamma = 4;
    int delta = 4;
    int kappa = 4;
    int o = 8;

    /// Throws std::invalid_argument unless every constant is positive.
    void validate() const;
};

struct AcceptThresholds {
    double theta = 0.35;
    std::size_t lambda = 4;
};

enum class Direction { left, right };

/// All offsets swept on one side: t in [-floor(kappa/gamma), floor(2 kappa/beta)]
/// and the side's offset in [-c·delta, c·delta]; the other side stays 0.
std::vector<BoxOffset> candidate_offsets(Direction direction, const SearchConstants& consts);

/// Offset components of the minimal-distance candidates of one direction.
struct DirectionalResult {
    std::set<int> t;
    std::set<int> l;
    std::set<int> r;
    std::size_t best_distance = 0;
    std::size_t evaluated = 0;
};

/// Top offset and fractional side offset chosen from one direction.
struct SideChoice {
    double t = 0.0;
    double side = 0.0;
};

/// t = min T and side = (min S + min(max S, o + min S)) / 2, where S is the
/// set of side offsets (L for the left direction, R for the right).
SideChoice choose_side(const DirectionalResult& result, Direction direction, int o);

/// Image a detection belongs to. Without a size only the overlap test is used
/// to discard candidates.
struct ImageRef {
    std::string id;
    std::optional<ImageSize> size;
};

struct SearchOutcome {
    OrientedBox box;
    std::string text;
    /// Candidate boxes sent to the backend, excluding the final re-read.
    std::size_t candidate_recognitions = 0;
    /// All boxes sent to the backend, including the final re-read.
    std::size_t total_recognitions = 0;
    bool short_circuit = false;
};

/// Edit-distance guided neighbourhood search around one detection.
///
/// A detection already reading `label` is returned unchanged without any
/// backend call. Otherwise the left and right sides are swept independently
/// in units of (w / |text|) / delta horizontally and h / kappa vertically,
/// candidates leaving the image or not overlapping the detection are dropped,
/// and the survivors of each side are read in one batch. The composed box is
/// clipped to the image if necessary and read once more for its final text.
SearchOutcome find_optimal_box(const ImageRef& image, const Detection& det, const std::string& label,
                               RecognitionBackend& backend, const SearchConstants& consts);

enum class AcceptKind { exact, close, reject };

struct AcceptDecision {
    AcceptKind kind = AcceptKind::reject;
    double d = 1.0;
};

/// exact when the canon() strings are equal; close when the normalized
/// distance is below theta, the recognized text is longer than lambda and the
/// first and last characters agree; reject otherwise.
AcceptDecision is_pgt(const std::string& recognized, const std::string& label,
                      const AcceptThresholds& thresholds = {});

const char* to_string(AcceptKind kind);

}  // namespace pgt
