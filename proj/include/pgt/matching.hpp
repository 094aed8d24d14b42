#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "pgt/geometry.hpp"
#include "pgt/random.hpp"
#include "pgt/text.hpp"
#include "pgt/weak_labels.hpp"

namespace pgt {

/// A detector box with its transcription and recognition confidence.
struct Detection {
    OrientedBox box;
    std::string text;
    double confidence = 0.0;

    bool operator==(const Detection&) const = default;
};

/// A detection paired with its assigned weak label.
struct Proposal {
    std::size_t detection_index = 0;
    Detection detection;
    std::string label;
    std::size_t distance = 0;
};

/// Unit-cost edit distance over Unicode scalar values.
std::size_t levenshtein(std::u32string_view a, std::u32string_view b);
std::size_t levenshtein(std::string_view a, std::string_view b);

/// levenshtein(a, b) / max(|a|, |b|); 0 when both are empty.
double normalized_distance(std::string_view a, std::string_view b);

/// Mutual-nearest assignment of detections to weak labels.
///
/// A detection is linked to the labels at its minimal distance and a label to
/// the detections at its minimal distance; a pairing survives when it is
/// linked both ways and its normalized distance is below 1. Among the
/// surviving pairings of one detection a distance-0 pairing wins outright,
/// otherwise one is drawn uniformly with `rng`. Distances are taken on canon()
/// strings.
std::vector<Proposal> assign_weak(const std::vector<Detection>& detections,
                                  const WeakLabelSet& labels, Rng& rng);

}  // namespace pgt
