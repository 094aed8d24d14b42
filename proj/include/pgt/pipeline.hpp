#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pgt/matching.hpp"
#include "pgt/neighbourhood.hpp"
#include "pgt/recognizer.hpp"
#include "pgt/weak_labels.hpp"

namespace pgt {

/// An accepted (box, weak label) pair. The label is always the weak label,
/// also for close accepts; final_text keeps what the backend actually read.
struct PgtRecord {
    std::string image_id;
    OrientedBox box;
    std::string label;
    std::string final_text;
    double d = 0.0;
    AcceptKind accept_kind = AcceptKind::exact;
    int iteration = 1;

    bool operator==(const PgtRecord&) const = default;
};

struct ImageCounts {
    std::size_t detections = 0;
    std::size_t proposals = 0;
    std::size_t exact = 0;
    std::size_t close = 0;
    std::size_t rejects = 0;
    std::size_t recognitions = 0;

    ImageCounts& operator+=(const ImageCounts& o);
};

struct ImageResult {
    std::vector<PgtRecord> records;
    ImageCounts counts;
};

/// Mines one image: assign weak labels, search each proposal's neighbourhood
/// and keep the proposals whose final reading passes is_pgt.
ImageResult pgt_gen(const ImageRef& image, const std::vector<Detection>& detections,
                    const WeakLabelSet& labels, RecognitionBackend& backend,
                    const SearchConstants& consts, const AcceptThresholds& thresholds, Rng& rng,
                    int iteration = 1);

/// Keeps only distance-0 proposals with the detection box; no backend calls.
std::vector<PgtRecord> exact_match_baseline(const std::string& image_id,
                                            const std::vector<Detection>& detections,
                                            const WeakLabelSet& labels, Rng& rng,
                                            int iteration = 1);

/// Pseudo-labelling baseline: detections with confidence strictly above t,
/// labelled with their own transcription.
std::vector<PgtRecord> confidence_filter(const std::string& image_id,
                                         const std::vector<Detection>& detections, double t,
                                         int iteration = 1);

inline constexpr std::array<double, 4> kConfidencePresets = {0.99, 0.90, 0.80, 0.50};

// Iterative mining ------------------------------------------------------------

struct ImageItem {
    std::string image_id;
    std::optional<ImageSize> size;
    std::vector<Detection> detections;
    std::vector<AnnotationText> texts;
};

using Dataset = std::vector<ImageItem>;

struct IterationStats {
    int iteration = 1;
    std::size_t images = 0;
    std::size_t failed_images = 0;
    ImageCounts counts;
    /// exact + close accepts of the full method.
    std::size_t mined_with_ns = 0;
    /// Records the exact-match baseline keeps on the same detections.
    std::size_t mined_without_ns = 0;

    std::ptrdiff_t delta() const
    {
        return static_cast<std::ptrdiff_t>(mined_with_ns) -
               static_cast<std::ptrdiff_t>(mined_without_ns);
    }
};

struct ImageFailure {
    int iteration = 1;
    std::string image_id;
    std::string message;
};

struct MiningStats {
    std::vector<IterationStats> iterations;
    std::vector<ImageFailure> failures;
};

struct MiningOptions {
    std::uint64_t seed = 0;
    SearchConstants consts;
    AcceptThresholds thresholds;
    std::size_t k_max = kDefaultMaxK;
    std::size_t parallelism = 1;
    int max_iters = 1;
    /// Minimal increase of the mined count to run another iteration; defaults
    /// to 1% of the previous iteration's count.
    std::optional<std::size_t> stop_delta;
    /// Re-read every detection box with the iteration's backend before
    /// mining, as an improved recognizer would change the E2E output.
    bool rerecognize_detections = false;
    /// Receives one line per non-fatal per-image failure.
    std::function<void(const std::string&)> log;
};

using BackendFactory = std::function<std::shared_ptr<RecognitionBackend>(int iteration)>;

struct IterationOutput {
    std::vector<PgtRecord> pgt;
    std::vector<PgtRecord> baseline;
    IterationStats stats;
    std::vector<ImageFailure> failures;
};

/// One full pass over the dataset. Records are in dataset order regardless of
/// the degree of parallelism.
IterationOutput mine_once(const Dataset& dataset, RecognitionBackend& backend,
                          const MiningOptions& options, int iteration);

struct MiningResult {
    std::vector<std::vector<PgtRecord>> pgt;
    std::vector<std::vector<PgtRecord>> baseline;
    MiningStats stats;
};

/// Re-mines the dataset from scratch once per iteration with backend(i),
/// stopping early when the mined count grows by less than stop_delta.
MiningResult mine_iterations(const Dataset& dataset, const BackendFactory& backend_factory,
                             const MiningOptions& options);

}  // namespace pgt
