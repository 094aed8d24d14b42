#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pgt/geometry.hpp"
#include "pgt/random.hpp"

namespace pgt {

struct RecognitionResult {
    std::string text;
    double confidence = 0.0;

    bool operator==(const RecognitionResult&) const = default;
};

/// Base of every failure raised by a recognition backend. The pipeline treats
/// these as per-image errors.
class BackendError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnknownImageError : public BackendError {
public:
    explicit UnknownImageError(const std::string& image_id)
        : BackendError("unknown image id '" + image_id + "'")
    {
    }
};

class ProtocolError : public BackendError {
public:
    using BackendError::BackendError;
};

class TransportError : public BackendError {
public:
    using BackendError::BackendError;
};

/// Recognizes the text inside boxes of one image.
class RecognitionBackend {
public:
    virtual ~RecognitionBackend() = default;

    /// One result per box, order-aligned.
    virtual std::vector<RecognitionResult> recognize_batch(const std::string& image_id,
                                                           std::span<const OrientedBox> boxes) = 0;

    /// Image dimensions, if the backend knows them.
    virtual std::optional<ImageSize> image_size(const std::string& /*image_id*/) const
    {
        return std::nullopt;
    }

    /// True if recognize_batch may be called from several threads at once.
    virtual bool concurrent() const { return false; }

    /// Total number of boxes recognized so far.
    std::uint64_t recognitions() const { return recognitions_.load(); }

protected:
    void count_recognitions(std::size_t n) { recognitions_ += n; }

private:
    std::atomic<std::uint64_t> recognitions_{0};
};

// Synthetic scenes ----------------------------------------------------------

/// A piece of text laid out with uniform character width, centered along the
/// axis of its box.
struct TextInstance {
    std::string text;
    OrientedBox box;
    double char_width = 1.0;

    bool operator==(const TextInstance&) const = default;
};

struct SceneSpec {
    std::string image_id;
    double width = 0.0;
    double height = 0.0;
    std::vector<TextInstance> instances;

    ImageSize size() const { return {width, height}; }
    bool operator==(const SceneSpec&) const = default;
};

struct NoiseModel {
    /// Per-character substitution probability.
    double p_sub = 0.0;
    /// Fraction of a character's width that must be covered to be emitted.
    double coverage_min = 0.5;
    /// Horizontal slack beyond the emitted text, in character widths, that
    /// produces a boundary space.
    double pad_space_chars = 0.5;
    /// Minimal covered fraction of the instance height to read anything.
    double vconf_floor = 0.5;
};

inline constexpr std::array<const char*, 4> kDistractorWords = {"the", "on", "in", "at"};
inline constexpr double kDistractorConfidenceMax = 0.2;

/// Closed-form recognizer over a synthetic scene.
///
/// The query reads the instance it intersects most. Characters whose extent
/// along the instance axis is covered by at least coverage_min are emitted,
/// each substituted with probability p_sub. A boundary space is added on each
/// side where the query reaches pad_space beyond the emitted text. Boxes over
/// background, boxes covering too little of the text height and boxes that
/// emit no characters read a short distractor word with confidence below 0.2.
/// Otherwise confidence is 1 for a clean full read and drops with
/// substitutions, partly covered characters, truncation and vertical coverage.
RecognitionResult sim_recognize(const SceneSpec& scene, const OrientedBox& box,
                                const NoiseModel& noise, Rng& rng);

/// Seed used by SimulatedBackend for one (image, box) query.
std::uint64_t query_seed(std::uint64_t seed, const std::string& image_id, const OrientedBox& box);

/// Backend over a set of synthetic scenes. Results depend only on
/// (scene, box, noise, seed), never on call order.
class SimulatedBackend : public RecognitionBackend {
public:
    SimulatedBackend(std::vector<SceneSpec> scenes, NoiseModel noise, std::uint64_t seed);

    std::vector<RecognitionResult> recognize_batch(const std::string& image_id,
                                                   std::span<const OrientedBox> boxes) override;
    std::optional<ImageSize> image_size(const std::string& image_id) const override;
    bool concurrent() const override { return true; }

    const SceneSpec& scene(const std::string& image_id) const;
    const NoiseModel& noise() const { return noise_; }

private:
    std::map<std::string, SceneSpec> scenes_;
    NoiseModel noise_;
    std::uint64_t seed_;
};

}  // namespace pgt
