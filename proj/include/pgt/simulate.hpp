#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pgt/io.hpp"
#include "pgt/recognizer.hpp"

namespace pgt {

/// Parameters of the synthetic corpus generator. Perturbations are drawn
/// independently per edge: left/right by up to h_jitter_chars character widths,
/// top/bottom by up to v_jitter_frac of the instance height (positive values
/// extend the box).
struct SimulationConfig {
    std::uint64_t seed = 1;
    std::size_t n_scenes = 500;
    std::size_t instances_min = 2;
    std::size_t instances_max = 4;
    double image_width = 1024;
    double image_height = 768;
    double char_width_min = 8;
    double char_width_max = 16;
    double max_angle_deg = 10;
    double h_jitter_chars = 2;
    double v_jitter_frac = 0.25;
    double drop_prob = 0;
    /// Substitution noise of the recognizer producing the detection texts.
    double p_sub = 0.02;
    NoiseModel noise;
    /// Probability that a scene gets one background detection.
    double false_positive_prob = 0.5;
    /// Probability that an instance is missing from the weak annotations.
    double missing_annotation_prob = 0.05;
    /// Weak texts that do not appear in the image.
    std::size_t distractor_texts = 1;
    /// Probability that an instance holds two words.
    double multiword_prob = 0.15;
    /// Probability that an annotation text is merged with the next one.
    double group_texts_prob = 0.2;
    /// Probability that an annotation text gets an unreadable '*' word.
    double unreadable_prob = 0.05;
    /// Probability that an annotation text is prefixed with "the".
    double stopword_prob = 0.05;
    /// Probability that an instance word is capitalized.
    double capitalize_prob = 0.3;
    /// Word list; the built-in list is used when empty.
    std::vector<std::string> words;
};

struct SimCorpus {
    std::vector<SceneSpec> scenes;
    std::vector<ImageDetections> detections;
    std::vector<ImageAnnotations> annotations;
};

const std::vector<std::string>& builtin_words();

SimCorpus simulate_corpus(const SimulationConfig& config);

/// Detection box from a true box with edge offsets in pixels (positive
/// extends). Width and height are kept at least 1 px.
OrientedBox perturb_box(const OrientedBox& box, double left, double right, double top,
                        double bottom);

}  // namespace pgt
