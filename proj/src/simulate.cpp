#include "pgt/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>

#include "pgt/text.hpp"

namespace pgt {

const std::vector<std::string>& builtin_words()
{
    static const std::vector<std::string> words = {
        "cartoon",  "street",   "market",   "coffee",   "garden",   "bakery",   "station",
        "library",  "theatre",  "cancer",   "career",   "holmes",   "sherlock", "baker",
        "london",   "paris",    "berlin",   "prague",   "vienna",   "madrid",   "lisbon",
        "museum",   "gallery",  "hotel",    "hostel",   "pharmacy", "hospital", "school",
        "college",  "academy",  "bridge",   "tunnel",   "harbour",  "airport",  "parking",
        "exit",     "entrance", "open",     "closed",   "sale",     "discount", "fresh",
        "organic",  "pizza",    "pasta",    "burger",   "noodles",  "sushi",    "grill",
        "kitchen",  "dinner",   "lunch",    "breakfast","espresso", "latte",    "bistro",
        "tavern",   "saloon",   "barber",   "salon",    "fashion",  "boutique", "jewelry",
        "florist",  "bookshop", "stationery","hardware","plumbing", "electric", "garage",
        "motors",   "tires",    "repair",   "service",  "delivery", "express",  "courier",
        "postal",   "office",   "bank",     "insurance","finance",  "capital",  "invest",
        "realty",   "property", "estate",   "rental",   "apartment","house",    "mouse",
        "cottage",  "village",  "county",   "central",  "north",    "south",    "east",
        "west",     "avenue",   "boulevard","square",   "plaza",    "corner",   "junction",
        "highway",  "freeway",  "route",    "road",     "lane",     "drive",    "court",
        "chapel",   "church",   "temple",   "mosque",   "cathedral","abbey",    "castle",
        "palace",   "tower",    "fountain", "statue",   "monument", "memorial", "park",
        "forest",   "meadow",   "river",    "lake",     "ocean",    "island",   "mountain",
        "valley",   "canyon",   "desert",   "glacier",  "volcano",  "summit",   "trail",
        "camping",  "fishing",  "hunting",  "sailing",  "surfing",  "skating",  "cycling",
        "running",  "fitness",  "yoga",     "pilates",  "boxing",   "karate",   "tennis",
        "soccer",   "hockey",   "baseball", "football", "stadium",  "arena",    "cinema",
        "concert",  "festival", "carnival", "circus",   "puzzle",   "mystery",  "history",
        "science",  "physics",  "biology",  "chemistry","algebra",  "geometry", "poetry",
        "novel",    "journal",  "magazine", "gazette",  "herald",   "tribune",  "chronicle",
        "digital",  "software", "network",  "wireless", "mobile",   "computer", "printer",
        "camera",   "studio",   "pictures", "records",  "music",    "guitar",   "piano",
        "violin",   "orchestra","opera",    "ballet",   "dance",    "comedy",   "drama",
        "java",     "python",   "kotlin",   "oracle",   "quantum",  "galaxy",   "planet",
        "rocket",   "shuttle",  "orbit",    "comet",    "meteor",   "eclipse",  "horizon",
        "sunrise",  "sunset",   "midnight", "morning",  "evening",  "winter",   "summer",
        "autumn",   "spring",   "holiday",  "vacation", "journey",  "voyage",   "travel",
        "ticket",   "passport", "luggage",  "border",   "customs",  "embassy",  "council",
        "senate",   "justice",  "liberty",  "freedom",  "harmony",  "balance",  "victory",
        "phoenix",  "dragon",   "tiger",    "falcon",   "eagle",    "wolf",     "bear",
        "fox",      "owl",      "cat",      "dog",      "car",      "bus",      "tram",
        "taxi",     "metro",    "ferry",    "cargo",    "freight",  "depot",    "storage",
        "2024",     "221b",     "no5",      "24h",      "7eleven",  "route66",  "b52",
    };
    return words;
}

OrientedBox perturb_box(const OrientedBox& box, double left, double right, double top,
                        double bottom)
{
    double s0 = -box.w / 2 - left;
    double s1 = box.w / 2 + right;
    double v0 = -box.h / 2 - bottom;
    double v1 = box.h / 2 + top;
    if (s1 - s0 < 1.0) {
        const double m = (s0 + s1) / 2;
        s0 = m - 0.5;
        s1 = m + 0.5;
    }
    if (v1 - v0 < 1.0) {
        const double m = (v0 + v1) / 2;
        v0 = m - 0.5;
        v1 = m + 0.5;
    }
    const Point u = box.axis();
    const Point n = box.up();
    const double ms = (s0 + s1) / 2;
    const double mv = (v0 + v1) / 2;
    OrientedBox out;
    out.cx = box.cx + u.x * ms + n.x * mv;
    out.cy = box.cy + u.y * ms + n.y * mv;
    out.w = s1 - s0;
    out.h = v1 - v0;
    out.alpha = box.alpha;
    return out;
}

namespace {

std::string pick_word(const std::vector<std::string>& words, Rng& rng)
{
    return words[rng.uniform_index(words.size())];
}

std::string capitalized(std::string w)
{
    if (!w.empty() && w[0] >= 'a' && w[0] <= 'z') w[0] = static_cast<char>(w[0] - 'a' + 'A');
    return w;
}

// Half extents of a rotated w × h rectangle along x and y.
std::pair<double, double> rotated_extent(double w, double h, double alpha)
{
    const double c = std::abs(std::cos(alpha));
    const double s = std::abs(std::sin(alpha));
    return {c * w / 2 + s * h / 2, s * w / 2 + c * h / 2};
}

}  // namespace

SimCorpus simulate_corpus(const SimulationConfig& config)
{
    const auto& words = config.words.empty() ? builtin_words() : config.words;
    if (words.empty()) throw std::invalid_argument("word list is empty");
    if (config.instances_min > config.instances_max) {
        throw std::invalid_argument("instances_min exceeds instances_max");
    }

    SimCorpus corpus;
    NoiseModel detect_noise = config.noise;
    detect_noise.p_sub = config.p_sub;
    const std::uint64_t detect_seed = derive_seed(config.seed, "detections");

    for (std::size_t si = 0; si < config.n_scenes; ++si) {
        char id_buf[32];
        std::snprintf(id_buf, sizeof id_buf, "scene_%05zu", si);
        const std::string image_id = id_buf;
        Rng rng(derive_seed(config.seed, image_id));

        SceneSpec scene;
        scene.image_id = image_id;
        scene.width = config.image_width;
        scene.height = config.image_height;

        const std::size_t n_inst =
            config.instances_min + rng.uniform_index(config.instances_max - config.instances_min + 1);
        const double band_h = n_inst > 0 ? scene.height / static_cast<double>(n_inst) : scene.height;
        std::vector<std::vector<std::string>> instance_words;

        for (std::size_t k = 0; k < n_inst; ++k) {
            std::vector<std::string> ws{pick_word(words, rng)};
            if (rng.bernoulli(config.multiword_prob)) ws.push_back(pick_word(words, rng));
            for (auto& w : ws) {
                if (rng.bernoulli(config.capitalize_prob)) w = capitalized(w);
            }
            std::string text = ws[0];
            for (std::size_t i = 1; i < ws.size(); ++i) text += " " + ws[i];

            const double nchars = static_cast<double>(utf8_length(text));
            double cw = rng.uniform(config.char_width_min, config.char_width_max);
            double h = cw * rng.uniform(1.4, 2.0);
            double alpha = rng.uniform(-1.0, 1.0) * config.max_angle_deg * std::numbers::pi / 180.0;

            // Room for the jittered box and the search margin around it.
            auto fits = [&](double cw_, double h_, double a_) {
                const double margin_w = (nchars + 2 * (config.h_jitter_chars + 2)) * cw_;
                const auto [ex, ey] = rotated_extent(margin_w, 2 * h_, a_);
                return std::pair{ex, ey};
            };
            auto [ex, ey] = fits(cw, h, alpha);
            while ((2 * ex > scene.width || 2 * ey > band_h) && cw > 2.0) {
                if (alpha != 0.0) {
                    alpha = 0.0;
                } else {
                    cw *= 0.9;
                    h *= 0.9;
                }
                std::tie(ex, ey) = fits(cw, h, alpha);
            }

            const double cx = rng.uniform(ex, scene.width - ex);
            const double band_top = static_cast<double>(k) * band_h;
            const double cy = rng.uniform(band_top + ey, band_top + band_h - ey);
            scene.instances.push_back({text, OrientedBox(cx, cy, nchars * cw, h, alpha), cw});
            instance_words.push_back(ws);
        }

        // Detections: perturbed true boxes read by the detection-time recognizer.
        ImageDetections dets;
        dets.image_id = image_id;
        dets.size = scene.size();
        auto read = [&](const OrientedBox& b) {
            Rng q(query_seed(detect_seed, image_id, b));
            return sim_recognize(scene, b, detect_noise, q);
        };
        for (const auto& inst : scene.instances) {
            if (rng.bernoulli(config.drop_prob)) continue;
            const double hj = config.h_jitter_chars * inst.char_width;
            const double vj = config.v_jitter_frac * inst.box.h;
            const double left = rng.uniform(-hj, hj);
            const double right = rng.uniform(-hj, hj);
            const double top = rng.uniform(-vj, vj);
            const double bottom = rng.uniform(-vj, vj);
            OrientedBox b = perturb_box(inst.box, left, right, top, bottom);
            if (!within_image(b, scene.size())) {
                if (auto c = clip_to_image(b, scene.size())) b = *c;
            }
            const auto r = read(b);
            dets.detections.push_back({b, r.text, r.confidence});
        }
        if (rng.bernoulli(config.false_positive_prob)) {
            for (int attempt = 0; attempt < 32; ++attempt) {
                const double h = rng.uniform(12, 30);
                const double w = h * rng.uniform(1.5, 4.0);
                const OrientedBox b(rng.uniform(w, scene.width - w), rng.uniform(h, scene.height - h),
                                    w, h, 0.0);
                const bool clear = std::none_of(
                    scene.instances.begin(), scene.instances.end(),
                    [&](const TextInstance& t) { return intersection_area(t.box, b) > 0.0; });
                if (!clear || !within_image(b, scene.size())) continue;
                const auto r = read(b);
                dets.detections.push_back({b, r.text, r.confidence});
                break;
            }
        }

        // Weak annotations.
        std::vector<std::vector<std::string>> texts;
        for (const auto& ws : instance_words) {
            if (rng.bernoulli(config.missing_annotation_prob)) continue;
            texts.push_back(ws);
        }
        std::set<std::string> present;
        for (const auto& ws : instance_words) {
            for (const auto& w : ws) present.insert(canon(w));
        }
        for (std::size_t d = 0; d < config.distractor_texts; ++d) {
            std::string w = pick_word(words, rng);
            for (int retry = 0; retry < 8 && present.contains(canon(w)); ++retry) {
                w = pick_word(words, rng);
            }
            texts.push_back({w});
        }
        // Shuffle so distractors are not always last, then merge neighbours.
        for (std::size_t i = texts.size(); i > 1; --i) {
            std::swap(texts[i - 1], texts[rng.uniform_index(i)]);
        }
        std::vector<std::vector<std::string>> merged;
        for (std::size_t i = 0; i < texts.size(); ++i) {
            if (!merged.empty() && rng.bernoulli(config.group_texts_prob)) {
                auto& last = merged.back();
                last.insert(last.end(), texts[i].begin(), texts[i].end());
            } else {
                merged.push_back(texts[i]);
            }
        }
        for (auto& t : merged) {
            if (rng.bernoulli(config.stopword_prob)) t.insert(t.begin(), "the");
            if (rng.bernoulli(config.unreadable_prob)) {
                t.insert(t.begin() + static_cast<std::ptrdiff_t>(rng.uniform_index(t.size() + 1)),
                         "**");
            }
        }

        ImageAnnotations ann;
        ann.image_id = image_id;
        for (auto& t : merged) ann.texts.emplace_back(std::move(t));

        corpus.scenes.push_back(std::move(scene));
        corpus.detections.push_back(std::move(dets));
        corpus.annotations.push_back(std::move(ann));
    }
    return corpus;
}

}  // namespace pgt
