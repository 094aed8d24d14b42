#include "pgt/recognizer.hpp"

#include <algorithm>
#include <bit>
#include <cstring>

#include "pgt/text.hpp"

namespace pgt {

namespace {

constexpr std::string_view kSubstitutionAlphabet = "abcdefghijklmnopqrstuvwxyz0123456789";
constexpr double kCoverageTolerance = 1e-9;

// Full coverage up to rounding counts as full.
double snap_full(double coverage)
{
    return coverage + kCoverageTolerance >= 1.0 ? 1.0 : coverage;
}

RecognitionResult distractor(Rng& rng)
{
    RecognitionResult r;
    r.text = kDistractorWords[rng.uniform_index(kDistractorWords.size())];
    r.confidence = rng.uniform(0.01, kDistractorConfidenceMax - 0.01);
    return r;
}

// `pick` is uniform in [0, 35): the replacement never equals the original.
char32_t substitute(char32_t original, std::size_t pick)
{
    char32_t lower = original;
    if (lower >= U'A' && lower <= U'Z') lower = lower - U'A' + U'a';
    std::size_t pos = kSubstitutionAlphabet.size() - 1;
    if (lower < 0x80) {
        const auto found = kSubstitutionAlphabet.find(static_cast<char>(lower));
        if (found != std::string_view::npos) pos = found;
    }
    return static_cast<char32_t>(
        kSubstitutionAlphabet[(pos + 1 + pick) % kSubstitutionAlphabet.size()]);
}

}  // namespace

RecognitionResult sim_recognize(const SceneSpec& scene, const OrientedBox& box,
                                const NoiseModel& noise, Rng& rng)
{
    const TextInstance* best = nullptr;
    double best_area = 0.0;
    for (const auto& inst : scene.instances) {
        const double a = intersection_area(inst.box, box);
        if (a > best_area) {
            best_area = a;
            best = &inst;
        }
    }
    if (best == nullptr) return distractor(rng);

    const OrientedBox& ib = best->box;
    const Point u = ib.axis();
    const Point n = ib.up();
    double s0 = 1e300, s1 = -1e300, v0 = 1e300, v1 = -1e300;
    for (const Point& p : box.corners()) {
        const double dx = p.x - ib.cx;
        const double dy = p.y - ib.cy;
        const double s = dx * u.x + dy * u.y;
        const double v = dx * n.x + dy * n.y;
        s0 = std::min(s0, s);
        s1 = std::max(s1, s);
        v0 = std::min(v0, v);
        v1 = std::max(v1, v);
    }

    const double vcover = std::max(0.0, std::min(v1, ib.h / 2) - std::max(v0, -ib.h / 2)) / ib.h;
    if (vcover + kCoverageTolerance < noise.vconf_floor) return distractor(rng);

    const std::u32string chars = utf8_decode(best->text);
    const double cw = best->char_width;
    const double x0 = -static_cast<double>(chars.size()) * cw / 2;

    std::u32string emitted;
    double coverage_sum = 0.0;
    std::size_t first = chars.size();
    std::size_t last = 0;
    for (std::size_t k = 0; k < chars.size(); ++k) {
        const double a = x0 + static_cast<double>(k) * cw;
        const double b = a + cw;
        const double cov = std::max(0.0, std::min(b, s1) - std::max(a, s0)) / cw;
        if (cov + kCoverageTolerance < noise.coverage_min) continue;
        first = std::min(first, k);
        last = k;
        emitted.push_back(chars[k]);
        coverage_sum += snap_full(std::min(1.0, cov));
    }
    if (emitted.empty()) return distractor(rng);

    // Both draws are consumed for every character so that, for a fixed seed,
    // the substituted positions at a lower p_sub are a subset of those at a
    // higher one.
    std::size_t substituted = 0;
    for (char32_t& c : emitted) {
        if (c == U' ') continue;
        const double u = rng.uniform01();
        const std::size_t pick = rng.uniform_index(kSubstitutionAlphabet.size() - 1);
        if (u < noise.p_sub) {
            c = substitute(c, pick);
            ++substituted;
        }
    }

    const double pad = noise.pad_space_chars * cw;
    const double text_start = x0 + static_cast<double>(first) * cw;
    const double text_end = x0 + static_cast<double>(last + 1) * cw;
    std::u32string out;
    if (s0 <= text_start - pad + kCoverageTolerance) out.push_back(U' ');
    out += emitted;
    if (s1 >= text_end + pad - kCoverageTolerance) out.push_back(U' ');

    // Confidence falls with substitutions, partial characters, truncated
    // reads and partial vertical coverage; a clean full read scores 1.
    const double count = static_cast<double>(emitted.size());
    const double completeness = 0.5 + 0.5 * count / static_cast<double>(chars.size());
    RecognitionResult r;
    r.text = utf8_encode(out);
    r.confidence = ((count - static_cast<double>(substituted)) / count) * (coverage_sum / count) *
                   completeness * snap_full(std::min(1.0, vcover));
    return r;
}

std::uint64_t query_seed(std::uint64_t seed, const std::string& image_id, const OrientedBox& box)
{
    std::uint64_t h = fnv1a(image_id);
    for (double v : {box.cx, box.cy, box.w, box.h, box.alpha}) {
        const auto bits = std::bit_cast<std::uint64_t>(v);
        char bytes[sizeof bits];
        std::memcpy(bytes, &bits, sizeof bits);
        h = fnv1a(std::string_view(bytes, sizeof bytes), h);
    }
    return splitmix64(splitmix64(seed) ^ h);
}

SimulatedBackend::SimulatedBackend(std::vector<SceneSpec> scenes, NoiseModel noise,
                                   std::uint64_t seed)
    : noise_(noise), seed_(seed)
{
    for (auto& s : scenes) {
        std::string id = s.image_id;
        scenes_.insert_or_assign(std::move(id), std::move(s));
    }
}

const SceneSpec& SimulatedBackend::scene(const std::string& image_id) const
{
    auto it = scenes_.find(image_id);
    if (it == scenes_.end()) throw UnknownImageError(image_id);
    return it->second;
}

std::vector<RecognitionResult> SimulatedBackend::recognize_batch(const std::string& image_id,
                                                                 std::span<const OrientedBox> boxes)
{
    const SceneSpec& s = scene(image_id);
    std::vector<RecognitionResult> out;
    out.reserve(boxes.size());
    for (const auto& b : boxes) {
        Rng rng(query_seed(seed_, image_id, b));
        out.push_back(sim_recognize(s, b, noise_, rng));
    }
    count_recognitions(boxes.size());
    return out;
}

std::optional<ImageSize> SimulatedBackend::image_size(const std::string& image_id) const
{
    auto it = scenes_.find(image_id);
    if (it == scenes_.end()) return std::nullopt;
    return it->second.size();
}

}  // namespace pgt
