#include "pgt/neighbourhood.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "pgt/text.hpp"

namespace pgt {

void SearchConstants::validate() const
{
    if (c <= 0 || beta <= 0 || gamma <= 0 || delta <= 0 || kappa <= 0 || o <= 0) {
        throw std::invalid_argument("search constants must all be positive");
    }
}

std::vector<BoxOffset> candidate_offsets(Direction direction, const SearchConstants& consts)
{
    consts.validate();
    const int t_lo = -(consts.kappa / consts.gamma);
    const int t_hi = (2 * consts.kappa) / consts.beta;
    const int side = consts.c * consts.delta;

    std::vector<BoxOffset> out;
    out.reserve(static_cast<std::size_t>((t_hi - t_lo + 1) * (2 * side + 1)));
    for (int t = t_lo; t <= t_hi; ++t) {
        for (int s = -side; s <= side; ++s) {
            if (direction == Direction::left) {
                out.push_back({t, s, 0});
            } else {
                out.push_back({t, 0, s});
            }
        }
    }
    return out;
}

SideChoice choose_side(const DirectionalResult& result, Direction direction, int o)
{
    const std::set<int>& s = direction == Direction::left ? result.l : result.r;
    if (result.t.empty() || s.empty()) return {};
    const double lo = *s.begin();
    const double hi = *s.rbegin();
    SideChoice out;
    out.t = *result.t.begin();
    out.side = (lo + std::min(hi, o + lo)) / 2;
    return out;
}

namespace {

DirectionalResult sweep(const ImageRef& image, const Detection& det,
                        const std::u32string& target, RecognitionBackend& backend,
                        const SearchConstants& consts, Direction direction, double char_unit,
                        double vert_unit)
{
    std::vector<BoxOffset> kept;
    std::vector<OrientedBox> boxes;
    for (const BoxOffset& off : candidate_offsets(direction, consts)) {
        auto b = try_apply_offset(det.box, OffsetF{double(off.t), double(off.l), double(off.r)},
                                  char_unit, vert_unit);
        if (!b) continue;
        if (image.size && !within_image(*b, *image.size)) continue;
        if (!overlaps(*b, det.box)) continue;
        kept.push_back(off);
        boxes.push_back(*b);
    }

    DirectionalResult out;
    out.evaluated = boxes.size();
    if (boxes.empty()) {
        out.t = {0};
        out.l = {0};
        out.r = {0};
        return out;
    }

    const auto results = backend.recognize_batch(image.id, boxes);
    if (results.size() != boxes.size()) {
        throw ProtocolError("backend returned a misaligned batch");
    }
    std::vector<std::size_t> dist(boxes.size());
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (std::size_t i = 0; i < boxes.size(); ++i) {
        dist[i] = levenshtein(utf8_decode(canon(results[i].text)), target);
        best = std::min(best, dist[i]);
    }
    out.best_distance = best;
    for (std::size_t i = 0; i < boxes.size(); ++i) {
        if (dist[i] != best) continue;
        out.t.insert(kept[i].t);
        out.l.insert(kept[i].l);
        out.r.insert(kept[i].r);
    }
    return out;
}

}  // namespace

SearchOutcome find_optimal_box(const ImageRef& image, const Detection& det, const std::string& label,
                               RecognitionBackend& backend, const SearchConstants& consts)
{
    consts.validate();
    if (label.empty()) throw std::invalid_argument("weak label is empty");

    const std::string det_canon = canon(det.text);
    const std::u32string target = utf8_decode(canon(label));
    const std::u32string det_chars = utf8_decode(det_canon);

    SearchOutcome out;
    if (det_chars == target) {
        out.box = det.box;
        out.text = det.text;
        out.short_circuit = true;
        return out;
    }

    const double ch_avg = det.box.w / static_cast<double>(std::max<std::size_t>(1, det_chars.size()));
    const double char_unit = ch_avg / consts.delta;
    const double vert_unit = det.box.h / consts.kappa;

    const auto left =
        sweep(image, det, target, backend, consts, Direction::left, char_unit, vert_unit);
    const auto right =
        sweep(image, det, target, backend, consts, Direction::right, char_unit, vert_unit);
    out.candidate_recognitions = left.evaluated + right.evaluated;

    const SideChoice lc = choose_side(left, Direction::left, consts.o);
    const SideChoice rc = choose_side(right, Direction::right, consts.o);
    const OffsetF final_offset{std::max(lc.t, rc.t), lc.side, rc.side};

    auto composed = try_apply_offset(det.box, final_offset, char_unit, vert_unit);
    OrientedBox box = composed ? *composed : det.box;
    if (image.size && !within_image(box, *image.size)) {
        if (auto clipped = clip_to_image(box, *image.size)) box = *clipped;
    }

    const std::array<OrientedBox, 1> final_box{box};
    const auto final_read = backend.recognize_batch(image.id, final_box);
    if (final_read.size() != 1) throw ProtocolError("backend returned a misaligned batch");

    out.box = box;
    out.text = final_read.front().text;
    out.total_recognitions = out.candidate_recognitions + 1;
    return out;
}

AcceptDecision is_pgt(const std::string& recognized, const std::string& label,
                      const AcceptThresholds& thresholds)
{
    const std::u32string a = utf8_decode(canon(recognized));
    const std::u32string b = utf8_decode(canon(label));
    const std::size_t longest = std::max(a.size(), b.size());
    AcceptDecision out;
    out.d = longest == 0 ? 0.0
                         : static_cast<double>(levenshtein(a, b)) / static_cast<double>(longest);
    if (out.d == 0.0) {
        out.kind = AcceptKind::exact;
        return out;
    }
    const bool close = out.d < thresholds.theta && a.size() > thresholds.lambda && !b.empty() &&
                       a.front() == b.front() && a.back() == b.back();
    out.kind = close ? AcceptKind::close : AcceptKind::reject;
    return out;
}

const char* to_string(AcceptKind kind)
{
    switch (kind) {
    case AcceptKind::exact:
        return "exact";
    case AcceptKind::close:
        return "close";
    case AcceptKind::reject:
        return "reject";
    }
    return "reject";
}

}  // namespace pgt
