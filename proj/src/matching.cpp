#include "pgt/matching.hpp"

#include <algorithm>
#include <limits>

namespace pgt {

std::size_t levenshtein(std::u32string_view a, std::u32string_view b)
{
    if (a.size() < b.size()) std::swap(a, b);
    std::vector<std::size_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t up = row[j];
            const std::size_t sub = diag + (a[i - 1] == b[j - 1] ? 0 : 1);
            row[j] = std::min({up + 1, row[j - 1] + 1, sub});
            diag = up;
        }
    }
    return row[b.size()];
}

std::size_t levenshtein(std::string_view a, std::string_view b)
{
    return levenshtein(utf8_decode(a), utf8_decode(b));
}

double normalized_distance(std::string_view a, std::string_view b)
{
    const auto ua = utf8_decode(a);
    const auto ub = utf8_decode(b);
    const std::size_t longest = std::max(ua.size(), ub.size());
    if (longest == 0) return 0.0;
    return static_cast<double>(levenshtein(ua, ub)) / static_cast<double>(longest);
}

std::vector<Proposal> assign_weak(const std::vector<Detection>& detections,
                                  const WeakLabelSet& labels, Rng& rng)
{
    std::vector<Proposal> out;
    const std::size_t n = detections.size();
    const std::size_t m = labels.size();
    if (n == 0 || m == 0) return out;

    std::vector<std::u32string> det_text(n);
    for (std::size_t i = 0; i < n; ++i) det_text[i] = utf8_decode(canon(detections[i].text));
    std::vector<std::u32string> label_text(m);
    for (std::size_t j = 0; j < m; ++j) label_text[j] = utf8_decode(canon(labels.labels()[j]));

    constexpr auto kInf = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> dist(n * m);
    std::vector<std::size_t> row_min(n, kInf);
    std::vector<std::size_t> col_min(m, kInf);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const std::size_t d = levenshtein(det_text[i], label_text[j]);
            dist[i * m + j] = d;
            row_min[i] = std::min(row_min[i], d);
            col_min[j] = std::min(col_min[j], d);
        }
    }

    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < n; ++i) {
        candidates.clear();
        for (std::size_t j = 0; j < m; ++j) {
            const std::size_t d = dist[i * m + j];
            if (d != row_min[i] || d != col_min[j]) continue;
            const std::size_t longest = std::max(det_text[i].size(), label_text[j].size());
            if (d >= longest) continue;  // normalized distance must stay below 1
            candidates.push_back(j);
        }
        if (candidates.empty()) continue;

        std::size_t pick = candidates.front();
        if (dist[i * m + pick] != 0 && candidates.size() > 1) {
            pick = candidates[rng.uniform_index(candidates.size())];
        }
        out.push_back({i, detections[i], labels.labels()[pick], dist[i * m + pick]});
    }
    return out;
}

}  // namespace pgt
