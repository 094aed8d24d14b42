#include "pgt/weak_labels.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace pgt {

AnnotationText::AnnotationText(std::vector<std::string> words) : words_(std::move(words))
{
    if (words_.empty()) throw std::invalid_argument("annotation text has no words");
    for (const auto& w : words_) {
        if (w.empty()) throw std::invalid_argument("annotation word is empty");
        if (std::any_of(w.begin(), w.end(), [](char c) {
                return c == ' ' || c == '\t' || c == '\n' || c == '\r';
            })) {
            throw std::invalid_argument("annotation word contains whitespace: '" + w + "'");
        }
    }
}

AnnotationText AnnotationText::from_string(const std::string& text)
{
    std::istringstream in(text);
    std::vector<std::string> words;
    for (std::string w; in >> w;) words.push_back(std::move(w));
    return AnnotationText(std::move(words));
}

void WeakLabelSet::add(const std::string& label, LabelSource source)
{
    auto [it, inserted] = index_.try_emplace(label, labels_.size());
    if (inserted) {
        labels_.push_back(label);
        provenance_.emplace_back();
    }
    provenance_[it->second].push_back(source);
}

WeakLabelSet expand_kgrams(const std::vector<AnnotationText>& texts, std::size_t k_max)
{
    if (k_max < 1) throw std::invalid_argument("k_max must be at least 1");

    WeakLabelSet out;
    for (std::size_t ti = 0; ti < texts.size(); ++ti) {
        const auto& words = texts[ti].words();
        const std::size_t m = words.size();
        std::vector<bool> unreadable(m);
        for (std::size_t i = 0; i < m; ++i) {
            unreadable[i] = words[i].find(kUnreadableMarker) != std::string::npos;
        }
        for (std::size_t k = 1; k <= std::min(k_max, m); ++k) {
            for (std::size_t start = 0; start + k <= m; ++start) {
                const auto first = unreadable.begin() + static_cast<std::ptrdiff_t>(start);
                if (std::any_of(first, first + static_cast<std::ptrdiff_t>(k),
                                [](bool b) { return b; })) {
                    continue;
                }
                std::string label = words[start];
                for (std::size_t j = start + 1; j < start + k; ++j) {
                    label += ' ';
                    label += words[j];
                }
                out.add(label, {ti, k, start});
            }
        }
    }
    return out;
}

}  // namespace pgt
