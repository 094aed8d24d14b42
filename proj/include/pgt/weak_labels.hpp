#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

namespace pgt {

/// One weak annotation text: an ordered, non-empty list of words.
class AnnotationText {
public:
    /// Throws std::invalid_argument on an empty list, an empty word or a word
    /// containing whitespace.
    explicit AnnotationText(std::vector<std::string> words);

    /// Splits on whitespace.
    static AnnotationText from_string(const std::string& text);

    const std::vector<std::string>& words() const { return words_; }

private:
    std::vector<std::string> words_;
};

struct LabelSource {
    std::size_t text_index = 0;
    std::size_t k = 0;
    std::size_t start = 0;

    bool operator==(const LabelSource&) const = default;
};

/// Deduplicated k-gram labels in first-appearance order, with provenance.
class WeakLabelSet {
public:
    /// Adds a label or merges provenance into an existing one.
    void add(const std::string& label, LabelSource source);

    const std::vector<std::string>& labels() const { return labels_; }
    const std::vector<LabelSource>& provenance(std::size_t index) const
    {
        return provenance_[index];
    }
    bool contains(const std::string& label) const { return index_.contains(label); }
    std::size_t size() const { return labels_.size(); }
    bool empty() const { return labels_.empty(); }

private:
    std::vector<std::string> labels_;
    std::vector<std::vector<LabelSource>> provenance_;
    std::unordered_map<std::string, std::size_t> index_;
};

inline constexpr std::size_t kDefaultMaxK = 5;
inline constexpr char kUnreadableMarker = '*';

/// Union over texts of all contiguous k-word runs, k in [1, min(k_max, m)],
/// joined by single spaces. k-grams touching a word with '*' are dropped.
WeakLabelSet expand_kgrams(const std::vector<AnnotationText>& texts,
                           std::size_t k_max = kDefaultMaxK);

}  // namespace pgt
