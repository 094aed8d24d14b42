#include <doctest.h>

#include <algorithm>
#include <set>

#include "pgt/random.hpp"
#include "pgt/text.hpp"
#include "pgt/weak_labels.hpp"

using namespace pgt;

namespace {

std::set<std::string> label_set(const WeakLabelSet& g)
{
    return {g.labels().begin(), g.labels().end()};
}

}  // namespace

TEST_CASE("canon examples")
{
    CHECK(canon("  CAFE London ") == "cafe london");
    CHECK(canon("a  b") == "a b");
    CHECK(canon("221B") == "221b");
    CHECK(canon("") == "");
    CHECK(canon(" \t\n") == "");
    CHECK(canon("a\tb") == "a b");
    // Non-ASCII bytes pass through untouched.
    CHECK(canon("CAF\xC3\x89") == "caf\xC3\x89");
}

TEST_CASE("utf8 round trip and replacement of invalid bytes")
{
    const std::string s = "a\xC3\xA9\xE2\x82\xAC\xF0\x9F\x98\x80";
    CHECK(utf8_length(s) == 4);
    CHECK(utf8_encode(utf8_decode(s)) == s);
    CHECK(utf8_decode("\xFF") == std::u32string(1, U'�'));
    CHECK(utf8_decode("\xC3") == std::u32string(1, U'�'));
    CHECK(utf8_decode("a\xE2\x82") == std::u32string{U'a', U'�', U'�'});
}

TEST_CASE("expand_kgrams examples")
{
    SUBCASE("two annotation texts")
    {
        const auto g = expand_kgrams({AnnotationText({"Sherlock", "Holmes"}),
                                      AnnotationText({"221B", "Baker", "Street"})});
        const std::set<std::string> want{"Sherlock", "Holmes",       "Sherlock Holmes",
                                         "221B",     "Baker",        "Street",
                                         "221B Baker", "Baker Street", "221B Baker Street"};
        CHECK(label_set(g) == want);
        CHECK(g.size() == 9);
    }
    SUBCASE("single word")
    {
        CHECK(label_set(expand_kgrams({AnnotationText({"cafe"})})) == std::set<std::string>{"cafe"});
    }
    SUBCASE("unreadable words drop every k-gram that contains them")
    {
        const auto g = expand_kgrams({AnnotationText({"go", "**", "home"})});
        CHECK(label_set(g) == std::set<std::string>{"go", "home"});
    }
}

TEST_CASE("expand_kgrams bounds and provenance")
{
    const AnnotationText t({"a", "b", "c", "d", "e", "f", "g"});
    const auto g5 = expand_kgrams({t});
    // n words give sum_{k<=5} (n-k+1) k-grams.
    CHECK(g5.size() == 7 + 6 + 5 + 4 + 3);
    CHECK_FALSE(g5.contains("a b c d e f"));
    CHECK(g5.contains("c d e f g"));
    CHECK(expand_kgrams({t}, 1).size() == 7);
    CHECK_THROWS_AS(expand_kgrams({t}, 0), std::invalid_argument);

    const auto dup = expand_kgrams({AnnotationText({"x", "y"}), AnnotationText({"y"})});
    CHECK(dup.size() == 3);
    const auto& labels = dup.labels();
    const auto idx = static_cast<std::size_t>(std::find(labels.begin(), labels.end(), "y") - labels.begin());
    REQUIRE(idx < labels.size());
    CHECK(dup.provenance(idx).size() == 2);
    CHECK(dup.provenance(idx)[0] == LabelSource{0, 1, 1});
    CHECK(dup.provenance(idx)[1] == LabelSource{1, 1, 0});
}

TEST_CASE("annotation text validation")
{
    CHECK_THROWS_AS(AnnotationText({"a b"}), std::invalid_argument);
    CHECK_THROWS_AS(AnnotationText({""}), std::invalid_argument);
    CHECK(AnnotationText::from_string("  Baker   Street ").words() ==
          std::vector<std::string>{"Baker", "Street"});
    CHECK_THROWS_AS(AnnotationText::from_string("   "), std::invalid_argument);
}

TEST_CASE("rng helpers are deterministic and in range")
{
    Rng a(5), b(5);
    for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
    Rng r(9);
    std::vector<int> hist(3, 0);
    for (int i = 0; i < 3000; ++i) {
        const auto k = r.uniform_index(3);
        REQUIRE(k < 3);
        ++hist[k];
        const double u = r.uniform01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
    for (int h : hist) CHECK(h > 800);
    CHECK(derive_seed(1, "x") == derive_seed(1, "x"));
    CHECK(derive_seed(1, "x") != derive_seed(1, "y"));
    CHECK(derive_seed(1, "x") != derive_seed(2, "x"));
}
