#pragma once

#include <string>
#include <string_view>

namespace pgt {

/// Decodes UTF-8 into Unicode scalar values. Invalid bytes decode to U+FFFD.
std::u32string utf8_decode(std::string_view s);
std::string utf8_encode(std::u32string_view s);

/// Number of Unicode scalar values in a UTF-8 string.
std::size_t utf8_length(std::string_view s);

/// Lowercase (ASCII letters only), strip leading/trailing whitespace and
/// collapse internal whitespace runs into a single space.
std::string canon(std::string_view s);

}  // namespace pgt
