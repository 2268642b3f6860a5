#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace hybrid {

/// Splits UTF-8 text into lowercased maximal runs of Unicode letters and
/// digits. Everything else (punctuation, apostrophes, symbols, invalid
/// bytes) separates tokens. Diacritics are kept; there is no stemming and no
/// stopword list.
std::vector<std::string> tokenize(std::string_view text);

}  // namespace hybrid
