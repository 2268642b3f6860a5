#include "hybrid/tokenizer.hpp"

#include <locale.h>
#include <wctype.h>

namespace hybrid {

namespace {

constexpr char32_t kInvalid = 0xFFFD;

// Decodes one code point starting at text[pos] and advances pos. Malformed
// sequences consume a single byte and yield U+FFFD.
char32_t decode_utf8(std::string_view text, std::size_t& pos)
{
    auto byte = [&](std::size_t i) { return static_cast<unsigned char>(text[i]); };
    const unsigned char lead = byte(pos);
    if (lead < 0x80) {
        ++pos;
        return lead;
    }
    std::size_t length = 0;
    char32_t cp = 0;
    if ((lead & 0xE0) == 0xC0) {
        length = 2;
        cp = lead & 0x1F;
    } else if ((lead & 0xF0) == 0xE0) {
        length = 3;
        cp = lead & 0x0F;
    } else if ((lead & 0xF8) == 0xF0) {
        length = 4;
        cp = lead & 0x07;
    } else {
        ++pos;
        return kInvalid;
    }
    if (pos + length > text.size()) {
        ++pos;
        return kInvalid;
    }
    for (std::size_t i = 1; i < length; ++i) {
        const unsigned char next = byte(pos + i);
        if ((next & 0xC0) != 0x80) {
            ++pos;
            return kInvalid;
        }
        cp = (cp << 6) | (next & 0x3F);
    }
    static constexpr char32_t kMinimum[] = {0, 0, 0x80, 0x800, 0x10000};
    if (cp < kMinimum[length] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
        ++pos;
        return kInvalid;
    }
    pos += length;
    return cp;
}

void append_utf8(std::string& out, char32_t cp)
{
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

// Character classes come from glibc's C.UTF-8 locale, which carries the full
// Unicode tables. The locale object is created once and never freed.
class UnicodeClassifier {
  public:
    UnicodeClassifier() : locale_(newlocale(LC_CTYPE_MASK, "C.UTF-8", locale_t{})) {}

    [[nodiscard]] bool is_word(char32_t cp) const
    {
        if (cp == kInvalid) {
            return false;
        }
        if (locale_ == locale_t{}) {
            return cp < 0x80 ? iswalnum(static_cast<wint_t>(cp)) != 0 : false;
        }
        return iswalnum_l(static_cast<wint_t>(cp), locale_) != 0;
    }

    [[nodiscard]] char32_t to_lower(char32_t cp) const
    {
        if (locale_ == locale_t{}) {
            return (cp >= 'A' && cp <= 'Z') ? cp + ('a' - 'A') : cp;
        }
        return static_cast<char32_t>(towlower_l(static_cast<wint_t>(cp), locale_));
    }

  private:
    locale_t locale_;
};

const UnicodeClassifier& classifier()
{
    static const UnicodeClassifier instance;
    return instance;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text)
{
    const auto& unicode = classifier();
    std::vector<std::string> tokens;
    std::string current;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const char32_t cp = decode_utf8(text, pos);
        // Combining diacritics (U+0300..U+036F) stay attached to their base letter.
        const bool combining = cp >= 0x0300 && cp <= 0x036F && !current.empty();
        if (unicode.is_word(cp) || combining) {
            append_utf8(current, unicode.to_lower(cp));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) {
        tokens.push_back(std::move(current));
    }
    return tokens;
}

}  // namespace hybrid
