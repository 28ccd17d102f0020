#include "lexichron/text.hpp"

#include "lexichron/error.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

namespace lexichron {

namespace {

const icu::Normalizer2& nfc() {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* instance = icu::Normalizer2::getNFCInstance(status);
    if (U_FAILURE(status) || instance == nullptr)
        raise(ErrKind::InternalError, "ICU NFC normalizer unavailable");
    return *instance;
}

bool is_space(char32_t c) {
    return u_isUWhiteSpace(static_cast<UChar32>(c)) != 0;
}

} // namespace

std::u32string decode_utf8(std::string_view text, std::string_view where) {
    std::u32string out;
    out.reserve(text.size());
    size_t i = 0;
    const auto fail = [&]() {
        std::string ctx = where.empty() ? std::string() : std::string(where) + ": ";
        raise(ErrKind::ParseError,
              ctx + "invalid UTF-8 at byte offset " + std::to_string(i));
    };
    while (i < text.size()) {
        unsigned char b0 = static_cast<unsigned char>(text[i]);
        char32_t cp = 0;
        size_t len = 0;
        if (b0 < 0x80) {
            cp = b0;
            len = 1;
        } else if ((b0 & 0xE0) == 0xC0) {
            cp = b0 & 0x1F;
            len = 2;
        } else if ((b0 & 0xF0) == 0xE0) {
            cp = b0 & 0x0F;
            len = 3;
        } else if ((b0 & 0xF8) == 0xF0) {
            cp = b0 & 0x07;
            len = 4;
        } else {
            fail();
        }
        if (i + len > text.size())
            fail();
        for (size_t k = 1; k < len; ++k) {
            unsigned char b = static_cast<unsigned char>(text[i + k]);
            if ((b & 0xC0) != 0x80)
                fail();
            cp = (cp << 6) | (b & 0x3F);
        }
        // Reject overlong encodings, surrogates and out-of-range values.
        static constexpr char32_t kMin[5] = {0, 0, 0x80, 0x800, 0x10000};
        if (cp < kMin[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF))
            fail();
        out.push_back(cp);
        i += len;
    }
    return out;
}

std::string encode_utf8(std::u32string_view scalars) {
    std::string out;
    out.reserve(scalars.size());
    for (char32_t cp : scalars) {
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
    return out;
}

std::u32string normalize_form(std::string_view raw) {
    // Validate the UTF-8 ourselves so the error carries a byte offset.
    decode_utf8(raw, "word form");

    UErrorCode status = U_ZERO_ERROR;
    icu::UnicodeString composed = nfc().normalize(
        icu::UnicodeString::fromUTF8(
            icu::StringPiece(raw.data(), static_cast<int32_t>(raw.size()))),
        status);
    if (U_FAILURE(status))
        raise(ErrKind::InternalError, "NFC normalization failed");

    std::u32string scalars;
    scalars.reserve(static_cast<size_t>(composed.countChar32()));
    for (int32_t i = 0; i < composed.length();) {
        UChar32 cp = composed.char32At(i);
        scalars.push_back(static_cast<char32_t>(u_tolower(cp)));
        i += U16_LENGTH(cp);
    }

    size_t begin = 0;
    size_t end = scalars.size();
    while (begin < end && is_space(scalars[begin]))
        ++begin;
    while (end > begin && is_space(scalars[end - 1]))
        --end;
    if (begin == end)
        raise(ErrKind::InvalidForm, "word form is empty or whitespace-only");
    return scalars.substr(begin, end - begin);
}

bool is_blank(std::string_view raw) {
    for (char32_t cp : decode_utf8(raw, "word form"))
        if (!is_space(cp))
            return false;
    return true;
}

} // namespace lexichron
