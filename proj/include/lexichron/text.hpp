#pragma once

#include <string>
#include <string_view>

namespace lexichron {

// Decode UTF-8 into Unicode scalar values. Invalid byte sequences raise
// ErrKind::ParseError; `where` is prepended to the message for context.
std::u32string decode_utf8(std::string_view text, std::string_view where = {});

std::string encode_utf8(std::u32string_view scalars);

// Canonical form used everywhere words are compared: NFC composition,
// per-scalar lowercasing, then trim of surrounding whitespace. Idempotent.
// Raises ErrKind::InvalidForm when nothing but whitespace remains.
std::u32string normalize_form(std::string_view raw);

// True when `raw` normalizes to an empty sequence (would raise above).
bool is_blank(std::string_view raw);

} // namespace lexichron
