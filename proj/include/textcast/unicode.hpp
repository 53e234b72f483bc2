#pragma once

#include <string>
#include <string_view>

namespace textcast {

/// Document text. One element per Unicode scalar value, so every offset in
/// the library counts scalars.
using Text = std::u32string;
using TextView = std::u32string_view;

/// Strict UTF-8 decode; rejects overlongs, surrogates and truncated
/// sequences with ErrorCode::InvalidUtf8.
Text from_utf8(std::string_view bytes);

std::string to_utf8(TextView text);

}  // namespace textcast
