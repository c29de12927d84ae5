#pragma once

#include <string_view>
#include <vector>

#include "pmx/value.hpp"

namespace pmx {

/// Reads every toplevel datum from `text` in order.
///
/// Syntax: parenthesized lists with `[` `]` as synonyms for `(` `)`,
/// `'d` as sugar for `(quote d)`, `#t`/`#f` booleans, `"..."` strings with
/// the usual escapes, `;` line comments, and `(a . b)` dotted tails.
/// Numeric tokens with a decimal point or exponent read as reals, all
/// other numeric tokens as integers.
///
/// Throws StaticError with kind UnbalancedDelimiter or BadToken; the error
/// span points at the offending source bytes.
std::vector<Value> read_all(std::string_view text);

/// Reads exactly one datum; throws BadToken if the text holds zero or more
/// than one toplevel datum.
Value read_one(std::string_view text);

}  // namespace pmx
