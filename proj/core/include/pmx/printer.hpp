#pragma once

#include <string>

#include "pmx/value.hpp"

namespace pmx {

/// Renders a value as S-expression text that reads back to a structurally
/// equal value. Throws StaticError(Unprintable) if the value contains a
/// callable. Struct instances print as `#(struct name field ...)`.
std::string print_value(const Value& v);

/// Like print_value but renders callables as `#<procedure:name>` instead of
/// throwing; used for diagnostics and REPL output.
std::string display_value(const Value& v);

}  // namespace pmx
