#pragma once

#include <map>
#include <optional>
#include <string>

#include "pmx/env.hpp"
#include "pmx/pattern.hpp"

namespace pmx {

using NaiveBindings = std::map<std::string, Value>;

/// Reference matcher by structural recursion: variables bind, literals
/// compare structurally, `?` evaluates then applies its predicate, `and`
/// threads bindings left to right, `or` commits to the first succeeding
/// branch, `app` applies then recurs on the result, and sequences match by
/// length arithmetic, accumulating element bindings into lists.
///
/// This is the correctness oracle for the compiled pipeline and stays
/// independent of it.
std::optional<NaiveBindings> naive_match(const PatternPtr& pattern,
                                         const Value& value,
                                         const EnvPtr& env);

}  // namespace pmx
