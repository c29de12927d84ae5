#pragma once

#include <memory>
#include <vector>

#include "pmx/expr.hpp"
#include "pmx/pattern.hpp"
#include "pmx/static_env.hpp"

namespace pmx {

struct CompiledMatch;

inline constexpr int kDefaultFuel = 64;

/// Shared context for parsing expressions and patterns. `statics` supplies
/// struct and expander registries (match forms fail to parse without one
/// only if they actually use them); `fuel` bounds expander rewriting;
/// `compiled_out`, when set, records every compiled match in compile order.
struct ParseOptions {
  const StaticEnv* statics = nullptr;
  int fuel = kDefaultFuel;
  std::vector<std::shared_ptr<const CompiledMatch>>* compiled_out = nullptr;
};

/// Parses reader output into an expression. `(lambda (x ...) body)`,
/// `(let ([x e] ...) body)`, `(if t a b)`, `(quote d)`, and
/// `(match e [pat rhs] ...)` parse to their forms; all other lists parse
/// to applications, symbols to variable references, and self-evaluating
/// atoms to literals. Match clauses are compiled during parsing.
ExprPtr parse_expr(const Value& datum, const ParseOptions& opts = {});

/// Parses a pattern datum, expanding registered match expanders to
/// fixpoint under the fuel bound and desugaring `list` patterns into cons
/// chains. Validates variable discipline (DuplicateVariable,
/// OrBindingMismatch) on the result.
PatternPtr parse_pattern(const Value& datum, const ParseOptions& opts = {});

}  // namespace pmx
