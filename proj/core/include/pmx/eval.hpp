#pragma once

#include <span>

#include "pmx/env.hpp"
#include "pmx/expr.hpp"

namespace pmx {

class TraceSink;  // trace.hpp

/// Per-call evaluation state threaded through evaluation and matching.
struct EvalContext {
  TraceSink* trace = nullptr;
};

/// Body and captured environment of a lambda value.
struct ClosureData {
  std::vector<std::string> params;
  ExprPtr body;
  EnvPtr env;
};

/// Call-by-value evaluation; free variables resolve through `env`.
Value evaluate(const ExprPtr& expr, const EnvPtr& env, EvalContext& ctx);
Value evaluate(const ExprPtr& expr, const EnvPtr& env);

/// Applies a callable (builtin or closure) to arguments.
Value apply_value(const Value& fn, std::span<const Value> args,
                  EvalContext& ctx);

/// Fresh environment holding the builtin procedures.
EnvPtr make_base_env();

/// Installs a native procedure into `env`; returns the callable value.
Value define_native(
    const EnvPtr& env, const std::string& name,
    std::function<Value(std::span<const Value>, EvalContext&)> fn);

}  // namespace pmx
