#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pmx/automaton.hpp"
#include "pmx/env.hpp"
#include "pmx/eval.hpp"
#include "pmx/trace.hpp"

namespace pmx {

/// Result of executing a compiled match: the clause that matched and its
/// bindings (ordered per the clause's variable layout), or no match.
struct MatchOutcome {
  bool matched = false;
  int rhs_index = -1;
  std::vector<std::pair<std::string, Value>> bindings;
};

/// Walks the automaton over `scrutinee`. Predicate and transformer
/// expressions are evaluated at most once per execution (lazily, at their
/// first test) and their functions applied as often as the walk demands.
/// Evaluator errors from those expressions propagate. The walker is
/// iterative, so list length never grows the host stack.
MatchOutcome run_match(const CompiledMatch& cm, const Value& scrutinee,
                       const EnvPtr& env, TraceSink* trace = nullptr);

/// Evaluates the matched clause's right-hand side in `env` extended by the
/// outcome's bindings. Throws MatchFailure when the outcome is NoMatch.
Value run_clause_rhs(const MatchOutcome& outcome, const CompiledMatch& cm,
                     const EnvPtr& env, EvalContext& ctx);
Value run_clause_rhs(const MatchOutcome& outcome, const CompiledMatch& cm,
                     const EnvPtr& env);

/// Reconstructs the outcome a recorded single-execution event sequence
/// leads to: the last success event selects the clause, bind events
/// (last write wins) supply the bindings.
MatchOutcome replay_trace(const CompiledMatch& cm,
                          const std::vector<TraceEvent>& events);

}  // namespace pmx
