#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "pmx/automaton.hpp"
#include "pmx/matrix.hpp"

namespace pmx {

/// Compiles a normalized clause matrix into a backtracking automaton:
/// recursively selects a column, coalesces adjacent rows by head
/// constructor, emits one discriminating test per run, and chains group
/// failure edges through shared join nodes.
Automaton compile_matrix(const ClauseMatrix& m);

/// Compiles a full match expression: builds the matrix, compiles it, and
/// collects the expression tables and per-clause variable layouts.
/// Throws EmptyMatch when no clauses are given.
std::shared_ptr<const CompiledMatch> compile_match(
    ExprPtr scrutinee,
    const std::vector<std::pair<PatternPtr, ExprPtr>>& clauses,
    SourceSpan span = {});

}  // namespace pmx
