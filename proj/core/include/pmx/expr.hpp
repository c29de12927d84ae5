#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "pmx/value.hpp"

namespace pmx {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct CompiledMatch;  // match_compile.hpp

struct LiteralExpr {
  Value value;
};
struct VarRefExpr {
  std::string name;
};
struct LambdaExpr {
  std::vector<std::string> params;
  ExprPtr body;
};
struct ApplicationExpr {
  ExprPtr fn;
  std::vector<ExprPtr> args;
};
struct LetExpr {
  std::vector<std::pair<std::string, ExprPtr>> bindings;
  ExprPtr body;
};
struct IfExpr {
  ExprPtr test;
  ExprPtr then_branch;
  ExprPtr else_branch;
};
struct QuoteExpr {
  Value datum;
};
/// A match expression: the clauses are compiled at parse time; the
/// scrutinee expression lives inside the compiled form.
struct MatchExpr {
  std::shared_ptr<const CompiledMatch> compiled;
};

struct Expr {
  SourceSpan span;
  std::variant<LiteralExpr, VarRefExpr, LambdaExpr, ApplicationExpr, LetExpr,
               IfExpr, QuoteExpr, MatchExpr>
      node;
};

template <typename NodeT>
ExprPtr make_expr(NodeT node, SourceSpan span = {}) {
  return std::make_shared<Expr>(Expr{span, std::move(node)});
}

}  // namespace pmx
