#include <set>

#include "pmx/error.hpp"
#include "pmx/match_compile.hpp"
#include "pmx/parse.hpp"

namespace pmx {

namespace {

[[noreturn]] void malformed(const std::string& what, SourceSpan span) {
  throw StaticError(ErrorKind::MalformedExpr, what, span);
}

std::vector<std::string> parse_param_list(const Value& datum) {
  auto elements = datum.proper_list_elements();
  if (!elements) {
    malformed("parameter list must be a proper list of names",
              datum.span());
  }
  std::vector<std::string> params;
  std::set<std::string> seen;
  for (const Value& p : *elements) {
    if (p.kind() != ValueKind::Symbol) {
      malformed("parameter names must be symbols", p.span());
    }
    if (!seen.insert(p.symbol_name()).second) {
      malformed("duplicate parameter name: " + p.symbol_name(), p.span());
    }
    params.push_back(p.symbol_name());
  }
  return params;
}

ExprPtr parse_compound(const Value& datum, const ParseOptions& opts) {
  auto elements = *datum.proper_list_elements();
  const Value& head = elements[0];
  SourceSpan span = datum.span();

  if (head.is_symbol("quote")) {
    if (elements.size() != 2) malformed("quote takes exactly one datum", span);
    return make_expr(QuoteExpr{elements[1]}, span);
  }
  if (head.is_symbol("lambda")) {
    if (elements.size() != 3) {
      malformed("lambda needs a parameter list and one body expression",
                span);
    }
    return make_expr(LambdaExpr{parse_param_list(elements[1]),
                                parse_expr(elements[2], opts)},
                     span);
  }
  if (head.is_symbol("let")) {
    if (elements.size() != 3) {
      malformed("let needs a binding list and one body expression", span);
    }
    auto binding_forms = elements[1].proper_list_elements();
    if (!binding_forms) malformed("let bindings must be a list", span);
    std::vector<std::pair<std::string, ExprPtr>> bindings;
    for (const Value& form : *binding_forms) {
      auto parts = form.proper_list_elements();
      if (!parts || parts->size() != 2 ||
          (*parts)[0].kind() != ValueKind::Symbol) {
        malformed("let bindings look like [name expr]", form.span());
      }
      bindings.emplace_back((*parts)[0].symbol_name(),
                            parse_expr((*parts)[1], opts));
    }
    return make_expr(LetExpr{std::move(bindings),
                             parse_expr(elements[2], opts)},
                     span);
  }
  if (head.is_symbol("if")) {
    if (elements.size() != 4) {
      malformed("if needs a test, a then-expression, and an "
                "else-expression",
                span);
    }
    return make_expr(IfExpr{parse_expr(elements[1], opts),
                            parse_expr(elements[2], opts),
                            parse_expr(elements[3], opts)},
                     span);
  }
  if (head.is_symbol("match")) {
    if (elements.size() < 2) malformed("match needs a scrutinee", span);
    ExprPtr scrutinee = parse_expr(elements[1], opts);
    std::vector<std::pair<PatternPtr, ExprPtr>> clauses;
    for (std::size_t i = 2; i < elements.size(); ++i) {
      auto clause = elements[i].proper_list_elements();
      if (!clause || clause->size() != 2) {
        malformed("match clauses look like [pattern expression]",
                  elements[i].span());
      }
      PatternPtr pattern = parse_pattern((*clause)[0], opts);
      ExprPtr rhs = parse_expr((*clause)[1], opts);
      clauses.emplace_back(std::move(pattern), std::move(rhs));
    }
    auto compiled = compile_match(std::move(scrutinee), clauses, span);
    if (opts.compiled_out) opts.compiled_out->push_back(compiled);
    return make_expr(MatchExpr{std::move(compiled)}, span);
  }

  ApplicationExpr app;
  app.fn = parse_expr(head, opts);
  for (std::size_t i = 1; i < elements.size(); ++i) {
    app.args.push_back(parse_expr(elements[i], opts));
  }
  return make_expr(std::move(app), span);
}

}  // namespace

ExprPtr parse_expr(const Value& datum, const ParseOptions& opts) {
  switch (datum.kind()) {
    case ValueKind::Symbol:
      return make_expr(VarRefExpr{datum.symbol_name()}, datum.span());
    case ValueKind::Int:
    case ValueKind::Real:
    case ValueKind::Boolean:
    case ValueKind::String:
      return make_expr(LiteralExpr{datum}, datum.span());
    case ValueKind::EmptyList:
      malformed("`()` is not an expression", datum.span());
    case ValueKind::Pair:
      if (!datum.proper_list_elements()) {
        malformed("expressions must be proper lists", datum.span());
      }
      return parse_compound(datum, opts);
    default:
      malformed("this datum cannot appear as an expression", datum.span());
  }
}

}  // namespace pmx
