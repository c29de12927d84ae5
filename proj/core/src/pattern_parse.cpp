#include <optional>

#include "pmx/error.hpp"
#include "pmx/parse.hpp"

namespace pmx {

namespace {

bool is_ellipsis(const Value& v) { return v.is_symbol("..."); }

PatternPtr parse_rec(const Value& datum, const ParseOptions& opts, int fuel);

/// Desugars the elements of a `(list ...)` pattern. At most one `...` may
/// appear per list level; the patterns before it become a fixed cons
/// prefix, the one before the marker becomes the repeated element and the
/// rest the fixed tail.
PatternPtr parse_list_elements(const std::vector<Value>& elements,
                               SourceSpan span, const ParseOptions& opts,
                               int fuel) {
  std::optional<std::size_t> ellipsis_at;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (!is_ellipsis(elements[i])) continue;
    if (i == 0) {
      throw StaticError(ErrorKind::MalformedPattern,
                        "`...` must follow a pattern", elements[i].span());
    }
    if (ellipsis_at) {
      throw StaticError(ErrorKind::MalformedPattern,
                        "at most one `...` per list level",
                        elements[i].span());
    }
    ellipsis_at = i;
  }

  if (!ellipsis_at) {
    PatternPtr out = make_pattern(EmptyListPattern{}, span);
    for (auto it = elements.rbegin(); it != elements.rend(); ++it) {
      out = make_pattern(ConsPattern{parse_rec(*it, opts, fuel), out}, span);
    }
    return out;
  }

  std::size_t rep = *ellipsis_at - 1;
  PatternPtr element = parse_rec(elements[rep], opts, fuel);
  std::vector<PatternPtr> tail;
  for (std::size_t i = *ellipsis_at + 1; i < elements.size(); ++i) {
    if (is_ellipsis(elements[i])) {
      throw StaticError(ErrorKind::MalformedPattern,
                        "at most one `...` per list level",
                        elements[i].span());
    }
    tail.push_back(parse_rec(elements[i], opts, fuel));
  }
  PatternPtr out =
      make_pattern(SeqPattern{std::move(element), std::move(tail)}, span);
  for (std::size_t i = rep; i-- > 0;) {
    out = make_pattern(ConsPattern{parse_rec(elements[i], opts, fuel), out},
                       span);
  }
  return out;
}

PatternPtr parse_compound(const Value& datum, const ParseOptions& opts,
                          int fuel) {
  auto elements = *datum.proper_list_elements();
  const Value& head = elements[0];
  if (head.kind() != ValueKind::Symbol) {
    throw StaticError(ErrorKind::UnknownPatternHead,
                      "compound pattern head must be a symbol",
                      datum.span());
  }
  const std::string& name = head.symbol_name();
  std::vector<Value> rest(elements.begin() + 1, elements.end());

  if (name == "quote") {
    if (rest.size() != 1) {
      throw StaticError(ErrorKind::MalformedPattern,
                        "quote pattern takes exactly one datum",
                        datum.span());
    }
    if (rest[0].kind() == ValueKind::EmptyList) {
      return make_pattern(EmptyListPattern{}, datum.span());
    }
    return make_pattern(LiteralPattern{rest[0]}, datum.span());
  }
  if (name == "list") {
    return parse_list_elements(rest, datum.span(), opts, fuel);
  }
  if (name == "cons") {
    if (rest.size() != 2) {
      throw StaticError(ErrorKind::MalformedPattern,
                        "cons pattern takes exactly two subpatterns",
                        datum.span());
    }
    return make_pattern(ConsPattern{parse_rec(rest[0], opts, fuel),
                                    parse_rec(rest[1], opts, fuel)},
                        datum.span());
  }
  if (name == "and") {
    std::vector<PatternPtr> subs;
    for (const Value& sub : rest) subs.push_back(parse_rec(sub, opts, fuel));
    return make_pattern(AndPattern{std::move(subs)}, datum.span());
  }
  if (name == "or") {
    std::vector<PatternPtr> subs;
    for (const Value& sub : rest) subs.push_back(parse_rec(sub, opts, fuel));
    return make_pattern(OrPattern{std::move(subs)}, datum.span());
  }
  if (name == "?") {
    if (rest.empty()) {
      throw StaticError(ErrorKind::MalformedPattern,
                        "`?` pattern needs a predicate expression",
                        datum.span());
    }
    ParseOptions expr_opts = opts;
    PatternPtr pred = make_pattern(
        PredPattern{parse_expr(rest[0], expr_opts)}, datum.span());
    if (rest.size() == 1) return pred;
    // (? e p ...) is shorthand for (and (? e) p ...).
    std::vector<PatternPtr> subs{pred};
    for (std::size_t i = 1; i < rest.size(); ++i) {
      subs.push_back(parse_rec(rest[i], opts, fuel));
    }
    return make_pattern(AndPattern{std::move(subs)}, datum.span());
  }
  if (name == "app") {
    if (rest.size() != 2) {
      throw StaticError(ErrorKind::MalformedPattern,
                        "app pattern takes a function expression and one "
                        "subpattern",
                        datum.span());
    }
    return make_pattern(AppPattern{parse_expr(rest[0], opts),
                                   parse_rec(rest[1], opts, fuel)},
                        datum.span());
  }

  if (opts.statics) {
    if (const ExpanderDef* expander = opts.statics->find_expander(name)) {
      if (fuel <= 0) {
        throw StaticError(ErrorKind::FuelExhausted,
                          "match expander expansion did not terminate "
                          "(expanding `" +
                              name + "`)",
                          datum.span());
      }
      Value rewritten = expand_once(datum, *expander);
      return parse_rec(rewritten, opts, fuel - 1);
    }
    if (const StructInfo* info = opts.statics->find_struct(name)) {
      if (rest.size() != info->field_names.size()) {
        throw StaticError(ErrorKind::StructArityError,
                          "struct pattern `" + name + "` expects " +
                              std::to_string(info->field_names.size()) +
                              " field patterns, got " +
                              std::to_string(rest.size()),
                          datum.span());
      }
      std::vector<PatternPtr> fields;
      for (const Value& sub : rest) {
        fields.push_back(parse_rec(sub, opts, fuel));
      }
      return make_pattern(StructPattern{info->tag, std::move(fields)},
                          datum.span());
    }
  }
  throw StaticError(ErrorKind::UnknownPatternHead,
                    "`" + name +
                        "` is not a pattern keyword, struct, or match "
                        "expander",
                    datum.span());
}

PatternPtr parse_rec(const Value& datum, const ParseOptions& opts, int fuel) {
  switch (datum.kind()) {
    case ValueKind::Symbol: {
      const std::string& name = datum.symbol_name();
      if (name == "_") return make_pattern(WildcardPattern{}, datum.span());
      if (name == "...") {
        throw StaticError(ErrorKind::MalformedPattern,
                          "`...` may only follow a pattern inside a list",
                          datum.span());
      }
      return make_pattern(VarPattern{name}, datum.span());
    }
    case ValueKind::Int:
    case ValueKind::Real:
    case ValueKind::Boolean:
    case ValueKind::String:
      return make_pattern(LiteralPattern{datum}, datum.span());
    case ValueKind::EmptyList:
      return make_pattern(EmptyListPattern{}, datum.span());
    case ValueKind::Pair:
      if (!datum.proper_list_elements()) {
        throw StaticError(ErrorKind::MalformedPattern,
                          "patterns must be proper lists", datum.span());
      }
      return parse_compound(datum, opts, fuel);
    default:
      throw StaticError(ErrorKind::MalformedPattern,
                        "this datum cannot appear as a pattern",
                        datum.span());
  }
}

}  // namespace

PatternPtr parse_pattern(const Value& datum, const ParseOptions& opts) {
  PatternPtr pattern = parse_rec(datum, opts, opts.fuel);
  bound_vars(pattern);  // variable discipline check
  return pattern;
}

}  // namespace pmx
