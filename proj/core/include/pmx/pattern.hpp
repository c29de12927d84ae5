#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "pmx/expr.hpp"
#include "pmx/value.hpp"

namespace pmx {

struct Pattern;
using PatternPtr = std::shared_ptr<const Pattern>;

struct VarPattern {
  std::string name;
};
struct WildcardPattern {};
struct LiteralPattern {
  Value value;
};
/// `(? expr)` — the expression must evaluate to a one-argument procedure;
/// the pattern matches when that procedure returns a non-false value.
struct PredPattern {
  ExprPtr pred;
};
struct AndPattern {
  std::vector<PatternPtr> subs;
};
struct OrPattern {
  std::vector<PatternPtr> subs;
};
struct ConsPattern {
  PatternPtr head;
  PatternPtr tail;
};
struct EmptyListPattern {};
/// `(app f pat)` — applies f to the scrutinee and matches pat against the
/// result.
struct AppPattern {
  ExprPtr transformer;
  PatternPtr sub;
};
/// A list segment `element ... tail0 tail1 ...`: zero or more elements
/// matching `element` (whose variables accumulate into lists), followed by
/// exactly the fixed tail patterns.
struct SeqPattern {
  PatternPtr element;
  std::vector<PatternPtr> tail;
};
struct StructPattern {
  StructTag tag;
  std::vector<PatternPtr> fields;
};

struct Pattern {
  SourceSpan span;
  std::variant<VarPattern, WildcardPattern, LiteralPattern, PredPattern,
               AndPattern, OrPattern, ConsPattern, EmptyListPattern,
               AppPattern, SeqPattern, StructPattern>
      node;
};

template <typename NodeT>
PatternPtr make_pattern(NodeT node, SourceSpan span = {}) {
  return std::make_shared<Pattern>(Pattern{span, std::move(node)});
}

/// Variables bound by a pattern in left-to-right first-occurrence order.
/// Variables under a sequence element are included (they bind lists). For
/// `or` patterns the branches bind equal sets; the first branch supplies
/// the order.
///
/// Throws DuplicateVariable if a name is bound twice outside separate `or`
/// branches, and OrBindingMismatch if `or` branches disagree.
std::vector<std::string> bound_vars(const PatternPtr& pattern);

}  // namespace pmx
