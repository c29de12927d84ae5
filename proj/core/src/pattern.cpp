#include "pmx/pattern.hpp"

#include <algorithm>
#include <set>

#include "pmx/error.hpp"

namespace pmx {

namespace {

void collect(const PatternPtr& pattern, std::vector<std::string>& out) {
  auto add = [&](const std::string& name, SourceSpan span) {
    if (std::find(out.begin(), out.end(), name) != out.end()) {
      throw StaticError(ErrorKind::DuplicateVariable,
                        "pattern variable bound twice: " + name, span);
    }
    out.push_back(name);
  };

  const Pattern& p = *pattern;
  if (const auto* var = std::get_if<VarPattern>(&p.node)) {
    add(var->name, p.span);
  } else if (const auto* conj = std::get_if<AndPattern>(&p.node)) {
    for (const auto& sub : conj->subs) collect(sub, out);
  } else if (const auto* disj = std::get_if<OrPattern>(&p.node)) {
    // Each branch is checked on its own; all branches must bind the same
    // set, and only the first branch's order contributes.
    std::vector<std::vector<std::string>> branch_vars;
    for (const auto& sub : disj->subs) {
      std::vector<std::string> vars;
      collect(sub, vars);
      branch_vars.push_back(std::move(vars));
    }
    for (std::size_t i = 1; i < branch_vars.size(); ++i) {
      std::set<std::string> first(branch_vars[0].begin(),
                                  branch_vars[0].end());
      std::set<std::string> other(branch_vars[i].begin(),
                                  branch_vars[i].end());
      if (first != other) {
        throw StaticError(ErrorKind::OrBindingMismatch,
                          "all `or` branches must bind the same variables",
                          p.span);
      }
    }
    if (!branch_vars.empty()) {
      for (const auto& name : branch_vars[0]) add(name, p.span);
    }
  } else if (const auto* cons = std::get_if<ConsPattern>(&p.node)) {
    collect(cons->head, out);
    collect(cons->tail, out);
  } else if (const auto* app = std::get_if<AppPattern>(&p.node)) {
    collect(app->sub, out);
  } else if (const auto* seq = std::get_if<SeqPattern>(&p.node)) {
    collect(seq->element, out);
    for (const auto& sub : seq->tail) collect(sub, out);
  } else if (const auto* s = std::get_if<StructPattern>(&p.node)) {
    for (const auto& sub : s->fields) collect(sub, out);
  }
  // Wildcard, Literal, Pred, EmptyList bind nothing.
}

}  // namespace

std::vector<std::string> bound_vars(const PatternPtr& pattern) {
  std::vector<std::string> out;
  collect(pattern, out);
  return out;
}

}  // namespace pmx
