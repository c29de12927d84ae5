#include "pmx/naive_match.hpp"

#include "pmx/error.hpp"
#include "pmx/eval.hpp"
#include "pmx/printer.hpp"

namespace pmx {

namespace {

Value applied(const ExprPtr& expr, const Value& argument, const EnvPtr& env,
              EvalContext& ctx) {
  Value fn = evaluate(expr, env, ctx);
  if (fn.kind() != ValueKind::Callable) {
    throw EvalError(ErrorKind::NotCallable,
                    "pattern expression must evaluate to a procedure, "
                    "got " +
                        display_value(fn));
  }
  return apply_value(fn, std::span<const Value>(&argument, 1), ctx);
}

bool match_rec(const PatternPtr& pattern, const Value& value,
               const EnvPtr& env, EvalContext& ctx, NaiveBindings& out) {
  const Pattern& p = *pattern;
  if (const auto* var = std::get_if<VarPattern>(&p.node)) {
    out.insert_or_assign(var->name, value);
    return true;
  }
  if (std::holds_alternative<WildcardPattern>(p.node)) return true;
  if (const auto* lit = std::get_if<LiteralPattern>(&p.node)) {
    return values_equal(lit->value, value);
  }
  if (const auto* pred = std::get_if<PredPattern>(&p.node)) {
    return applied(pred->pred, value, env, ctx).truthy();
  }
  if (const auto* conj = std::get_if<AndPattern>(&p.node)) {
    for (const auto& sub : conj->subs) {
      if (!match_rec(sub, value, env, ctx, out)) return false;
    }
    return true;
  }
  if (const auto* disj = std::get_if<OrPattern>(&p.node)) {
    for (const auto& sub : disj->subs) {
      NaiveBindings attempt = out;
      if (match_rec(sub, value, env, ctx, attempt)) {
        out = std::move(attempt);
        return true;
      }
    }
    return false;
  }
  if (const auto* cons = std::get_if<ConsPattern>(&p.node)) {
    if (value.kind() != ValueKind::Pair) return false;
    return match_rec(cons->head, value.head(), env, ctx, out) &&
           match_rec(cons->tail, value.tail(), env, ctx, out);
  }
  if (std::holds_alternative<EmptyListPattern>(p.node)) {
    return value.kind() == ValueKind::EmptyList;
  }
  if (const auto* app = std::get_if<AppPattern>(&p.node)) {
    Value result = applied(app->transformer, value, env, ctx);
    return match_rec(app->sub, result, env, ctx, out);
  }
  if (const auto* seq = std::get_if<SeqPattern>(&p.node)) {
    auto elements = value.proper_list_elements();
    if (!elements) return false;
    std::size_t k = seq->tail.size();
    if (elements->size() < k) return false;
    std::size_t reps = elements->size() - k;
    std::vector<std::string> vars = bound_vars(seq->element);
    std::map<std::string, std::vector<Value>> accum;
    for (const auto& name : vars) accum[name] = {};
    for (std::size_t i = 0; i < reps; ++i) {
      NaiveBindings element_binds;
      if (!match_rec(seq->element, (*elements)[i], env, ctx,
                     element_binds)) {
        return false;
      }
      for (const auto& name : vars) {
        accum[name].push_back(element_binds.at(name));
      }
    }
    for (std::size_t i = 0; i < k; ++i) {
      if (!match_rec(seq->tail[i], (*elements)[reps + i], env, ctx, out)) {
        return false;
      }
    }
    for (const auto& name : vars) {
      out.insert_or_assign(name, Value::list(accum[name]));
    }
    return true;
  }
  const auto& s = std::get<StructPattern>(p.node);
  if (value.kind() != ValueKind::Struct || value.struct_tag() != s.tag) {
    return false;
  }
  auto fields = value.struct_fields();
  for (std::size_t i = 0; i < s.fields.size(); ++i) {
    if (!match_rec(s.fields[i], fields[i], env, ctx, out)) return false;
  }
  return true;
}

}  // namespace

std::optional<NaiveBindings> naive_match(const PatternPtr& pattern,
                                         const Value& value,
                                         const EnvPtr& env) {
  EvalContext ctx;
  NaiveBindings out;
  if (!match_rec(pattern, value, env, ctx, out)) return std::nullopt;
  return out;
}

}  // namespace pmx
