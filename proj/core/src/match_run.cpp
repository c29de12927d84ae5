#include "pmx/match_run.hpp"

#include "pmx/error.hpp"
#include "pmx/printer.hpp"

namespace pmx {

namespace {

[[noreturn]] void invariant_failure(const std::string& what) {
  throw EvalError(ErrorKind::InternalInvariantViolation, what);
}

/// Per-execution state: the register file, the once-per-execution
/// expression caches, and the trace sink.
struct Exec {
  const CompiledMatch& cm;
  EnvPtr env;
  TraceSink* sink;
  std::vector<Value> regs;
  std::vector<std::optional<Value>> pred_cache;
  std::vector<std::optional<Value>> app_cache;
  EvalContext eval_ctx;  // nested evaluation does not re-enter this trace

  Value resolve(const Occurrence& occ) const {
    Value v = regs[occ.root];
    for (const OccStep& step : occ.steps) {
      switch (step.kind) {
        case OccStep::Kind::Head:
          if (v.kind() != ValueKind::Pair) {
            invariant_failure("occurrence head step on a non-pair");
          }
          v = v.head();
          break;
        case OccStep::Kind::Tail:
          if (v.kind() != ValueKind::Pair) {
            invariant_failure("occurrence tail step on a non-pair");
          }
          v = v.tail();
          break;
        case OccStep::Kind::Field:
          if (v.kind() != ValueKind::Struct ||
              v.struct_tag() != step.tag) {
            invariant_failure("occurrence field step on a non-struct");
          }
          v = v.struct_fields()[step.field_index];
          break;
      }
    }
    return v;
  }

  Value cached_fn(int id, bool is_pred) {
    auto& slot = is_pred ? pred_cache[id] : app_cache[id];
    if (!slot) {
      const ExprPtr& expr =
          is_pred ? cm.pred_exprs[id] : cm.app_exprs[id];
      slot = evaluate(expr, env, eval_ctx);
    }
    return *slot;
  }

  void trace(TraceEvent event) {
    if (sink) sink->record(std::move(event));
  }
};

bool walk(Exec& ex, const Automaton& automaton,
          std::map<std::string, Value>& scratch, int& rhs_out,
          bool top_level);

/// Runs one sequence loop. Iterates the first n - min_tail elements
/// through the body automaton, accumulating each accumulated variable's
/// per-iteration value into a list; the remaining tail lands in the rest
/// register.
bool run_seq_loop(Exec& ex, const SeqLoopNode& node,
                  std::map<std::string, Value>& scratch) {
  Value list = ex.resolve(node.occ);
  std::int64_t length = 0;
  for (Value cur = list; ; cur = cur.tail()) {
    if (cur.kind() == ValueKind::EmptyList) break;
    if (cur.kind() != ValueKind::Pair) return false;  // improper list
    ++length;
  }
  if (length < node.min_tail_length) return false;

  std::int64_t iterations = length - node.min_tail_length;
  std::map<std::string, std::vector<Value>> accum;
  for (const auto& name : node.accumulated_vars) accum[name] = {};

  Value cur = list;
  for (std::int64_t i = 0; i < iterations; ++i) {
    ex.trace({TraceKind::LoopIter, format_occurrence(node.occ),
              "i=" + std::to_string(i)});
    ex.regs[node.element_root] = cur.head();
    std::map<std::string, Value> iteration_scratch;
    int ignored_rhs = -1;
    if (!walk(ex, *node.body, iteration_scratch, ignored_rhs, false)) {
      return false;
    }
    for (const auto& name : node.accumulated_vars) {
      auto it = iteration_scratch.find(name);
      if (it == iteration_scratch.end()) {
        invariant_failure("sequence element did not bind `" + name + "`");
      }
      accum[name].push_back(it->second);
    }
    cur = cur.tail();
  }
  for (const auto& name : node.accumulated_vars) {
    Value bound = Value::list(accum[name]);
    scratch[name] = bound;
    ex.trace({TraceKind::Bind, format_occurrence(node.occ),
              name + "=" + display_value(bound), name, bound});
  }
  ex.regs[node.rest_root] = cur;
  return true;
}

bool walk(Exec& ex, const Automaton& automaton,
          std::map<std::string, Value>& scratch, int& rhs_out,
          bool top_level) {
  int pc = automaton.entry;
  for (;;) {
    const AutomatonNode& node = automaton.nodes[pc];
    if (const auto* t = std::get_if<TestTypeNode>(&node)) {
      Value v = ex.resolve(t->occ);
      bool pass = false;
      std::string what;
      switch (t->type) {
        case TypeTest::Pair:
          pass = v.kind() == ValueKind::Pair;
          what = "pair";
          break;
        case TypeTest::EmptyList:
          pass = v.kind() == ValueKind::EmptyList;
          what = "empty";
          break;
        case TypeTest::Struct:
          pass = v.kind() == ValueKind::Struct && v.struct_tag() == t->tag;
          what = "struct:" + t->tag->name;
          break;
      }
      ex.trace({TraceKind::TypeTest, format_occurrence(t->occ),
                what + (pass ? "=>pass" : "=>fail")});
      pc = pass ? t->on_pass : t->on_fail;
    } else if (const auto* l = std::get_if<TestLiteralNode>(&node)) {
      bool pass = values_equal(ex.resolve(l->occ), l->literal);
      ex.trace({TraceKind::LiteralTest, format_occurrence(l->occ),
                display_value(l->literal) + (pass ? "=>pass" : "=>fail")});
      pc = pass ? l->on_pass : l->on_fail;
    } else if (const auto* p = std::get_if<TestPredNode>(&node)) {
      Value fn = ex.cached_fn(p->pred_id, true);
      if (fn.kind() != ValueKind::Callable) {
        throw EvalError(ErrorKind::NotCallable,
                        "`?` pattern expression must evaluate to a "
                        "procedure, got " +
                            display_value(fn));
      }
      Value arg = ex.resolve(p->occ);
      bool pass =
          apply_value(fn, std::span<const Value>(&arg, 1), ex.eval_ctx)
              .truthy();
      TraceEvent event{TraceKind::PredApply, format_occurrence(p->occ),
                       "e" + std::to_string(p->pred_id) +
                           (pass ? "=>pass" : "=>fail")};
      event.expr_id = p->pred_id;
      ex.trace(std::move(event));
      pc = pass ? p->on_pass : p->on_fail;
    } else if (const auto* b = std::get_if<BindNode>(&node)) {
      Value v = ex.resolve(b->occ);
      scratch[b->name] = v;
      ex.trace({TraceKind::Bind, format_occurrence(b->occ),
                b->name + "=" + display_value(v), b->name, v});
      pc = b->next;
    } else if (const auto* a = std::get_if<AppTransformNode>(&node)) {
      Value fn = ex.cached_fn(a->app_id, false);
      if (fn.kind() != ValueKind::Callable) {
        throw EvalError(ErrorKind::NotCallable,
                        "`app` pattern expression must evaluate to a "
                        "procedure, got " +
                            display_value(fn));
      }
      Value arg = ex.resolve(a->occ);
      ex.regs[a->result_root] =
          apply_value(fn, std::span<const Value>(&arg, 1), ex.eval_ctx);
      TraceEvent event{TraceKind::AppApply, format_occurrence(a->occ),
                       "a" + std::to_string(a->app_id) + "->r" +
                           std::to_string(a->result_root)};
      event.expr_id = a->app_id;
      ex.trace(std::move(event));
      pc = a->next;
    } else if (const auto* s = std::get_if<SeqLoopNode>(&node)) {
      pc = run_seq_loop(ex, *s, scratch) ? s->next : s->on_fail;
    } else if (const auto* succ = std::get_if<SuccessNode>(&node)) {
      rhs_out = succ->rhs_index;
      if (top_level) {
        TraceEvent event{TraceKind::Success, "-",
                         "rhs=" + std::to_string(succ->rhs_index)};
        event.rhs_index = succ->rhs_index;
        ex.trace(std::move(event));
      }
      return true;
    } else if (std::holds_alternative<FailureNode>(node)) {
      return false;
    } else {
      const auto& join = std::get<JoinNode>(node);
      if (top_level) {
        ex.trace({TraceKind::FailureJump, "-", "join"});
      }
      pc = join.target;
    }
  }
}

}  // namespace

MatchOutcome run_match(const CompiledMatch& cm, const Value& scrutinee,
                       const EnvPtr& env, TraceSink* trace) {
  Exec ex{cm, env, trace};
  ex.regs.resize(cm.num_roots);
  ex.regs[0] = scrutinee;
  ex.pred_cache.resize(cm.pred_exprs.size());
  ex.app_cache.resize(cm.app_exprs.size());

  std::map<std::string, Value> scratch;
  int rhs = -1;
  MatchOutcome outcome;
  if (!walk(ex, cm.automaton, scratch, rhs, true)) {
    return outcome;
  }
  outcome.matched = true;
  outcome.rhs_index = rhs;
  for (const std::string& name : cm.var_layouts[rhs]) {
    auto it = scratch.find(name);
    if (it == scratch.end()) {
      invariant_failure("matched clause did not bind `" + name + "`");
    }
    outcome.bindings.emplace_back(name, it->second);
  }
  return outcome;
}

Value run_clause_rhs(const MatchOutcome& outcome, const CompiledMatch& cm,
                     const EnvPtr& env, EvalContext& ctx) {
  if (!outcome.matched) {
    throw EvalError(ErrorKind::MatchFailure, "match failed");
  }
  return evaluate(cm.clause_rhs[outcome.rhs_index],
                  env->extend(outcome.bindings), ctx);
}

Value run_clause_rhs(const MatchOutcome& outcome, const CompiledMatch& cm,
                     const EnvPtr& env) {
  EvalContext ctx;
  return run_clause_rhs(outcome, cm, env, ctx);
}

MatchOutcome replay_trace(const CompiledMatch& cm,
                          const std::vector<TraceEvent>& events) {
  std::map<std::string, Value> binds;
  std::optional<int> rhs;
  for (const TraceEvent& event : events) {
    if (event.kind == TraceKind::Bind && event.bind_value) {
      binds.insert_or_assign(event.bind_name, *event.bind_value);
    } else if (event.kind == TraceKind::Success) {
      rhs = event.rhs_index;
    }
  }
  MatchOutcome outcome;
  if (!rhs) return outcome;
  outcome.matched = true;
  outcome.rhs_index = *rhs;
  for (const std::string& name : cm.var_layouts[*rhs]) {
    auto it = binds.find(name);
    if (it == binds.end()) {
      invariant_failure("trace replay is missing a binding for `" + name +
                        "`");
    }
    outcome.bindings.emplace_back(name, it->second);
  }
  return outcome;
}

}  // namespace pmx
