#include "pmx/eval.hpp"

#include <cmath>
#include <cstdint>

#include "pmx/error.hpp"
#include "pmx/match_run.hpp"
#include "pmx/printer.hpp"

namespace pmx {

namespace {

[[noreturn]] void type_error(const std::string& msg, SourceSpan span = {}) {
  throw EvalError(ErrorKind::TypeError, msg, span);
}

void check_arity(std::string_view name, std::span<const Value> args,
                 std::size_t min, std::size_t max = SIZE_MAX) {
  if (args.size() < min || args.size() > max) {
    throw EvalError(ErrorKind::ArityError,
                    std::string(name) + ": wrong argument count (" +
                        std::to_string(args.size()) + ")");
  }
}

const Value& expect_number(std::string_view who, const Value& v) {
  if (!v.is_number()) {
    type_error(std::string(who) + ": expected a number, got " +
               display_value(v));
  }
  return v;
}

bool both_ints(const Value& a, const Value& b) {
  return a.kind() == ValueKind::Int && b.kind() == ValueKind::Int;
}

Value add2(const Value& a, const Value& b) {
  if (both_ints(a, b)) return Value::integer(a.as_int() + b.as_int());
  return Value::real(a.number_as_double() + b.number_as_double());
}
Value sub2(const Value& a, const Value& b) {
  if (both_ints(a, b)) return Value::integer(a.as_int() - b.as_int());
  return Value::real(a.number_as_double() - b.number_as_double());
}
Value mul2(const Value& a, const Value& b) {
  if (both_ints(a, b)) return Value::integer(a.as_int() * b.as_int());
  return Value::real(a.number_as_double() * b.number_as_double());
}
Value div2(const Value& a, const Value& b) {
  if (both_ints(a, b)) {
    if (b.as_int() == 0) type_error("/: division by zero");
    if (a.as_int() % b.as_int() == 0) {
      return Value::integer(a.as_int() / b.as_int());
    }
  }
  return Value::real(a.number_as_double() / b.number_as_double());
}

Value num_sqrt(const Value& v) {
  expect_number("sqrt", v);
  if (v.kind() == ValueKind::Int) {
    std::int64_t n = v.as_int();
    if (n < 0) type_error("sqrt: negative argument");
    // An exact integer root stays an exact integer.
    auto root = static_cast<std::int64_t>(std::llround(std::sqrt(
        static_cast<double>(n))));
    for (std::int64_t r = root > 0 ? root - 1 : 0; r <= root + 1; ++r) {
      if (r >= 0 && r * r == n) return Value::integer(r);
    }
    return Value::real(std::sqrt(static_cast<double>(n)));
  }
  double d = v.as_real();
  if (d < 0) type_error("sqrt: negative argument");
  return Value::real(std::sqrt(d));
}

bool is_integral(const Value& v) {
  if (v.kind() == ValueKind::Int) return true;
  if (v.kind() == ValueKind::Real) {
    double d = v.as_real();
    return std::isfinite(d) && d == std::trunc(d);
  }
  return false;
}

std::vector<Value> expect_proper_list(std::string_view who, const Value& v) {
  auto elems = v.proper_list_elements();
  if (!elems) {
    type_error(std::string(who) + ": expected a proper list, got " +
               display_value(v));
  }
  return std::move(*elems);
}

const Value& list_ref(std::string_view who, const Value& v, std::size_t i) {
  const Value* cur = &v;
  for (std::size_t k = 0; k < i; ++k) {
    if (cur->kind() != ValueKind::Pair) {
      type_error(std::string(who) + ": expected a list with at least " +
                 std::to_string(i + 1) + " elements, got " + display_value(v));
    }
    cur = &cur->tail();
  }
  if (cur->kind() != ValueKind::Pair) {
    type_error(std::string(who) + ": expected a list with at least " +
               std::to_string(i + 1) + " elements, got " + display_value(v));
  }
  return cur->head();
}

std::string format_directive(const Value& v) {
  // ~a splices strings and symbols as bare text, everything else as printed.
  if (v.kind() == ValueKind::String) return v.string_text();
  if (v.kind() == ValueKind::Symbol) return v.symbol_name();
  return display_value(v);
}

void install_builtins(const EnvPtr& env) {
  auto def = [&](const std::string& name, auto fn) {
    define_native(env, name, fn);
  };

  def("+", [](std::span<const Value> args, EvalContext&) {
    Value acc = Value::integer(0);
    for (const Value& v : args) acc = add2(acc, expect_number("+", v));
    return acc;
  });
  def("-", [](std::span<const Value> args, EvalContext&) {
    check_arity("-", args, 1);
    if (args.size() == 1) {
      return sub2(Value::integer(0), expect_number("-", args[0]));
    }
    Value acc = expect_number("-", args[0]);
    for (std::size_t i = 1; i < args.size(); ++i) {
      acc = sub2(acc, expect_number("-", args[i]));
    }
    return acc;
  });
  def("*", [](std::span<const Value> args, EvalContext&) {
    Value acc = Value::integer(1);
    for (const Value& v : args) acc = mul2(acc, expect_number("*", v));
    return acc;
  });
  def("/", [](std::span<const Value> args, EvalContext&) {
    check_arity("/", args, 1);
    if (args.size() == 1) {
      return div2(Value::integer(1), expect_number("/", args[0]));
    }
    Value acc = expect_number("/", args[0]);
    for (std::size_t i = 1; i < args.size(); ++i) {
      acc = div2(acc, expect_number("/", args[i]));
    }
    return acc;
  });
  def("sqrt", [](std::span<const Value> args, EvalContext&) {
    check_arity("sqrt", args, 1, 1);
    return num_sqrt(args[0]);
  });
  def("sqr", [](std::span<const Value> args, EvalContext&) {
    check_arity("sqr", args, 1, 1);
    const Value& v = expect_number("sqr", args[0]);
    return mul2(v, v);
  });
  def("add1", [](std::span<const Value> args, EvalContext&) {
    check_arity("add1", args, 1, 1);
    return add2(expect_number("add1", args[0]), Value::integer(1));
  });
  def("apply", [](std::span<const Value> args, EvalContext& ctx) {
    check_arity("apply", args, 2);
    std::vector<Value> call_args(args.begin() + 1, args.end() - 1);
    auto rest = expect_proper_list("apply", args.back());
    call_args.insert(call_args.end(), rest.begin(), rest.end());
    return apply_value(args[0], call_args, ctx);
  });
  def("map", [](std::span<const Value> args, EvalContext& ctx) {
    check_arity("map", args, 2, 2);
    auto elems = expect_proper_list("map", args[1]);
    std::vector<Value> out;
    out.reserve(elems.size());
    for (const Value& e : elems) {
      out.push_back(apply_value(args[0], std::span<const Value>(&e, 1), ctx));
    }
    return Value::list(out);
  });
  def("curry", [](std::span<const Value> args, EvalContext&) {
    check_arity("curry", args, 1);
    Value fn = args[0];
    std::vector<Value> held(args.begin() + 1, args.end());
    return Value::callable(Callable{
        "curried",
        [fn, held](std::span<const Value> more, EvalContext& inner) {
          std::vector<Value> all = held;
          all.insert(all.end(), more.begin(), more.end());
          return apply_value(fn, all, inner);
        },
        nullptr});
  });
  def("cons", [](std::span<const Value> args, EvalContext&) {
    check_arity("cons", args, 2, 2);
    return Value::pair(args[0], args[1]);
  });
  def("list", [](std::span<const Value> args, EvalContext&) {
    return Value::list(args);
  });
  def("first", [](std::span<const Value> args, EvalContext&) {
    check_arity("first", args, 1, 1);
    return list_ref("first", args[0], 0);
  });
  def("second", [](std::span<const Value> args, EvalContext&) {
    check_arity("second", args, 1, 1);
    return list_ref("second", args[0], 1);
  });
  def("third", [](std::span<const Value> args, EvalContext&) {
    check_arity("third", args, 1, 1);
    return list_ref("third", args[0], 2);
  });
  def("rest", [](std::span<const Value> args, EvalContext&) {
    check_arity("rest", args, 1, 1);
    if (args[0].kind() != ValueKind::Pair) {
      type_error("rest: expected a pair, got " + display_value(args[0]));
    }
    return args[0].tail();
  });
  def("length", [](std::span<const Value> args, EvalContext&) {
    check_arity("length", args, 1, 1);
    auto elems = expect_proper_list("length", args[0]);
    return Value::integer(static_cast<std::int64_t>(elems.size()));
  });
  def("equal?", [](std::span<const Value> args, EvalContext&) {
    check_arity("equal?", args, 2, 2);
    return Value::boolean(values_equal(args[0], args[1]));
  });
  def("number?", [](std::span<const Value> args, EvalContext&) {
    check_arity("number?", args, 1, 1);
    return Value::boolean(args[0].is_number());
  });
  def("real?", [](std::span<const Value> args, EvalContext&) {
    check_arity("real?", args, 1, 1);
    return Value::boolean(args[0].is_number());
  });
  def("integer?", [](std::span<const Value> args, EvalContext&) {
    check_arity("integer?", args, 1, 1);
    return Value::boolean(is_integral(args[0]));
  });
  def("even?", [](std::span<const Value> args, EvalContext&) {
    check_arity("even?", args, 1, 1);
    if (!is_integral(args[0])) {
      type_error("even?: expected an integer, got " + display_value(args[0]));
    }
    std::int64_t n = args[0].kind() == ValueKind::Int
                         ? args[0].as_int()
                         : static_cast<std::int64_t>(args[0].as_real());
    return Value::boolean(n % 2 == 0);
  });
  def("string?", [](std::span<const Value> args, EvalContext&) {
    check_arity("string?", args, 1, 1);
    return Value::boolean(args[0].kind() == ValueKind::String);
  });
  def("string-append", [](std::span<const Value> args, EvalContext&) {
    std::string out;
    for (const Value& v : args) {
      if (v.kind() != ValueKind::String) {
        type_error("string-append: expected a string, got " +
                   display_value(v));
      }
      out += v.string_text();
    }
    return Value::string(std::move(out));
  });
  def("format", [](std::span<const Value> args, EvalContext&) {
    check_arity("format", args, 1);
    if (args[0].kind() != ValueKind::String) {
      type_error("format: expected a format string, got " +
                 display_value(args[0]));
    }
    const std::string& fmt = args[0].string_text();
    std::string out;
    std::size_t next_arg = 1;
    for (std::size_t i = 0; i < fmt.size(); ++i) {
      if (fmt[i] != '~') {
        out.push_back(fmt[i]);
        continue;
      }
      if (i + 1 >= fmt.size()) {
        type_error("format: dangling `~` in format string");
      }
      char directive = fmt[++i];
      if (directive == 'a') {
        if (next_arg >= args.size()) {
          throw EvalError(ErrorKind::ArityError,
                          "format: too few arguments for format string");
        }
        out += format_directive(args[next_arg++]);
      } else if (directive == 'n') {
        out.push_back('\n');
      } else {
        type_error(std::string("format: unsupported directive `~") +
                   directive + "`");
      }
    }
    if (next_arg != args.size()) {
      throw EvalError(ErrorKind::ArityError,
                      "format: too many arguments for format string");
    }
    return Value::string(std::move(out));
  });
  def("error", [](std::span<const Value> args, EvalContext&) -> Value {
    check_arity("error", args, 1, 1);
    if (args[0].kind() != ValueKind::String) {
      type_error("error: expected a message string");
    }
    throw EvalError(ErrorKind::UserError, args[0].string_text());
  });
}

}  // namespace

Value define_native(
    const EnvPtr& env, const std::string& name,
    std::function<Value(std::span<const Value>, EvalContext&)> fn) {
  Value callable = Value::callable(Callable{name, std::move(fn), nullptr});
  env->define(name, callable);
  return callable;
}

EnvPtr make_base_env() {
  EnvPtr env = Env::make();
  install_builtins(env);
  return env;
}

Value apply_value(const Value& fn, std::span<const Value> args,
                  EvalContext& ctx) {
  if (fn.kind() != ValueKind::Callable) {
    throw EvalError(ErrorKind::NotCallable,
                    "application of a non-procedure: " + display_value(fn));
  }
  const Callable& c = fn.as_callable();
  if (c.native) return c.native(args, ctx);
  const ClosureData& closure = *c.closure;
  if (args.size() != closure.params.size()) {
    throw EvalError(ErrorKind::ArityError,
                    c.name + ": expected " +
                        std::to_string(closure.params.size()) +
                        " arguments, got " + std::to_string(args.size()));
  }
  std::vector<std::pair<std::string, Value>> bindings;
  bindings.reserve(args.size());
  for (std::size_t i = 0; i < args.size(); ++i) {
    bindings.emplace_back(closure.params[i], args[i]);
  }
  return evaluate(closure.body, closure.env->extend(bindings), ctx);
}

Value evaluate(const ExprPtr& expr, const EnvPtr& env, EvalContext& ctx) {
  const Expr& e = *expr;
  if (const auto* lit = std::get_if<LiteralExpr>(&e.node)) {
    return lit->value;
  }
  if (const auto* quote = std::get_if<QuoteExpr>(&e.node)) {
    return quote->datum;
  }
  if (const auto* var = std::get_if<VarRefExpr>(&e.node)) {
    auto found = env->lookup(var->name);
    if (!found) {
      throw EvalError(ErrorKind::UnboundVariable,
                      "unbound variable: " + var->name, e.span);
    }
    return *found;
  }
  if (const auto* lambda = std::get_if<LambdaExpr>(&e.node)) {
    auto closure = std::make_shared<ClosureData>(
        ClosureData{lambda->params, lambda->body, env});
    return Value::callable(Callable{"lambda", nullptr, std::move(closure)});
  }
  if (const auto* app = std::get_if<ApplicationExpr>(&e.node)) {
    Value fn = evaluate(app->fn, env, ctx);
    std::vector<Value> args;
    args.reserve(app->args.size());
    for (const ExprPtr& arg : app->args) {
      args.push_back(evaluate(arg, env, ctx));
    }
    return apply_value(fn, args, ctx);
  }
  if (const auto* let = std::get_if<LetExpr>(&e.node)) {
    std::vector<std::pair<std::string, Value>> bindings;
    bindings.reserve(let->bindings.size());
    for (const auto& [name, init] : let->bindings) {
      bindings.emplace_back(name, evaluate(init, env, ctx));
    }
    return evaluate(let->body, env->extend(bindings), ctx);
  }
  if (const auto* branch = std::get_if<IfExpr>(&e.node)) {
    Value test = evaluate(branch->test, env, ctx);
    return evaluate(test.truthy() ? branch->then_branch
                                  : branch->else_branch,
                    env, ctx);
  }
  const auto& match = std::get<MatchExpr>(e.node);
  Value scrutinee = evaluate(match.compiled->scrutinee, env, ctx);
  MatchOutcome outcome =
      run_match(*match.compiled, scrutinee, env, ctx.trace);
  if (!outcome.matched) {
    throw EvalError(ErrorKind::MatchFailure, "match failed", e.span);
  }
  return run_clause_rhs(outcome, *match.compiled, env, ctx);
}

Value evaluate(const ExprPtr& expr, const EnvPtr& env) {
  EvalContext ctx;
  return evaluate(expr, env, ctx);
}

}  // namespace pmx
