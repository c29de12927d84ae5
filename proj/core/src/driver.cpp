#include "pmx/driver.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "pmx/error.hpp"
#include "pmx/eval.hpp"
#include "pmx/printer.hpp"
#include "pmx/reader.hpp"

namespace pmx {

namespace {

bool head_is(const Value& form, std::string_view name) {
  return form.kind() == ValueKind::Pair && form.head().is_symbol(name);
}

[[noreturn]] void bad_form(const std::string& what, SourceSpan span) {
  throw StaticError(ErrorKind::MalformedForm, what, span);
}

std::string format_error(std::string_view source, ErrorKind kind,
                         const std::string& message, SourceSpan span) {
  std::string out = "error: ";
  out += error_kind_name(kind);
  out += ": ";
  out += message;
  if (span.end > span.begin || span.begin > 0) {
    out += " (" + describe_position(source, span) + ")";
  }
  out += "\n";
  return out;
}

}  // namespace

std::string describe_position(std::string_view source, SourceSpan span) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < span.begin && i < source.size(); ++i) {
    if (source[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " +
         std::to_string(column);
}

Session::Session(int fuel) : env_(make_base_env()), fuel_(fuel) {}

ParseOptions Session::parse_options() {
  ParseOptions opts;
  opts.statics = &statics_;
  opts.fuel = fuel_;
  opts.compiled_out = &compiled_;
  return opts;
}

ExprPtr Session::parse_expression(const Value& datum) {
  return parse_expr(datum, parse_options());
}

Value Session::eval_expression(const Value& datum, TraceSink* trace) {
  ExprPtr expr = parse_expression(datum);
  EvalContext ctx;
  ctx.trace = trace;
  return evaluate(expr, env_, ctx);
}

std::optional<std::string> Session::process_form(const Value& form,
                                                 bool execute,
                                                 TraceSink* trace) {
  if (head_is(form, "define")) {
    auto elements = *form.proper_list_elements();
    if (elements.size() != 3) {
      bad_form("define takes a name (or header) and one expression",
               form.span());
    }
    const Value& target = elements[1];
    if (target.kind() == ValueKind::Symbol) {
      ExprPtr init = parse_expression(elements[2]);
      if (!execute) return std::nullopt;
      EvalContext ctx;
      ctx.trace = trace;
      env_->define(target.symbol_name(), evaluate(init, env_, ctx));
      return std::nullopt;
    }
    // (define (f param ...) body) function sugar.
    auto header = target.proper_list_elements();
    if (!header || header->empty() ||
        (*header)[0].kind() != ValueKind::Symbol) {
      bad_form("define headers look like (name param ...)", target.span());
    }
    std::vector<Value> params((*header).begin() + 1, (*header).end());
    Value lambda = Value::list({Value::symbol("lambda"),
                                Value::list(params), elements[2]});
    ExprPtr init = parse_expression(lambda);
    if (!execute) return std::nullopt;
    EvalContext ctx;
    ctx.trace = trace;
    Value fn = evaluate(init, env_, ctx);
    env_->define((*header)[0].symbol_name(), fn);
    return std::nullopt;
  }

  if (head_is(form, "struct")) {
    auto elements = *form.proper_list_elements();
    if (elements.size() != 3 || elements[1].kind() != ValueKind::Symbol) {
      bad_form("struct definitions look like (struct name (field ...))",
               form.span());
    }
    auto field_data = elements[2].proper_list_elements();
    if (!field_data) {
      bad_form("struct fields must be a list of names", elements[2].span());
    }
    std::vector<std::string> fields;
    for (const Value& f : *field_data) {
      if (f.kind() != ValueKind::Symbol) {
        bad_form("struct field names must be symbols", f.span());
      }
      fields.push_back(f.symbol_name());
    }
    statics_.register_struct(elements[1].symbol_name(), fields, env_);
    return std::nullopt;
  }

  if (head_is(form, "define-match-expander")) {
    auto elements = *form.proper_list_elements();
    if (elements.size() < 3 || elements[1].kind() != ValueKind::Symbol) {
      bad_form(
          "expander definitions look like (define-match-expander name "
          "[use-pattern template] ...)",
          form.span());
    }
    ExpanderDef def;
    def.name = elements[1].symbol_name();
    for (std::size_t i = 2; i < elements.size(); ++i) {
      auto rule = elements[i].proper_list_elements();
      if (!rule || rule->size() != 2) {
        bad_form("expander rules look like [use-pattern template]",
                 elements[i].span());
      }
      def.rules.push_back(ExpanderRule{(*rule)[0], (*rule)[1]});
    }
    statics_.register_expander(std::move(def));
    return std::nullopt;
  }

  if (head_is(form, "check-equal?")) {
    auto elements = *form.proper_list_elements();
    if (elements.size() != 3) {
      bad_form("check-equal? takes two expressions", form.span());
    }
    ExprPtr actual_expr = parse_expression(elements[1]);
    ExprPtr expected_expr = parse_expression(elements[2]);
    if (!execute) return std::nullopt;
    EvalContext ctx;
    ctx.trace = trace;
    CheckResult result;
    result.span = form.span();
    result.actual = evaluate(actual_expr, env_, ctx);
    result.expected = evaluate(expected_expr, env_, ctx);
    result.passed = values_equal(result.actual, result.expected);
    checks_.push_back(result);
    return std::nullopt;
  }

  // Plain expression: evaluate and report its printed value.
  ExprPtr expr = parse_expression(form);
  if (!execute) return std::nullopt;
  EvalContext ctx;
  ctx.trace = trace;
  Value v = evaluate(expr, env_, ctx);
  return display_value(v);
}

namespace {

RunReport run_forms(std::string_view source, const RunOptions& opts) {
  RunReport report;
  std::ostringstream out;
  std::ostringstream err;
  Session session(opts.fuel);
  TraceSink sink;

  try {
    std::vector<Value> forms = read_all(source);
    for (const Value& form : forms) {
      std::size_t compiled_before = session.compiled_count();
      std::size_t checks_before = session.checks().size();
      sink.clear();
      auto printed =
          session.process_form(form, true, opts.trace ? &sink : nullptr);
      if (opts.dump_ir) {
        const auto& matches = session.compiled_matches();
        for (std::size_t i = compiled_before; i < matches.size(); ++i) {
          out << "match " << i << ":\n" << dump_ir(*matches[i]) << "\n";
        }
      }
      if (opts.trace && !sink.events().empty()) {
        out << sink.format();
      }
      if (printed) out << *printed << "\n";
      if (session.checks().size() > checks_before) {
        const CheckResult& check = session.checks().back();
        if (!check.passed) {
          err << "check-equal? failed ("
              << describe_position(source, check.span)
              << "): actual " << display_value(check.actual)
              << ", expected " << display_value(check.expected) << "\n";
        }
      }
    }
  } catch (const StaticError& e) {
    report.error = e.what();
    report.error_is_static = true;
    report.exit_code = 2;
    err << format_error(source, e.kind(), e.what(), e.span());
  } catch (const EvalError& e) {
    report.error = e.what();
    report.exit_code = 1;
    err << format_error(source, e.kind(), e.what(), e.span());
  }

  report.checks = session.checks();
  if (report.exit_code == 0) {
    for (const CheckResult& check : report.checks) {
      if (!check.passed) report.exit_code = 1;
    }
  }
  report.output = out.str();
  report.error_output = err.str();
  return report;
}

}  // namespace

RunReport run_source(std::string_view source, const RunOptions& opts) {
  return run_forms(source, opts);
}

RunReport run_program(const std::string& path, const RunOptions& opts) {
  std::ifstream in(path);
  if (!in) {
    RunReport report;
    report.error = "cannot open file: " + path;
    report.error_is_static = true;
    report.exit_code = 2;
    report.error_output = "error: cannot open file: " + path + "\n";
    return report;
  }
  std::ostringstream text;
  text << in.rdbuf();
  return run_forms(text.str(), opts);
}

std::string dump_program_ir(const std::string& path,
                            std::optional<int> match_index, int fuel) {
  std::ifstream in(path);
  if (!in) {
    throw StaticError(ErrorKind::BadToken, "cannot open file: " + path);
  }
  std::ostringstream text;
  text << in.rdbuf();

  Session session(fuel);
  for (const Value& form : read_all(text.str())) {
    session.process_form(form, /*execute=*/false);
  }
  const auto& matches = session.compiled_matches();
  std::ostringstream out;
  if (match_index) {
    if (*match_index < 0 ||
        *match_index >= static_cast<int>(matches.size())) {
      throw StaticError(ErrorKind::BadToken,
                        "no match with index " +
                            std::to_string(*match_index) + " (program has " +
                            std::to_string(matches.size()) + ")");
    }
    out << "match " << *match_index << ":\n"
        << dump_ir(*matches[*match_index]);
    return out.str();
  }
  for (std::size_t i = 0; i < matches.size(); ++i) {
    out << "match " << i << ":\n" << dump_ir(*matches[i]);
    if (i + 1 < matches.size()) out << "\n";
  }
  return out.str();
}

void repl(std::istream& in, std::ostream& out, std::ostream& err,
          const RunOptions& opts) {
  Session session(opts.fuel);
  TraceSink sink;
  std::string line;
  out << "pmx> " << std::flush;
  while (std::getline(in, line)) {
    try {
      for (const Value& form : read_all(line)) {
        std::size_t compiled_before = session.compiled_count();
        sink.clear();
        auto printed = session.process_form(form, true,
                                            opts.trace ? &sink : nullptr);
        if (opts.dump_ir) {
          const auto& matches = session.compiled_matches();
          for (std::size_t i = compiled_before; i < matches.size(); ++i) {
            out << "match " << i << ":\n" << dump_ir(*matches[i]) << "\n";
          }
        }
        if (opts.trace && !sink.events().empty()) out << sink.format();
        if (printed) out << *printed << "\n";
        if (!session.checks().empty() && !session.checks().back().passed &&
            head_is(form, "check-equal?")) {
          const CheckResult& check = session.checks().back();
          err << "check-equal? failed: actual "
              << display_value(check.actual) << ", expected "
              << display_value(check.expected) << "\n";
        }
      }
    } catch (const StaticError& e) {
      err << format_error(line, e.kind(), e.what(), e.span());
    } catch (const EvalError& e) {
      err << format_error(line, e.kind(), e.what(), e.span());
    }
    out << "pmx> " << std::flush;
  }
  out << "\n";
}

}  // namespace pmx
