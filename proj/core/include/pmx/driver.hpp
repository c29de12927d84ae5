#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pmx/env.hpp"
#include "pmx/match_compile.hpp"
#include "pmx/parse.hpp"
#include "pmx/static_env.hpp"
#include "pmx/trace.hpp"

namespace pmx {

struct CheckResult {
  bool passed = false;
  Value actual;
  Value expected;
  SourceSpan span;
};

/// Everything one program run produced: the text written to standard out,
/// diagnostics for standard error, the check results, the first error if
/// any, and the process exit code (0 = clean and all checks passed,
/// 1 = runtime error or failed check, 2 = static error).
struct RunReport {
  std::string output;
  std::string error_output;
  std::vector<CheckResult> checks;
  std::optional<std::string> error;
  bool error_is_static = false;
  int exit_code = 0;
};

struct RunOptions {
  bool dump_ir = false;
  bool trace = false;
  int fuel = kDefaultFuel;
};

/// One program-processing session: owns the runtime environment, the
/// static registries, and the list of matches compiled so far. Toplevel
/// forms are processed in order; definitions are visible to later forms
/// only.
class Session {
 public:
  explicit Session(int fuel = kDefaultFuel);

  const EnvPtr& env() const { return env_; }
  StaticEnv& statics() { return statics_; }

  /// Processes one toplevel form. With `execute` false only the static
  /// work happens (definitions register, matches compile, nothing runs).
  /// Returns the printed line for expression forms, if any.
  std::optional<std::string> process_form(const Value& form, bool execute,
                                          TraceSink* trace = nullptr);

  /// Parses (and match-compiles) an expression in this session.
  ExprPtr parse_expression(const Value& datum);
  /// Parses and evaluates an expression in this session.
  Value eval_expression(const Value& datum, TraceSink* trace = nullptr);

  const std::vector<std::shared_ptr<const CompiledMatch>>&
  compiled_matches() const {
    return compiled_;
  }
  /// Matches compiled after index `from` (used to dump new IR per form).
  std::size_t compiled_count() const { return compiled_.size(); }

  const std::vector<CheckResult>& checks() const { return checks_; }

 private:
  ParseOptions parse_options();

  EnvPtr env_;
  StaticEnv statics_;
  int fuel_;
  std::vector<std::shared_ptr<const CompiledMatch>> compiled_;
  std::vector<CheckResult> checks_;
};

/// Loads and runs a program file: definitions install, expressions print
/// their values, check-equal? forms compare with structural equality.
/// Processing stops at the first error.
RunReport run_program(const std::string& path, const RunOptions& opts = {});

/// Same as run_program but over in-memory source text.
RunReport run_source(std::string_view source, const RunOptions& opts = {});

/// Loads a file statically (no evaluation) and renders the IR of each
/// compiled match, or only the match with the given zero-based index.
/// Throws StaticError on load problems.
std::string dump_program_ir(const std::string& path,
                            std::optional<int> match_index,
                            int fuel = kDefaultFuel);

/// Interactive session: one or more forms per line, state persists,
/// errors print and the session continues.
void repl(std::istream& in, std::ostream& out, std::ostream& err,
          const RunOptions& opts = {});

/// `line:column` rendering of a span start against the source text.
std::string describe_position(std::string_view source, SourceSpan span);

}  // namespace pmx
