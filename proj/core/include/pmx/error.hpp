#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "pmx/source_span.hpp"

namespace pmx {

enum class ErrorKind {
  // reader
  UnbalancedDelimiter,
  BadToken,
  // printer
  Unprintable,
  // expression / form parsing
  MalformedExpr,
  MalformedPattern,
  MalformedForm,
  // pattern frontend
  UnknownPatternHead,
  FuelExhausted,
  OrBindingMismatch,
  StructArityError,
  DuplicateVariable,
  NoRuleMatches,
  DuplicateDefinition,
  EmptyMatch,
  // evaluation
  UnboundVariable,
  ArityError,
  TypeError,
  NotCallable,
  UserError,
  MatchFailure,
  // should-not-happen
  InternalInvariantViolation,
};

std::string_view error_kind_name(ErrorKind kind);

/// Errors detected before any evaluation happens (reading, expression and
/// pattern parsing, registrations). The CLI maps these to exit code 2.
class StaticError : public std::runtime_error {
 public:
  StaticError(ErrorKind kind, std::string message, SourceSpan span = {})
      : std::runtime_error(std::move(message)), kind_(kind), span_(span) {}

  ErrorKind kind() const { return kind_; }
  SourceSpan span() const { return span_; }

 private:
  ErrorKind kind_;
  SourceSpan span_;
};

/// Errors raised while evaluating expressions or running a match. The CLI
/// maps these to exit code 1.
class EvalError : public std::runtime_error {
 public:
  EvalError(ErrorKind kind, std::string message, SourceSpan span = {})
      : std::runtime_error(std::move(message)), kind_(kind), span_(span) {}

  ErrorKind kind() const { return kind_; }
  SourceSpan span() const { return span_; }

 private:
  ErrorKind kind_;
  SourceSpan span_;
};

}  // namespace pmx
