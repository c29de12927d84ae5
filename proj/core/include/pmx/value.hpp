#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "pmx/source_span.hpp"

namespace pmx {

class Value;
struct EvalContext;

enum class ValueKind {
  Int,
  Real,
  Boolean,
  Symbol,
  String,
  EmptyList,
  Pair,
  Struct,
  Callable,
};

/// Shape of a user-defined structure. One instance is allocated per
/// (struct name (field ...)) registration; the pointer identity is the
/// struct tag used by instances, patterns, and predicates.
struct StructShape {
  std::string name;
  std::vector<std::string> field_names;
};
using StructTag = std::shared_ptr<const StructShape>;

struct ClosureData;  // defined in eval.hpp

/// A callable value: either a native (builtin) function or a closure made
/// by evaluating a lambda. Equality on callables is identity of the
/// enclosing Value allocation.
struct Callable {
  std::string name;  // diagnostic only
  std::function<Value(std::span<const Value>, EvalContext&)> native;
  std::shared_ptr<const ClosureData> closure;
};

namespace detail {
struct SymbolRep {
  std::string name;
};
struct StringRep {
  std::string text;
};
struct EmptyRep {};
struct PairRep;
struct StructRep {
  StructTag tag;
  std::vector<Value> fields;
};
}  // namespace detail

/// Immutable runtime datum. Values are cheap handles over shared immutable
/// storage; they are safe to copy and share across threads once built.
class Value {
 public:
  Value();  // empty list

  static Value integer(std::int64_t v, SourceSpan span = {});
  static Value real(double v, SourceSpan span = {});
  static Value boolean(bool v, SourceSpan span = {});
  static Value symbol(std::string name, SourceSpan span = {});
  static Value string(std::string text, SourceSpan span = {});
  static Value empty_list(SourceSpan span = {});
  static Value pair(Value head, Value tail, SourceSpan span = {});
  static Value struct_instance(StructTag tag, std::vector<Value> fields);
  static Value callable(Callable c);

  /// Builds a proper list from the given elements.
  static Value list(std::span<const Value> elements);
  static Value list(std::initializer_list<Value> elements);

  ValueKind kind() const;
  SourceSpan span() const;

  bool is_number() const {
    return kind() == ValueKind::Int || kind() == ValueKind::Real;
  }
  bool is_symbol(std::string_view name) const;

  std::int64_t as_int() const;
  double as_real() const;
  /// Numeric value widened to double; valid for Int and Real.
  double number_as_double() const;
  bool as_bool() const;
  const std::string& symbol_name() const;
  const std::string& string_text() const;
  const Value& head() const;
  const Value& tail() const;
  const StructTag& struct_tag() const;
  std::span<const Value> struct_fields() const;
  const Callable& as_callable() const;

  /// Stable identity of the underlying allocation; used for callable
  /// equality.
  const void* identity() const;

  /// Everything except #f counts as true.
  bool truthy() const;

  /// Elements of a proper list, or nullopt for improper lists / non-lists.
  std::optional<std::vector<Value>> proper_list_elements() const;

  bool operator==(const Value& other) const = delete;

  struct Data;  // storage; layout private to value.cpp

 private:
  explicit Value(std::shared_ptr<const Data> data) : data_(std::move(data)) {}

  std::shared_ptr<const Data> data_;

  friend bool values_equal(const Value& a, const Value& b);
};

/// Deep structural equality. Struct instances compare by tag plus fields;
/// callables compare by identity.
bool values_equal(const Value& a, const Value& b);

}  // namespace pmx
