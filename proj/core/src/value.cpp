#include "pmx/value.hpp"

#include <cassert>
#include <cmath>

#include "pmx/error.hpp"

namespace pmx {

namespace detail {
struct PairRep {
  Value head;
  Value tail;
};
}  // namespace detail

struct Value::Data {
  std::variant<std::int64_t, double, bool, detail::SymbolRep,
               detail::StringRep, detail::EmptyRep, detail::PairRep,
               detail::StructRep, Callable>
      rep;
  SourceSpan span;

  ~Data() {
    // Unwind uniquely-owned tail chains iteratively so destroying a long
    // list does not recurse once per element.
    if (auto* p = std::get_if<detail::PairRep>(&rep)) {
      auto cur = std::move(p->tail.data_);
      while (cur && cur.use_count() == 1) {
        auto* next_pair = std::get_if<detail::PairRep>(
            &const_cast<Data&>(*cur).rep);
        if (!next_pair) break;
        auto next = std::move(next_pair->tail.data_);
        cur = std::move(next);
      }
    }
  }
};

namespace {

const std::shared_ptr<const Value::Data>& empty_singleton();

template <typename Rep>
std::shared_ptr<const Value::Data> make_data(Rep rep, SourceSpan span) {
  auto data = std::make_shared<Value::Data>();
  data->rep = std::move(rep);
  data->span = span;
  return data;
}

}  // namespace

Value::Value() : data_(empty_singleton()) {}

Value Value::integer(std::int64_t v, SourceSpan span) {
  return Value(make_data(v, span));
}
Value Value::real(double v, SourceSpan span) {
  return Value(make_data(v, span));
}
Value Value::boolean(bool v, SourceSpan span) {
  return Value(make_data(v, span));
}
Value Value::symbol(std::string name, SourceSpan span) {
  return Value(make_data(detail::SymbolRep{std::move(name)}, span));
}
Value Value::string(std::string text, SourceSpan span) {
  return Value(make_data(detail::StringRep{std::move(text)}, span));
}
Value Value::empty_list(SourceSpan span) {
  if (span.begin == 0 && span.end == 0) return Value(empty_singleton());
  return Value(make_data(detail::EmptyRep{}, span));
}
Value Value::pair(Value head, Value tail, SourceSpan span) {
  return Value(
      make_data(detail::PairRep{std::move(head), std::move(tail)}, span));
}
Value Value::struct_instance(StructTag tag, std::vector<Value> fields) {
  assert(tag && tag->field_names.size() == fields.size());
  return Value(
      make_data(detail::StructRep{std::move(tag), std::move(fields)}, {}));
}
Value Value::callable(Callable c) {
  return Value(make_data(std::move(c), {}));
}

Value Value::list(std::span<const Value> elements) {
  Value out = Value::empty_list();
  for (auto it = elements.rbegin(); it != elements.rend(); ++it) {
    out = Value::pair(*it, out);
  }
  return out;
}
Value Value::list(std::initializer_list<Value> elements) {
  return list(std::span<const Value>(elements.begin(), elements.size()));
}

namespace {
const std::shared_ptr<const Value::Data>& empty_singleton() {
  static const std::shared_ptr<const Value::Data> instance =
      make_data(detail::EmptyRep{}, SourceSpan{});
  return instance;
}
}  // namespace

ValueKind Value::kind() const {
  switch (data_->rep.index()) {
    case 0: return ValueKind::Int;
    case 1: return ValueKind::Real;
    case 2: return ValueKind::Boolean;
    case 3: return ValueKind::Symbol;
    case 4: return ValueKind::String;
    case 5: return ValueKind::EmptyList;
    case 6: return ValueKind::Pair;
    case 7: return ValueKind::Struct;
    default: return ValueKind::Callable;
  }
}

SourceSpan Value::span() const { return data_->span; }

bool Value::is_symbol(std::string_view name) const {
  return kind() == ValueKind::Symbol && symbol_name() == name;
}

std::int64_t Value::as_int() const { return std::get<std::int64_t>(data_->rep); }
double Value::as_real() const { return std::get<double>(data_->rep); }
double Value::number_as_double() const {
  if (kind() == ValueKind::Int) return static_cast<double>(as_int());
  return as_real();
}
bool Value::as_bool() const { return std::get<bool>(data_->rep); }
const std::string& Value::symbol_name() const {
  return std::get<detail::SymbolRep>(data_->rep).name;
}
const std::string& Value::string_text() const {
  return std::get<detail::StringRep>(data_->rep).text;
}
const Value& Value::head() const {
  return std::get<detail::PairRep>(data_->rep).head;
}
const Value& Value::tail() const {
  return std::get<detail::PairRep>(data_->rep).tail;
}
const StructTag& Value::struct_tag() const {
  return std::get<detail::StructRep>(data_->rep).tag;
}
std::span<const Value> Value::struct_fields() const {
  return std::get<detail::StructRep>(data_->rep).fields;
}
const Callable& Value::as_callable() const {
  return std::get<Callable>(data_->rep);
}

const void* Value::identity() const { return data_.get(); }

bool Value::truthy() const {
  return kind() != ValueKind::Boolean || as_bool();
}

std::optional<std::vector<Value>> Value::proper_list_elements() const {
  std::vector<Value> out;
  Value cur = *this;
  while (cur.kind() == ValueKind::Pair) {
    out.push_back(cur.head());
    cur = cur.tail();
  }
  if (cur.kind() != ValueKind::EmptyList) return std::nullopt;
  return out;
}

bool values_equal(const Value& a, const Value& b) {
  Value x = a;
  Value y = b;
  // Walk pair spines iteratively; recurse only into heads and struct
  // fields, so long lists do not grow the stack.
  for (;;) {
    if (x.identity() == y.identity()) return true;
    if (x.kind() != y.kind()) return false;
    switch (x.kind()) {
      case ValueKind::Int: return x.as_int() == y.as_int();
      case ValueKind::Real: return x.as_real() == y.as_real();
      case ValueKind::Boolean: return x.as_bool() == y.as_bool();
      case ValueKind::Symbol: return x.symbol_name() == y.symbol_name();
      case ValueKind::String: return x.string_text() == y.string_text();
      case ValueKind::EmptyList: return true;
      case ValueKind::Callable: return false;  // identity handled above
      case ValueKind::Struct: {
        if (x.struct_tag() != y.struct_tag()) return false;
        auto xs = x.struct_fields();
        auto ys = y.struct_fields();
        if (xs.size() != ys.size()) return false;
        for (std::size_t i = 0; i < xs.size(); ++i) {
          if (!values_equal(xs[i], ys[i])) return false;
        }
        return true;
      }
      case ValueKind::Pair: {
        if (!values_equal(x.head(), y.head())) return false;
        Value xt = x.tail();
        Value yt = y.tail();
        x = xt;
        y = yt;
        break;
      }
    }
  }
}

std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnbalancedDelimiter: return "UnbalancedDelimiter";
    case ErrorKind::BadToken: return "BadToken";
    case ErrorKind::Unprintable: return "Unprintable";
    case ErrorKind::MalformedExpr: return "MalformedExpr";
    case ErrorKind::MalformedPattern: return "MalformedPattern";
    case ErrorKind::MalformedForm: return "MalformedForm";
    case ErrorKind::UnknownPatternHead: return "UnknownPatternHead";
    case ErrorKind::FuelExhausted: return "FuelExhausted";
    case ErrorKind::OrBindingMismatch: return "OrBindingMismatch";
    case ErrorKind::StructArityError: return "StructArityError";
    case ErrorKind::DuplicateVariable: return "DuplicateVariable";
    case ErrorKind::NoRuleMatches: return "NoRuleMatches";
    case ErrorKind::DuplicateDefinition: return "DuplicateDefinition";
    case ErrorKind::EmptyMatch: return "EmptyMatch";
    case ErrorKind::UnboundVariable: return "UnboundVariable";
    case ErrorKind::ArityError: return "ArityError";
    case ErrorKind::TypeError: return "TypeError";
    case ErrorKind::NotCallable: return "NotCallable";
    case ErrorKind::UserError: return "UserError";
    case ErrorKind::MatchFailure: return "MatchFailure";
    case ErrorKind::InternalInvariantViolation:
      return "InternalInvariantViolation";
  }
  return "UnknownError";
}

}  // namespace pmx
