#include "pmx/printer.hpp"

#include <charconv>
#include <cmath>

#include "pmx/error.hpp"

namespace pmx {

namespace {

void render_real(double v, std::string& out) {
  if (std::isnan(v)) {
    out += "+nan.0";
    return;
  }
  if (std::isinf(v)) {
    out += v > 0 ? "+inf.0" : "-inf.0";
    return;
  }
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  std::string_view digits(buf, ptr - buf);
  out += digits;
  // Keep reals distinguishable from integers on re-read.
  if (digits.find('.') == std::string_view::npos &&
      digits.find('e') == std::string_view::npos) {
    out += ".0";
  }
}

void render_string(const std::string& text, std::string& out) {
  out.push_back('"');
  for (char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out.push_back(c);
    }
  }
  out.push_back('"');
}

void render(const Value& v, std::string& out, bool strict) {
  switch (v.kind()) {
    case ValueKind::Int:
      out += std::to_string(v.as_int());
      return;
    case ValueKind::Real:
      render_real(v.as_real(), out);
      return;
    case ValueKind::Boolean:
      out += v.as_bool() ? "#t" : "#f";
      return;
    case ValueKind::Symbol:
      out += v.symbol_name();
      return;
    case ValueKind::String:
      render_string(v.string_text(), out);
      return;
    case ValueKind::EmptyList:
      out += "()";
      return;
    case ValueKind::Struct: {
      out += "#(struct ";
      out += v.struct_tag()->name;
      for (const Value& field : v.struct_fields()) {
        out.push_back(' ');
        render(field, out, strict);
      }
      out.push_back(')');
      return;
    }
    case ValueKind::Callable:
      if (strict) {
        throw StaticError(ErrorKind::Unprintable,
                          "cannot print a procedure value");
      }
      out += "#<procedure:" + v.as_callable().name + ">";
      return;
    case ValueKind::Pair: {
      out.push_back('(');
      Value cur = v;
      bool first = true;
      while (cur.kind() == ValueKind::Pair) {
        if (!first) out.push_back(' ');
        first = false;
        render(cur.head(), out, strict);
        cur = cur.tail();
      }
      if (cur.kind() != ValueKind::EmptyList) {
        out += " . ";
        render(cur, out, strict);
      }
      out.push_back(')');
      return;
    }
  }
}

}  // namespace

std::string print_value(const Value& v) {
  std::string out;
  render(v, out, /*strict=*/true);
  return out;
}

std::string display_value(const Value& v) {
  std::string out;
  render(v, out, /*strict=*/false);
  return out;
}

}  // namespace pmx
