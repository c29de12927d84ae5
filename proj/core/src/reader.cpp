#include "pmx/reader.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <string>

#include "pmx/error.hpp"

namespace pmx {

namespace {

bool is_delimiter(char c) {
  return std::isspace(static_cast<unsigned char>(c)) || c == '(' ||
         c == ')' || c == '[' || c == ']' || c == '"' || c == ';' ||
         c == '\'';
}

struct Reader {
  std::string_view text;
  std::size_t pos = 0;

  [[noreturn]] void fail(ErrorKind kind, std::string msg, SourceSpan span) {
    throw StaticError(kind, std::move(msg), span);
  }

  void skip_atmosphere() {
    while (pos < text.size()) {
      char c = text[pos];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos;
      } else if (c == ';') {
        while (pos < text.size() && text[pos] != '\n') ++pos;
      } else {
        break;
      }
    }
  }

  bool at_end() {
    skip_atmosphere();
    return pos >= text.size();
  }

  Value read_datum() {
    skip_atmosphere();
    if (pos >= text.size()) {
      fail(ErrorKind::UnbalancedDelimiter, "unexpected end of input",
           {text.size(), text.size()});
    }
    char c = text[pos];
    if (c == '(' || c == '[') return read_list(c);
    if (c == ')' || c == ']') {
      fail(ErrorKind::UnbalancedDelimiter,
           std::string("unexpected `") + c + "`", {pos, pos + 1});
    }
    if (c == '\'') {
      std::size_t start = pos++;
      Value quoted = read_datum();
      SourceSpan span{start, quoted.span().end};
      return Value::list({Value::symbol("quote", {start, start + 1}), quoted});
    }
    if (c == '"') return read_string();
    return read_atom();
  }

  Value read_list(char opener) {
    char closer = opener == '(' ? ')' : ']';
    std::size_t start = pos++;
    std::vector<Value> elements;
    bool dotted = false;
    Value dotted_tail;
    for (;;) {
      skip_atmosphere();
      if (pos >= text.size()) {
        fail(ErrorKind::UnbalancedDelimiter,
             std::string("missing `") + closer + "`", {start, start + 1});
      }
      char c = text[pos];
      if (c == ')' || c == ']') {
        if (c != closer) {
          fail(ErrorKind::UnbalancedDelimiter,
               std::string("expected `") + closer + "` but found `" + c + "`",
               {pos, pos + 1});
        }
        ++pos;
        break;
      }
      if (is_dot_token()) {
        std::size_t dot_pos = pos;
        if (elements.empty()) {
          fail(ErrorKind::BadToken, "`.` needs a preceding datum",
               {dot_pos, dot_pos + 1});
        }
        ++pos;
        dotted_tail = read_datum();
        dotted = true;
        skip_atmosphere();
        if (pos >= text.size() || (text[pos] != ')' && text[pos] != ']')) {
          fail(ErrorKind::BadToken, "exactly one datum may follow `.`",
               {dot_pos, dot_pos + 1});
        }
        continue;
      }
      elements.push_back(read_datum());
    }
    SourceSpan span{start, pos};
    Value out = dotted ? dotted_tail : Value::empty_list(span);
    for (auto it = elements.rbegin(); it != elements.rend(); ++it) {
      out = Value::pair(*it, out, span);
    }
    return out;
  }

  bool is_dot_token() {
    if (text[pos] != '.') return false;
    return pos + 1 >= text.size() || is_delimiter(text[pos + 1]);
  }

  Value read_string() {
    std::size_t start = pos++;
    std::string out;
    while (pos < text.size()) {
      char c = text[pos];
      if (c == '"') {
        ++pos;
        return Value::string(std::move(out), {start, pos});
      }
      if (c == '\\') {
        if (pos + 1 >= text.size()) break;
        char esc = text[pos + 1];
        switch (esc) {
          case '"': out.push_back('"'); break;
          case '\\': out.push_back('\\'); break;
          case 'n': out.push_back('\n'); break;
          case 't': out.push_back('\t'); break;
          case 'r': out.push_back('\r'); break;
          default:
            fail(ErrorKind::BadToken,
                 std::string("unknown string escape `\\") + esc + "`",
                 {pos, pos + 2});
        }
        pos += 2;
      } else {
        out.push_back(c);
        ++pos;
      }
    }
    fail(ErrorKind::UnbalancedDelimiter, "unterminated string literal",
         {start, start + 1});
  }

  Value read_atom() {
    std::size_t start = pos;
    while (pos < text.size() && !is_delimiter(text[pos])) ++pos;
    std::string_view token = text.substr(start, pos - start);
    SourceSpan span{start, pos};

    if (token == "#t") return Value::boolean(true, span);
    if (token == "#f") return Value::boolean(false, span);
    if (token.front() == '#') {
      fail(ErrorKind::BadToken,
           "unsupported `#` syntax: " + std::string(token), span);
    }
    if (token == "+inf.0") return Value::real(HUGE_VAL, span);
    if (token == "-inf.0") return Value::real(-HUGE_VAL, span);
    if (token == "+nan.0") return Value::real(std::nan(""), span);

    if (looks_numeric(token)) return read_number(token, span);
    return Value::symbol(std::string(token), span);
  }

  // A token starting with a digit, or with a sign/dot followed by a digit,
  // must parse as a number in full.
  static bool looks_numeric(std::string_view token) {
    std::size_t i = 0;
    if (token[i] == '+' || token[i] == '-') ++i;
    if (i < token.size() && token[i] == '.') ++i;
    return i < token.size() &&
           std::isdigit(static_cast<unsigned char>(token[i]));
  }

  Value read_number(std::string_view token, SourceSpan span) {
    bool real = token.find('.') != std::string_view::npos ||
                token.find('e') != std::string_view::npos ||
                token.find('E') != std::string_view::npos;
    if (real) {
      double v = 0;
      auto [ptr, ec] =
          std::from_chars(token.data(), token.data() + token.size(), v);
      if (ec != std::errc{} || ptr != token.data() + token.size()) {
        fail(ErrorKind::BadToken, "malformed number: " + std::string(token),
             span);
      }
      return Value::real(v, span);
    }
    std::int64_t v = 0;
    auto [ptr, ec] =
        std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
      fail(ErrorKind::BadToken, "malformed number: " + std::string(token),
           span);
    }
    return Value::integer(v, span);
  }
};

}  // namespace

std::vector<Value> read_all(std::string_view text) {
  Reader reader{text};
  std::vector<Value> out;
  while (!reader.at_end()) {
    out.push_back(reader.read_datum());
  }
  return out;
}

Value read_one(std::string_view text) {
  auto data = read_all(text);
  if (data.size() != 1) {
    throw StaticError(ErrorKind::BadToken,
                      "expected exactly one datum, found " +
                          std::to_string(data.size()),
                      {0, text.size()});
  }
  return data.front();
}

}  // namespace pmx
