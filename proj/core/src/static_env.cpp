#include "pmx/static_env.hpp"

#include <map>
#include <optional>
#include <set>

#include "pmx/error.hpp"
#include "pmx/eval.hpp"
#include "pmx/printer.hpp"

namespace pmx {

namespace {

constexpr std::string_view kEllipsis = "...";

bool is_ellipsis(const Value& v) { return v.is_symbol(kEllipsis); }

/// Captured material for one template variable: a datum at ellipsis depth
/// zero, or a sequence of captures one level down.
struct Capture {
  std::optional<Value> leaf;
  std::vector<Capture> seq;
};

using CaptureMap = std::map<std::string, Capture>;

struct ListShape {
  std::vector<Value> elements;
  // Position of the repeated element, if an ellipsis is present; the
  // ellipsis marker itself is removed from `elements`.
  std::optional<std::size_t> repeated;
};

/// Splits a template-level list into prefix / repeated / suffix form,
/// enforcing ellipsis placement rules.
ListShape analyze_list(const std::vector<Value>& elements, SourceSpan span) {
  ListShape shape;
  for (const Value& e : elements) {
    if (is_ellipsis(e)) {
      if (shape.elements.empty()) {
        throw StaticError(ErrorKind::MalformedForm,
                          "`...` must follow a subpattern", span);
      }
      if (shape.repeated) {
        throw StaticError(ErrorKind::MalformedForm,
                          "at most one `...` per list level", span);
      }
      shape.repeated = shape.elements.size() - 1;
    } else {
      shape.elements.push_back(e);
    }
  }
  return shape;
}

void collect_vars(const Value& pattern, int depth,
                  std::map<std::string, int>& depths) {
  if (pattern.kind() == ValueKind::Symbol) {
    const std::string& name = pattern.symbol_name();
    if (name == "_" || name == kEllipsis) return;
    if (depths.count(name)) {
      throw StaticError(ErrorKind::MalformedForm,
                        "template variable captured twice: " + name,
                        pattern.span());
    }
    depths.emplace(name, depth);
    return;
  }
  if (pattern.kind() != ValueKind::Pair) return;
  auto elements = pattern.proper_list_elements();
  if (!elements) {
    throw StaticError(ErrorKind::MalformedForm,
                      "expander rule patterns must be proper lists",
                      pattern.span());
  }
  ListShape shape = analyze_list(*elements, pattern.span());
  for (std::size_t i = 0; i < shape.elements.size(); ++i) {
    int d = depth + (shape.repeated && *shape.repeated == i ? 1 : 0);
    collect_vars(shape.elements[i], d, depths);
  }
}

bool match_template(const Value& pattern, const Value& input,
                    CaptureMap& captures);

bool match_repetition(const Value& repeated,
                      std::span<const Value> inputs, CaptureMap& captures) {
  std::map<std::string, int> vars;
  collect_vars(repeated, 0, vars);
  std::map<std::string, Capture> accum;
  for (const auto& [name, depth] : vars) {
    (void)depth;
    accum.emplace(name, Capture{});
  }
  for (const Value& input : inputs) {
    CaptureMap inner;
    if (!match_template(repeated, input, inner)) return false;
    for (auto& [name, capture] : inner) {
      accum[name].seq.push_back(std::move(capture));
    }
  }
  for (auto& [name, capture] : accum) {
    captures.emplace(name, std::move(capture));
  }
  return true;
}

bool match_template(const Value& pattern, const Value& input,
                    CaptureMap& captures) {
  if (pattern.kind() == ValueKind::Symbol) {
    const std::string& name = pattern.symbol_name();
    if (name == "_") return true;
    captures[name] = Capture{input, {}};
    return true;
  }
  if (pattern.kind() == ValueKind::Pair ||
      pattern.kind() == ValueKind::EmptyList) {
    auto pattern_elems = pattern.proper_list_elements();
    if (!pattern_elems) return false;
    auto input_elems = input.proper_list_elements();
    if (!input_elems) return false;
    ListShape shape = analyze_list(*pattern_elems, pattern.span());
    if (!shape.repeated) {
      if (shape.elements.size() != input_elems->size()) return false;
      for (std::size_t i = 0; i < shape.elements.size(); ++i) {
        if (!match_template(shape.elements[i], (*input_elems)[i], captures)) {
          return false;
        }
      }
      return true;
    }
    std::size_t rep = *shape.repeated;
    std::size_t prefix = rep;
    std::size_t suffix = shape.elements.size() - rep - 1;
    if (input_elems->size() < prefix + suffix) return false;
    for (std::size_t i = 0; i < prefix; ++i) {
      if (!match_template(shape.elements[i], (*input_elems)[i], captures)) {
        return false;
      }
    }
    for (std::size_t i = 0; i < suffix; ++i) {
      if (!match_template(shape.elements[rep + 1 + i],
                          (*input_elems)[input_elems->size() - suffix + i],
                          captures)) {
        return false;
      }
    }
    std::span<const Value> middle(input_elems->data() + prefix,
                                  input_elems->size() - prefix - suffix);
    return match_repetition(shape.elements[rep], middle, captures);
  }
  return values_equal(pattern, input);
}

using Scope = std::map<std::string, const Capture*>;

void template_vars(const Value& tmpl, std::set<std::string>& out) {
  if (tmpl.kind() == ValueKind::Symbol) {
    out.insert(tmpl.symbol_name());
    return;
  }
  if (tmpl.kind() == ValueKind::Pair) {
    for (Value cur = tmpl; cur.kind() == ValueKind::Pair; cur = cur.tail()) {
      template_vars(cur.head(), out);
    }
  }
}

Value instantiate(const Value& tmpl, const Scope& scope, SourceSpan use_span) {
  if (tmpl.kind() == ValueKind::Symbol) {
    auto it = scope.find(tmpl.symbol_name());
    if (it == scope.end()) return tmpl;
    if (!it->second->leaf) {
      throw StaticError(ErrorKind::MalformedForm,
                        "template variable used at too shallow an ellipsis "
                        "depth: " +
                            tmpl.symbol_name(),
                        use_span);
    }
    return *it->second->leaf;
  }
  if (tmpl.kind() != ValueKind::Pair) return tmpl;
  auto elements = tmpl.proper_list_elements();
  if (!elements) return tmpl;
  ListShape shape = analyze_list(*elements, tmpl.span());
  std::vector<Value> out;
  for (std::size_t i = 0; i < shape.elements.size(); ++i) {
    const Value& element = shape.elements[i];
    if (shape.repeated && *shape.repeated == i) {
      std::set<std::string> names;
      template_vars(element, names);
      std::vector<std::pair<std::string, const Capture*>> drivers;
      for (const auto& name : names) {
        auto it = scope.find(name);
        if (it != scope.end() && !it->second->leaf) {
          drivers.emplace_back(name, it->second);
        }
      }
      if (drivers.empty()) {
        throw StaticError(ErrorKind::MalformedForm,
                          "`...` template has no repeating variable",
                          use_span);
      }
      std::size_t count = drivers.front().second->seq.size();
      for (const auto& [name, capture] : drivers) {
        if (capture->seq.size() != count) {
          throw StaticError(ErrorKind::MalformedForm,
                            "mismatched repetition counts under `...`",
                            use_span);
        }
      }
      for (std::size_t k = 0; k < count; ++k) {
        Scope narrowed = scope;
        for (const auto& [name, capture] : drivers) {
          narrowed[name] = &capture->seq[k];
        }
        out.push_back(instantiate(element, narrowed, use_span));
      }
    } else {
      out.push_back(instantiate(element, scope, use_span));
    }
  }
  Value result = Value::empty_list(use_span);
  for (auto it = out.rbegin(); it != out.rend(); ++it) {
    result = Value::pair(*it, result, use_span);
  }
  return result;
}

void validate_output(const Value& tmpl, int depth,
                     const std::map<std::string, int>& use_depths,
                     SourceSpan rule_span) {
  if (tmpl.kind() == ValueKind::Symbol) {
    auto it = use_depths.find(tmpl.symbol_name());
    if (it != use_depths.end() && it->second > depth) {
      throw StaticError(ErrorKind::MalformedForm,
                        "template variable `" + tmpl.symbol_name() +
                            "` needs more `...` in the output",
                        rule_span);
    }
    return;
  }
  if (tmpl.kind() != ValueKind::Pair) return;
  auto elements = tmpl.proper_list_elements();
  if (!elements) {
    throw StaticError(ErrorKind::MalformedForm,
                      "expander rule outputs must be proper lists",
                      rule_span);
  }
  ListShape shape = analyze_list(*elements, tmpl.span());
  for (std::size_t i = 0; i < shape.elements.size(); ++i) {
    bool repeated = shape.repeated && *shape.repeated == i;
    if (repeated) {
      std::set<std::string> names;
      template_vars(shape.elements[i], names);
      bool has_driver = false;
      for (const auto& name : names) {
        auto it = use_depths.find(name);
        if (it != use_depths.end() && it->second > depth) has_driver = true;
      }
      if (!has_driver) {
        throw StaticError(ErrorKind::MalformedForm,
                          "`...` in an output template needs a variable "
                          "captured under `...`",
                          rule_span);
      }
    }
    validate_output(shape.elements[i], depth + (repeated ? 1 : 0),
                    use_depths, rule_span);
  }
}

/// Use-pattern var depths with the head position excluded (the head always
/// matches the expander name and never captures).
std::map<std::string, int> rule_use_depths(const ExpanderRule& rule,
                                           const std::string& name) {
  auto elements = rule.use_pattern.proper_list_elements();
  if (!elements || elements->empty() ||
      (*elements)[0].kind() != ValueKind::Symbol) {
    throw StaticError(ErrorKind::MalformedForm,
                      "expander rule for `" + name +
                          "` must look like (" + name + " subpattern ...)",
                      rule.use_pattern.span());
  }
  if (elements->size() > 1 && is_ellipsis((*elements)[1])) {
    throw StaticError(ErrorKind::MalformedForm,
                      "`...` may not follow the expander name",
                      rule.use_pattern.span());
  }
  std::map<std::string, int> depths;
  std::vector<Value> rest(elements->begin() + 1, elements->end());
  ListShape shape = analyze_list(rest, rule.use_pattern.span());
  for (std::size_t i = 0; i < shape.elements.size(); ++i) {
    int d = shape.repeated && *shape.repeated == i ? 1 : 0;
    collect_vars(shape.elements[i], d, depths);
  }
  return depths;
}

}  // namespace

Value expand_once(const Value& datum, const ExpanderDef& def) {
  if (def.native) return def.native(datum);
  auto input = datum.proper_list_elements();
  if (!input || input->empty()) {
    throw StaticError(ErrorKind::MalformedPattern,
                      "expander use must be a non-empty list", datum.span());
  }
  for (const ExpanderRule& rule : def.rules) {
    auto pattern_elems = rule.use_pattern.proper_list_elements();
    // Skip the heads on both sides; the head always matches.
    std::vector<Value> pattern_rest(pattern_elems->begin() + 1,
                                    pattern_elems->end());
    std::vector<Value> input_rest(input->begin() + 1, input->end());
    Value pattern_list = Value::list(pattern_rest);
    Value input_list = Value::list(input_rest);
    CaptureMap captures;
    if (!match_template(pattern_list, input_list, captures)) continue;
    Scope scope;
    for (const auto& [name, capture] : captures) {
      scope.emplace(name, &capture);
    }
    return instantiate(rule.output, scope, datum.span());
  }
  throw StaticError(ErrorKind::NoRuleMatches,
                    "no rule of match expander `" + def.name +
                        "` matches " + print_value(datum),
                    datum.span());
}

bool StaticEnv::is_pattern_keyword(const std::string& name) {
  static const std::set<std::string> keywords = {
      "list", "cons", "and", "or", "app", "quote", "_", "?", "..."};
  return keywords.count(name) > 0;
}

void StaticEnv::check_name_free(const std::string& name) const {
  if (is_pattern_keyword(name)) {
    throw StaticError(ErrorKind::DuplicateDefinition,
                      "`" + name + "` is a reserved pattern keyword");
  }
  if (structs_.count(name) || expanders_.count(name)) {
    throw StaticError(ErrorKind::DuplicateDefinition,
                      "`" + name + "` is already defined");
  }
}

const StructInfo& StaticEnv::register_struct(
    const std::string& name, const std::vector<std::string>& fields,
    const EnvPtr& runtime_env) {
  check_name_free(name);
  StructTag tag = std::make_shared<StructShape>(StructShape{name, fields});

  StructInfo info;
  info.name = name;
  info.field_names = fields;
  info.tag = tag;
  info.constructor = define_native(
      runtime_env, "make-" + name,
      [tag, name](std::span<const Value> args, EvalContext&) {
        if (args.size() != tag->field_names.size()) {
          throw EvalError(ErrorKind::ArityError,
                          "make-" + name + ": expected " +
                              std::to_string(tag->field_names.size()) +
                              " arguments, got " +
                              std::to_string(args.size()));
        }
        return Value::struct_instance(
            tag, std::vector<Value>(args.begin(), args.end()));
      });
  info.predicate = define_native(
      runtime_env, name + "?",
      [tag, name](std::span<const Value> args, EvalContext&) {
        if (args.size() != 1) {
          throw EvalError(ErrorKind::ArityError,
                          name + "?: expected 1 argument");
        }
        return Value::boolean(args[0].kind() == ValueKind::Struct &&
                              args[0].struct_tag() == tag);
      });
  for (std::size_t i = 0; i < fields.size(); ++i) {
    std::string accessor_name = name + "-" + fields[i];
    info.accessors.push_back(define_native(
        runtime_env, accessor_name,
        [tag, accessor_name, i](std::span<const Value> args, EvalContext&) {
          if (args.size() != 1) {
            throw EvalError(ErrorKind::ArityError,
                            accessor_name + ": expected 1 argument");
          }
          if (args[0].kind() != ValueKind::Struct ||
              args[0].struct_tag() != tag) {
            throw EvalError(ErrorKind::TypeError,
                            accessor_name + ": expected a " + tag->name);
          }
          return args[0].struct_fields()[i];
        }));
  }
  auto [it, inserted] = structs_.emplace(name, std::move(info));
  return it->second;
}

void StaticEnv::register_expander(ExpanderDef def) {
  check_name_free(def.name);
  if (!def.native) {
    if (def.rules.empty()) {
      throw StaticError(ErrorKind::MalformedForm,
                        "match expander `" + def.name + "` needs rules");
    }
    for (const ExpanderRule& rule : def.rules) {
      auto depths = rule_use_depths(rule, def.name);
      validate_output(rule.output, 0, depths, rule.output.span());
    }
  }
  expanders_.emplace(def.name, std::move(def));
}

const StructInfo* StaticEnv::find_struct(const std::string& name) const {
  auto it = structs_.find(name);
  return it == structs_.end() ? nullptr : &it->second;
}

const ExpanderDef* StaticEnv::find_expander(const std::string& name) const {
  auto it = expanders_.find(name);
  return it == expanders_.end() ? nullptr : &it->second;
}

}  // namespace pmx
