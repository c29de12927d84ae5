#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pmx/env.hpp"
#include "pmx/value.hpp"

namespace pmx {

/// Compile-time record of a struct definition: how to build instances,
/// recognize them, and read their fields. Registration also installs the
/// runtime procedures into the base environment.
struct StructInfo {
  std::string name;
  std::vector<std::string> field_names;
  StructTag tag;
  Value constructor;
  Value predicate;
  std::vector<Value> accessors;
};

/// One rewrite rule of a match expander: a use pattern over datums and the
/// output template. Plain symbols in the use pattern are template
/// variables (`_` is a wildcard); `...` repeats the preceding subpattern.
struct ExpanderRule {
  Value use_pattern;
  Value output;
};

/// A named pattern rewriter. Rules are tried in order; alternatively a
/// native transformer function (datum to datum) may back the expander.
struct ExpanderDef {
  std::string name;
  std::vector<ExpanderRule> rules;
  std::function<Value(const Value&)> native;
};

/// Rewrites `datum` (a list whose head names `def`) by the first rule whose
/// use pattern matches. Throws NoRuleMatches if none does.
Value expand_once(const Value& datum, const ExpanderDef& def);

/// Static registries consulted while parsing patterns: struct shapes and
/// match expanders. Built single-threaded during program load.
class StaticEnv {
 public:
  static bool is_pattern_keyword(const std::string& name);

  /// Registers a struct, creating its tag and installing make-<name>,
  /// <name>?, and <name>-<field> procedures into `runtime_env`.
  const StructInfo& register_struct(const std::string& name,
                                    const std::vector<std::string>& fields,
                                    const EnvPtr& runtime_env);

  /// Registers a rule-based expander. Validates that output template
  /// variables appear in the rule's use pattern at compatible ellipsis
  /// depth.
  void register_expander(ExpanderDef def);

  const StructInfo* find_struct(const std::string& name) const;
  const ExpanderDef* find_expander(const std::string& name) const;

 private:
  void check_name_free(const std::string& name) const;

  std::map<std::string, StructInfo> structs_;
  std::map<std::string, ExpanderDef> expanders_;
};

}  // namespace pmx
