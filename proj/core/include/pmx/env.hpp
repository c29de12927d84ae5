#pragma once

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "pmx/value.hpp"

namespace pmx {

class Env;
using EnvPtr = std::shared_ptr<Env>;

/// A chain of lexical frames, innermost first. Pattern-match and lambda
/// bindings extend an environment with a fresh frame; only toplevel
/// `define` mutates an existing frame.
class Env : public std::enable_shared_from_this<Env> {
 public:
  static EnvPtr make() { return std::make_shared<Env>(); }

  EnvPtr extend(
      const std::vector<std::pair<std::string, Value>>& bindings) {
    auto child = std::make_shared<Env>();
    child->parent_ = shared_from_this();
    for (const auto& [name, value] : bindings) {
      child->frame_.insert_or_assign(name, value);
    }
    return child;
  }

  void define(const std::string& name, Value value) {
    frame_.insert_or_assign(name, std::move(value));
  }

  std::optional<Value> lookup(const std::string& name) const {
    for (const Env* env = this; env; env = env->parent_.get()) {
      auto it = env->frame_.find(name);
      if (it != env->frame_.end()) return it->second;
    }
    return std::nullopt;
  }

 private:
  std::unordered_map<std::string, Value> frame_;
  EnvPtr parent_;
};

}  // namespace pmx
