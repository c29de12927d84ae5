#pragma once

// Shared helpers for the test suites: deterministic random generators for
// values and patterns, plus small conveniences for driving sessions.

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "pmx/env.hpp"
#include "pmx/eval.hpp"
#include "pmx/parse.hpp"
#include "pmx/pattern.hpp"
#include "pmx/reader.hpp"
#include "pmx/value.hpp"

namespace pmxtest {

using Rng = std::mt19937;

inline int pick(Rng& rng, int max_exclusive) {
  return static_cast<int>(rng() % static_cast<unsigned>(max_exclusive));
}

struct ValueGenOptions {
  bool allow_structs = true;
  std::vector<pmx::StructTag> tags;  // candidate struct shapes
};

/// Random callable-free value, depth-bounded.
inline pmx::Value random_value(Rng& rng, int depth,
                               const ValueGenOptions& opts = {}) {
  static const char* symbols[] = {"cart", "polar", "a", "b", "yes", "no"};
  static const char* strings[] = {"", "x", "perfect", "hello world"};
  int atom_choices = 7;
  int all_choices = depth > 0 ? 10 : atom_choices;
  switch (pick(rng, all_choices)) {
    case 0: return pmx::Value::integer(pick(rng, 7) - 2);
    case 1: return pmx::Value::integer(pick(rng, 1000));
    case 2: return pmx::Value::real(pick(rng, 16) * 0.5);
    case 3: return pmx::Value::boolean(pick(rng, 2) == 0);
    case 4: return pmx::Value::symbol(symbols[pick(rng, 6)]);
    case 5: return pmx::Value::string(strings[pick(rng, 4)]);
    case 6: return pmx::Value::empty_list();
    case 7: {  // proper list
      int n = pick(rng, 4);
      std::vector<pmx::Value> elements;
      for (int i = 0; i < n; ++i) {
        elements.push_back(random_value(rng, depth - 1, opts));
      }
      return pmx::Value::list(elements);
    }
    case 8:  // raw pair (possibly improper)
      return pmx::Value::pair(random_value(rng, depth - 1, opts),
                              random_value(rng, depth - 1, opts));
    default: {
      if (!opts.allow_structs || opts.tags.empty()) {
        return pmx::Value::integer(pick(rng, 100));
      }
      const pmx::StructTag& tag = opts.tags[pick(
          rng, static_cast<int>(opts.tags.size()))];
      std::vector<pmx::Value> fields;
      for (std::size_t i = 0; i < tag->field_names.size(); ++i) {
        fields.push_back(random_value(rng, depth - 1, opts));
      }
      return pmx::Value::struct_instance(tag, std::move(fields));
    }
  }
}

/// Pool of total predicate/transformer expressions for generated patterns;
/// every function is safe to apply to any value.
struct ExprPool {
  std::vector<pmx::ExprPtr> preds;
  std::vector<pmx::ExprPtr> apps;

  static ExprPool make() {
    ExprPool pool;
    auto parse = [](const char* text) {
      return pmx::parse_expr(pmx::read_one(text));
    };
    pool.preds = {
        parse("number?"),
        parse("real?"),
        parse("integer?"),
        parse("string?"),
        parse("(lambda (v) #t)"),
        parse("(lambda (v) (equal? v 1))"),
    };
    pool.apps = {
        parse("(lambda (v) v)"),
        parse("(lambda (v) (cons v '()))"),
        parse("(lambda (v) 42)"),
        parse("(lambda (v) (cons v v))"),
    };
    return pool;
  }
};

/// Random pattern binding exactly the variables in `vars` (in some
/// arrangement), drawing subpattern shapes from all constructors. Or
/// branches bind identical sets by construction.
inline pmx::PatternPtr random_pattern(Rng& rng, int depth,
                                      std::vector<std::string> vars,
                                      const ExprPool& pool,
                                      const ValueGenOptions& vopts) {
  using namespace pmx;
  auto leaf_for_vars = [&]() -> PatternPtr {
    // Base case: chain vars through a conjunction wrapper.
    if (vars.empty()) return make_pattern(WildcardPattern{});
    std::vector<PatternPtr> subs;
    for (const auto& name : vars) {
      subs.push_back(make_pattern(VarPattern{name}));
    }
    if (subs.size() == 1) return subs[0];
    return make_pattern(AndPattern{std::move(subs)});
  };
  if (depth <= 0) return leaf_for_vars();

  auto split_vars = [&](std::size_t ways) {
    std::vector<std::vector<std::string>> parts(ways);
    for (auto& v : vars) parts[pick(rng, static_cast<int>(ways))].push_back(v);
    return parts;
  };

  switch (pick(rng, 12)) {
    case 0:
      return leaf_for_vars();
    case 1: {  // literal (vars attached via and)
      PatternPtr lit = make_pattern(
          LiteralPattern{random_value(rng, 1, vopts)});
      if (vars.empty()) return lit;
      std::vector<PatternPtr> subs{lit};
      for (const auto& name : vars) {
        subs.push_back(make_pattern(VarPattern{name}));
      }
      return make_pattern(AndPattern{std::move(subs)});
    }
    case 2: {  // pred
      PatternPtr pred = make_pattern(PredPattern{
          pool.preds[pick(rng, static_cast<int>(pool.preds.size()))]});
      if (vars.empty()) return pred;
      std::vector<PatternPtr> subs{pred};
      subs.push_back(random_pattern(rng, depth - 1, vars, pool, vopts));
      return make_pattern(AndPattern{std::move(subs)});
    }
    case 3: {  // and of two
      auto parts = split_vars(2);
      std::vector<PatternPtr> subs{
          random_pattern(rng, depth - 1, parts[0], pool, vopts),
          random_pattern(rng, depth - 1, parts[1], pool, vopts)};
      return make_pattern(AndPattern{std::move(subs)});
    }
    case 4: {  // or of two branches binding the same set
      std::vector<PatternPtr> subs{
          random_pattern(rng, depth - 1, vars, pool, vopts),
          random_pattern(rng, depth - 1, vars, pool, vopts)};
      return make_pattern(OrPattern{std::move(subs)});
    }
    case 5:
    case 6: {  // cons
      auto parts = split_vars(2);
      return make_pattern(
          ConsPattern{random_pattern(rng, depth - 1, parts[0], pool, vopts),
                      random_pattern(rng, depth - 1, parts[1], pool, vopts)});
    }
    case 7:
      if (vars.empty()) return make_pattern(EmptyListPattern{});
      return leaf_for_vars();
    case 8: {  // app
      return make_pattern(AppPattern{
          pool.apps[pick(rng, static_cast<int>(pool.apps.size()))],
          random_pattern(rng, depth - 1, vars, pool, vopts)});
    }
    case 9:
    case 10: {  // seq with 0-2 fixed tail patterns
      auto parts = split_vars(2);
      int tail_count = pick(rng, 3);
      std::vector<std::vector<std::string>> tail_vars(
          tail_count > 0 ? tail_count : 1);
      for (auto& v : parts[1]) {
        tail_vars[pick(rng, static_cast<int>(tail_vars.size()))].push_back(
            v);
      }
      std::vector<PatternPtr> tail;
      std::vector<std::string> leftovers;
      for (int i = 0; i < tail_count; ++i) {
        tail.push_back(
            random_pattern(rng, depth - 1, tail_vars[i], pool, vopts));
      }
      if (tail_count == 0) {
        // No tail slots; fold those vars into the element.
        for (auto& v : tail_vars[0]) parts[0].push_back(v);
      }
      return make_pattern(
          SeqPattern{random_pattern(rng, depth - 1, parts[0], pool, vopts),
                     std::move(tail)});
    }
    default: {  // struct
      if (vopts.tags.empty()) return leaf_for_vars();
      const pmx::StructTag& tag =
          vopts.tags[pick(rng, static_cast<int>(vopts.tags.size()))];
      auto parts = split_vars(tag->field_names.size());
      std::vector<PatternPtr> fields;
      for (std::size_t i = 0; i < tag->field_names.size(); ++i) {
        fields.push_back(
            random_pattern(rng, depth - 1, parts[i], pool, vopts));
      }
      return make_pattern(StructPattern{tag, std::move(fields)});
    }
  }
}

/// Fresh variable names x0..x<n-1>, a random subset size.
inline std::vector<std::string> random_var_set(Rng& rng, int max_vars) {
  int n = pick(rng, max_vars + 1);
  std::vector<std::string> vars;
  for (int i = 0; i < n; ++i) vars.push_back("x" + std::to_string(i));
  return vars;
}

}  // namespace pmxtest

#include "pmx/match_compile.hpp"
#include "pmx/match_run.hpp"
#include "pmx/naive_match.hpp"
#include "pmx/printer.hpp"

namespace pmxtest {

/// Differential-test harness: random clause lists and values, compiled
/// execution against first-match iteration of the naive matcher.
struct OracleHarness {
  pmx::EnvPtr env = pmx::make_base_env();
  ExprPool pool = ExprPool::make();
  ValueGenOptions vopts;

  OracleHarness() {
    vopts.tags = {
        std::make_shared<pmx::StructShape>(
            pmx::StructShape{"point", {"x", "y"}}),
        std::make_shared<pmx::StructShape>(pmx::StructShape{"wrap", {"v"}}),
    };
  }

  /// Runs one random case; returns an explanation on disagreement.
  std::optional<std::string> run_case(Rng& rng, int pattern_depth,
                                      int value_depth) {
    int clause_count = 1 + pick(rng, 3);
    std::vector<pmx::PatternPtr> patterns;
    std::vector<std::pair<pmx::PatternPtr, pmx::ExprPtr>> clauses;
    for (int i = 0; i < clause_count; ++i) {
      auto p = random_pattern(rng, pattern_depth, random_var_set(rng, 3),
                              pool, vopts);
      patterns.push_back(p);
      clauses.emplace_back(
          p, pmx::parse_expr(pmx::read_one("'rhs")));
    }
    auto cm = pmx::compile_match(pmx::parse_expr(pmx::read_one("'scrut")),
                                 clauses);
    pmx::Value value = random_value(rng, value_depth, vopts);

    pmx::MatchOutcome compiled = pmx::run_match(*cm, value, env);

    std::optional<int> naive_index;
    pmx::NaiveBindings naive_binds;
    for (int i = 0; i < clause_count; ++i) {
      auto result = pmx::naive_match(patterns[i], value, env);
      if (result) {
        naive_index = i;
        naive_binds = std::move(*result);
        break;
      }
    }

    auto describe = [&](const std::string& what) {
      return what + "\n  value: " + pmx::display_value(value) +
             "\n  compiled: " +
             (compiled.matched
                  ? "clause " + std::to_string(compiled.rhs_index)
                  : std::string("no match")) +
             "\n  naive: " +
             (naive_index ? "clause " + std::to_string(*naive_index)
                          : std::string("no match"));
    };

    if (compiled.matched != naive_index.has_value()) {
      return describe("outcome disagreement");
    }
    if (!compiled.matched) return std::nullopt;
    if (compiled.rhs_index != *naive_index) {
      return describe("clause index disagreement");
    }
    if (compiled.bindings.size() != naive_binds.size()) {
      return describe("binding count disagreement");
    }
    for (const auto& [name, bound] : compiled.bindings) {
      auto it = naive_binds.find(name);
      if (it == naive_binds.end()) {
        return describe("binding name disagreement: " + name);
      }
      if (!pmx::values_equal(bound, it->second)) {
        return describe("binding value disagreement for " + name + ": " +
                        pmx::display_value(bound) + " vs " +
                        pmx::display_value(it->second));
      }
    }
    return std::nullopt;
  }
};

}  // namespace pmxtest
