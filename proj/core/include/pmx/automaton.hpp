#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "pmx/expr.hpp"
#include "pmx/occurrence.hpp"
#include "pmx/value.hpp"

namespace pmx {

struct Automaton;

enum class TypeTest { Pair, EmptyList, Struct };

struct TestTypeNode {
  Occurrence occ;
  TypeTest type;
  StructTag tag;  // TypeTest::Struct only
  int on_pass;
  int on_fail;
};
struct TestLiteralNode {
  Occurrence occ;
  Value literal;
  int on_pass;
  int on_fail;
};
struct TestPredNode {
  int pred_id;
  Occurrence occ;
  int on_pass;
  int on_fail;
};
struct BindNode {
  std::string name;
  Occurrence occ;
  int next;
};
struct AppTransformNode {
  int app_id;
  Occurrence occ;
  int result_root;
  int next;
};
/// Iterates a proper list front to back, matching each element with the
/// body automaton until exactly `min_tail_length` elements remain. Element
/// bindings accumulate into lists (one per accumulated variable); the
/// remaining tail lands in the `rest_root` register.
struct SeqLoopNode {
  Occurrence occ;
  std::shared_ptr<const Automaton> body;
  int element_root;
  std::vector<std::string> accumulated_vars;
  int min_tail_length;
  int rest_root;
  int next;
  int on_fail;
};
struct SuccessNode {
  int rhs_index;
};
struct FailureNode {};
/// Shared failure continuation: fail edges from many places funnel through
/// one join so the automaton for the remaining rows is never duplicated.
struct JoinNode {
  int target;
};

using AutomatonNode =
    std::variant<TestTypeNode, TestLiteralNode, TestPredNode, BindNode,
                 AppTransformNode, SeqLoopNode, SuccessNode, FailureNode,
                 JoinNode>;

/// Backtracking-automaton IR. Nodes reference each other by index; the
/// graph is acyclic except through a sequence loop's internal iteration,
/// and every path ends in a success or failure terminal.
struct Automaton {
  std::vector<AutomatonNode> nodes;
  int entry = -1;
};

/// A match expression compiled against its clause list: the automaton,
/// the right-hand sides, the predicate/transformer expression tables, and
/// the per-clause binding layout.
struct CompiledMatch {
  ExprPtr scrutinee;
  Automaton automaton;
  std::vector<ExprPtr> clause_rhs;
  std::vector<ExprPtr> pred_exprs;
  std::vector<ExprPtr> app_exprs;
  std::vector<std::vector<std::string>> var_layouts;
  int num_roots = 1;
  SourceSpan span;
};

/// Deterministic one-node-per-line rendering of the automaton, with node
/// ids assigned by a fixed preorder traversal from the entry. Nested
/// sequence bodies share the numbering. Stable across runs, so golden
/// tests can compare bytes.
std::string dump_ir(const CompiledMatch& cm);

}  // namespace pmx
