#include "pmx/match_compile.hpp"

#include <map>

#include "pmx/error.hpp"

// Compilation follows the backtracking-automaton scheme: pick a column,
// coalesce adjacent rows that need the same discriminating test, emit the
// test once per run, specialize the matching rows into a sub-matrix, and
// wire every failure edge to a join node holding the automaton for the
// rows below. Rows whose obligations are exhausted emit their pending
// binds and a (per-rhs shared) success node.

namespace pmx {

namespace {

struct CompileCtx {
  std::vector<ExprPtr> pred_exprs;
  std::vector<ExprPtr> app_exprs;
  std::map<const Pattern*, int> pred_ids;
  std::map<const Pattern*, int> app_ids;
  int next_root = 1;

  int pred_id(const PatternPtr& p) {
    auto it = pred_ids.find(p.get());
    if (it != pred_ids.end()) return it->second;
    int id = static_cast<int>(pred_exprs.size());
    pred_exprs.push_back(std::get<PredPattern>(p->node).pred);
    pred_ids.emplace(p.get(), id);
    return id;
  }
  int app_id(const PatternPtr& p) {
    auto it = app_ids.find(p.get());
    if (it != app_ids.end()) return it->second;
    int id = static_cast<int>(app_exprs.size());
    app_exprs.push_back(std::get<AppPattern>(p->node).transformer);
    app_ids.emplace(p.get(), id);
    return id;
  }
  int new_root() { return next_root++; }
};

/// Node emission into one automaton; success nodes are shared per rhs so
/// a right-hand side appears exactly once however many split rows reach
/// it.
struct AutomatonBuilder {
  Automaton& out;
  std::map<int, int> success_nodes;
  int failure_node = -1;

  int add(AutomatonNode node) {
    out.nodes.push_back(std::move(node));
    return static_cast<int>(out.nodes.size()) - 1;
  }
  int success(int rhs_index) {
    auto it = success_nodes.find(rhs_index);
    if (it != success_nodes.end()) return it->second;
    int id = add(SuccessNode{rhs_index});
    success_nodes.emplace(rhs_index, id);
    return id;
  }
  int failure() {
    if (failure_node < 0) failure_node = add(FailureNode{});
    return failure_node;
  }
  int join(int target) { return add(JoinNode{target}); }
};

int compile_rows(ClauseMatrix m, int fail_cont, CompileCtx& ctx,
                 AutomatonBuilder& b);

/// Replaces column `col` with `replacement` columns; `make_cells` fills the
/// replacement cells for each row of the group.
ClauseMatrix specialize(const ClauseMatrix& m, const std::vector<int>& rows,
                        int col, const std::vector<Occurrence>& replacement,
                        const auto& make_cells) {
  ClauseMatrix out;
  for (std::size_t c = 0; c < m.columns.size(); ++c) {
    if (static_cast<int>(c) == col) {
      out.columns.insert(out.columns.end(), replacement.begin(),
                         replacement.end());
      out.columns.push_back(m.columns[c]);  // residual obligations
    } else {
      out.columns.push_back(m.columns[c]);
    }
  }
  for (int r : rows) {
    const MatrixRow& row = m.rows[r];
    MatrixRow next;
    next.rhs_index = row.rhs_index;
    next.binds = row.binds;
    next.cells.resize(out.columns.size());
    std::size_t out_c = 0;
    for (std::size_t c = 0; c < m.columns.size(); ++c) {
      if (static_cast<int>(c) == col) {
        std::size_t base = out_c;
        out_c += replacement.size();
        // Residual: the obligations after the consumed head.
        next.cells[out_c] = std::vector<PatternPtr>(
            row.cells[c].begin() + 1, row.cells[c].end());
        ++out_c;
        make_cells(next, static_cast<int>(base), row.cells[c].front());
      } else {
        next.cells[out_c++] = row.cells[c];
      }
    }
    out.rows.push_back(std::move(next));
  }
  matrix_detail::split_or_rows(out);
  return out;
}

ClauseMatrix take_rows(const ClauseMatrix& m, const std::vector<int>& rows) {
  ClauseMatrix out;
  out.columns = m.columns;
  for (int r : rows) out.rows.push_back(m.rows[r]);
  return out;
}

int emit_group(const ClauseMatrix& m, int col, const std::vector<int>& rows,
               int fail_target, CompileCtx& ctx, AutomatonBuilder& b) {
  const Occurrence& occ = m.columns[col];
  const auto& cell = m.rows[rows.front()].cells[col];
  if (cell.empty()) {
    // Rows needing no test here; recurse with another column.
    return compile_rows(take_rows(m, rows), fail_target, ctx, b);
  }
  const PatternPtr& head = cell.front();

  if (const auto* lit = std::get_if<LiteralPattern>(&head->node)) {
    auto sub = specialize(m, rows, col, {},
                          [](MatrixRow&, int, const PatternPtr&) {});
    int pass = compile_rows(std::move(sub), fail_target, ctx, b);
    return b.add(TestLiteralNode{occ, lit->value, pass, fail_target});
  }
  if (std::holds_alternative<EmptyListPattern>(head->node)) {
    auto sub = specialize(m, rows, col, {},
                          [](MatrixRow&, int, const PatternPtr&) {});
    int pass = compile_rows(std::move(sub), fail_target, ctx, b);
    return b.add(TestTypeNode{occ, TypeTest::EmptyList, nullptr, pass,
                              fail_target});
  }
  if (std::holds_alternative<ConsPattern>(head->node)) {
    auto sub = specialize(
        m, rows, col, {occ.head(), occ.tail()},
        [&](MatrixRow& row, int base, const PatternPtr& consumed) {
          const auto& cons = std::get<ConsPattern>(consumed->node);
          matrix_detail::insert_into_cell(row, base, occ.head(), cons.head);
          matrix_detail::insert_into_cell(row, base + 1, occ.tail(),
                                          cons.tail);
        });
    int pass = compile_rows(std::move(sub), fail_target, ctx, b);
    return b.add(TestTypeNode{occ, TypeTest::Pair, nullptr, pass,
                              fail_target});
  }
  if (const auto* sp = std::get_if<StructPattern>(&head->node)) {
    StructTag tag = sp->tag;
    std::vector<Occurrence> fields;
    for (std::size_t i = 0; i < tag->field_names.size(); ++i) {
      fields.push_back(occ.field(tag, static_cast<int>(i)));
    }
    auto sub = specialize(
        m, rows, col, fields,
        [&](MatrixRow& row, int base, const PatternPtr& consumed) {
          const auto& s = std::get<StructPattern>(consumed->node);
          for (std::size_t i = 0; i < s.fields.size(); ++i) {
            matrix_detail::insert_into_cell(
                row, base + static_cast<int>(i),
                occ.field(tag, static_cast<int>(i)), s.fields[i]);
          }
        });
    int pass = compile_rows(std::move(sub), fail_target, ctx, b);
    return b.add(
        TestTypeNode{occ, TypeTest::Struct, tag, pass, fail_target});
  }
  if (std::holds_alternative<PredPattern>(head->node)) {
    int id = ctx.pred_id(head);
    auto sub = specialize(m, rows, col, {},
                          [](MatrixRow&, int, const PatternPtr&) {});
    int pass = compile_rows(std::move(sub), fail_target, ctx, b);
    return b.add(TestPredNode{id, occ, pass, fail_target});
  }
  if (const auto* app = std::get_if<AppPattern>(&head->node)) {
    int id = ctx.app_id(head);
    int result_root = ctx.new_root();
    Occurrence result{result_root, {}};
    auto sub = specialize(
        m, rows, col, {result},
        [&](MatrixRow& row, int base, const PatternPtr& consumed) {
          const auto& a = std::get<AppPattern>(consumed->node);
          matrix_detail::insert_into_cell(row, base, result, a.sub);
        });
    int next = compile_rows(std::move(sub), fail_target, ctx, b);
    (void)app;
    return b.add(AppTransformNode{id, occ, result_root, next});
  }
  const auto& seq = std::get<SeqPattern>(head->node);
  int element_root = ctx.new_root();
  int rest_root = ctx.new_root();

  auto body = std::make_shared<Automaton>();
  {
    AutomatonBuilder body_builder{*body};
    ClauseMatrix body_matrix;
    body_matrix.columns.push_back(Occurrence{element_root, {}});
    MatrixRow body_row;
    body_row.cells.resize(1);
    body_row.rhs_index = 0;
    matrix_detail::insert_into_cell(body_row, 0, body_matrix.columns[0],
                                    seq.element);
    body_matrix.rows.push_back(std::move(body_row));
    matrix_detail::split_or_rows(body_matrix);
    body->entry = compile_rows(std::move(body_matrix),
                               body_builder.failure(), ctx, body_builder);
  }

  int k = static_cast<int>(seq.tail.size());
  std::vector<Occurrence> tail_occs;
  {
    Occurrence rest{rest_root, {}};
    for (int i = 0; i < k; ++i) {
      Occurrence o = rest;
      for (int j = 0; j < i; ++j) o = o.tail();
      tail_occs.push_back(o.head());
    }
  }
  auto sub = specialize(
      m, rows, col, tail_occs,
      [&](MatrixRow& row, int base, const PatternPtr& consumed) {
        const auto& s = std::get<SeqPattern>(consumed->node);
        for (int i = 0; i < k; ++i) {
          matrix_detail::insert_into_cell(row, base + i, tail_occs[i],
                                          s.tail[i]);
        }
      });
  int next = compile_rows(std::move(sub), fail_target, ctx, b);
  return b.add(SeqLoopNode{occ, body, element_root, bound_vars(seq.element),
                           k, rest_root, next, fail_target});
}

/// Pre-assigns predicate/transformer ids in source order (depth-first,
/// left to right) so table indices match reading order regardless of the
/// order compilation reaches the nodes.
void assign_expr_ids(const PatternPtr& p, CompileCtx& ctx) {
  if (std::holds_alternative<PredPattern>(p->node)) {
    ctx.pred_id(p);
  } else if (const auto* app = std::get_if<AppPattern>(&p->node)) {
    ctx.app_id(p);
    assign_expr_ids(app->sub, ctx);
  } else if (const auto* conj = std::get_if<AndPattern>(&p->node)) {
    for (const auto& sub : conj->subs) assign_expr_ids(sub, ctx);
  } else if (const auto* disj = std::get_if<OrPattern>(&p->node)) {
    for (const auto& sub : disj->subs) assign_expr_ids(sub, ctx);
  } else if (const auto* cons = std::get_if<ConsPattern>(&p->node)) {
    assign_expr_ids(cons->head, ctx);
    assign_expr_ids(cons->tail, ctx);
  } else if (const auto* seq = std::get_if<SeqPattern>(&p->node)) {
    assign_expr_ids(seq->element, ctx);
    for (const auto& sub : seq->tail) assign_expr_ids(sub, ctx);
  } else if (const auto* s = std::get_if<StructPattern>(&p->node)) {
    for (const auto& sub : s->fields) assign_expr_ids(sub, ctx);
  }
}

int compile_rows(ClauseMatrix m, int fail_cont, CompileCtx& ctx,
                 AutomatonBuilder& b) {
  if (m.rows.empty()) return fail_cont;
  if (m.row_is_trivial(0)) {
    // First row matches unconditionally: emit its binds, then succeed.
    // Rows below are unreachable under first-match semantics.
    const MatrixRow& row = m.rows[0];
    int node = b.success(row.rhs_index);
    for (auto it = row.binds.rbegin(); it != row.binds.rend(); ++it) {
      node = b.add(BindNode{it->first, it->second, node});
    }
    return node;
  }
  int col = select_column(m);
  auto groups = coalesce_rows(m, col);

  int cont = fail_cont;
  for (std::size_t gi = groups.size(); gi-- > 0;) {
    int entry = emit_group(m, col, groups[gi], cont, ctx, b);
    cont = gi > 0 ? b.join(entry) : entry;
  }
  return cont;
}

}  // namespace

Automaton compile_matrix(const ClauseMatrix& m) {
  Automaton out;
  CompileCtx ctx;
  AutomatonBuilder builder{out};
  out.entry = compile_rows(m, builder.failure(), ctx, builder);
  return out;
}

std::shared_ptr<const CompiledMatch> compile_match(
    ExprPtr scrutinee,
    const std::vector<std::pair<PatternPtr, ExprPtr>>& clauses,
    SourceSpan span) {
  if (clauses.empty()) {
    throw StaticError(ErrorKind::EmptyMatch,
                      "match needs at least one clause", span);
  }
  auto cm = std::make_shared<CompiledMatch>();
  cm->scrutinee = std::move(scrutinee);
  cm->span = span;

  std::vector<std::pair<PatternPtr, int>> matrix_clauses;
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    matrix_clauses.emplace_back(clauses[i].first, static_cast<int>(i));
    cm->clause_rhs.push_back(clauses[i].second);
    cm->var_layouts.push_back(bound_vars(clauses[i].first));
  }

  CompileCtx ctx;
  for (const auto& [pattern, rhs] : clauses) {
    assign_expr_ids(pattern, ctx);
  }
  AutomatonBuilder builder{cm->automaton};
  ClauseMatrix m = build_matrix(matrix_clauses);
  cm->automaton.entry = compile_rows(m, builder.failure(), ctx, builder);
  cm->pred_exprs = std::move(ctx.pred_exprs);
  cm->app_exprs = std::move(ctx.app_exprs);
  cm->num_roots = ctx.next_root;
  return cm;
}

}  // namespace pmx
