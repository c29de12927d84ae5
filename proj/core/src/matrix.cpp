#include "pmx/matrix.hpp"

#include "pmx/error.hpp"

namespace pmx {

namespace {

/// Appends `p` to the obligation list, flattening conjunctions, routing
/// variables into the row's bind list, and dropping wildcards. `or`
/// patterns stay put; split_or_rows handles them.
void insert_obligation(MatrixRow& row, int col, const Occurrence& occ,
                       const PatternPtr& p) {
  if (std::holds_alternative<WildcardPattern>(p->node)) return;
  if (const auto* var = std::get_if<VarPattern>(&p->node)) {
    row.binds.emplace_back(var->name, occ);
    return;
  }
  if (const auto* conj = std::get_if<AndPattern>(&p->node)) {
    for (const auto& sub : conj->subs) {
      insert_obligation(row, col, occ, sub);
    }
    return;
  }
  row.cells[col].push_back(p);
}

}  // namespace

namespace matrix_detail {

void insert_into_cell(MatrixRow& row, int col, const Occurrence& occ,
                      const PatternPtr& p) {
  insert_obligation(row, col, occ, p);
}

/// Splits rows until no cell holds an `or` obligation. Alternatives keep
/// their source order, so first-match semantics pick the same alternative
/// a committed left-to-right matcher would.
void split_or_rows(ClauseMatrix& m) {
  for (std::size_t r = 0; r < m.rows.size();) {
    MatrixRow& row = m.rows[r];
    bool split = false;
    for (std::size_t c = 0; c < row.cells.size() && !split; ++c) {
      auto& cell = row.cells[c];
      for (std::size_t i = 0; i < cell.size() && !split; ++i) {
        const auto* disj = std::get_if<OrPattern>(&cell[i]->node);
        if (!disj) continue;
        split = true;
        MatrixRow original = row;
        std::vector<MatrixRow> replacements;
        for (const PatternPtr& branch : disj->subs) {
          MatrixRow copy = original;
          copy.cells[c].erase(copy.cells[c].begin() + i);
          // Splice the branch's obligations where the `or` sat, keeping
          // the obligations after it behind the new ones.
          std::vector<PatternPtr> after(copy.cells[c].begin() + i,
                                        copy.cells[c].end());
          copy.cells[c].resize(i);
          insert_obligation(copy, static_cast<int>(c), m.columns[c], branch);
          copy.cells[c].insert(copy.cells[c].end(), after.begin(),
                               after.end());
          replacements.push_back(std::move(copy));
        }
        m.rows.erase(m.rows.begin() + r);
        m.rows.insert(m.rows.begin() + r, replacements.begin(),
                      replacements.end());
      }
    }
    if (!split) ++r;
  }
}

}  // namespace matrix_detail

ClauseMatrix build_matrix(
    const std::vector<std::pair<PatternPtr, int>>& clauses) {
  ClauseMatrix m;
  m.columns.push_back(Occurrence{});
  for (const auto& [pattern, rhs_index] : clauses) {
    MatrixRow row;
    row.cells.resize(1);
    row.rhs_index = rhs_index;
    insert_obligation(row, 0, m.columns[0], pattern);
    m.rows.push_back(std::move(row));
  }
  matrix_detail::split_or_rows(m);
  return m;
}

int select_column(const ClauseMatrix& m) {
  int best = 0;
  std::size_t best_score = 0;
  for (std::size_t c = 0; c < m.columns.size(); ++c) {
    std::size_t score = 0;
    for (const MatrixRow& row : m.rows) {
      if (row.cells[c].empty()) break;
      ++score;
    }
    if (score > best_score) {
      best_score = score;
      best = static_cast<int>(c);
    }
  }
  return best;
}

namespace {

struct HeadClass {
  enum class Kind { Trivial, Literal, Pair, Empty, Struct, Pred, App, Seq };
  Kind kind = Kind::Trivial;
  Value literal;
  StructTag tag;
  bool never_coalesces = false;
};

HeadClass classify(const MatrixRow& row, int col) {
  const auto& cell = row.cells[col];
  if (cell.empty()) return {HeadClass::Kind::Trivial, {}, nullptr, false};
  const Pattern& p = *cell.front();
  if (const auto* lit = std::get_if<LiteralPattern>(&p.node)) {
    return {HeadClass::Kind::Literal, lit->value, nullptr, false};
  }
  if (std::holds_alternative<ConsPattern>(p.node)) {
    return {HeadClass::Kind::Pair, {}, nullptr, false};
  }
  if (std::holds_alternative<EmptyListPattern>(p.node)) {
    return {HeadClass::Kind::Empty, {}, nullptr, false};
  }
  if (const auto* s = std::get_if<StructPattern>(&p.node)) {
    return {HeadClass::Kind::Struct, {}, s->tag, false};
  }
  if (std::holds_alternative<PredPattern>(p.node)) {
    return {HeadClass::Kind::Pred, {}, nullptr, true};
  }
  if (std::holds_alternative<AppPattern>(p.node)) {
    return {HeadClass::Kind::App, {}, nullptr, true};
  }
  if (std::holds_alternative<SeqPattern>(p.node)) {
    return {HeadClass::Kind::Seq, {}, nullptr, true};
  }
  throw StaticError(ErrorKind::InternalInvariantViolation,
                    "unnormalized pattern in matrix cell");
}

bool same_class(const HeadClass& a, const HeadClass& b) {
  if (a.never_coalesces || b.never_coalesces) return false;
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case HeadClass::Kind::Literal: return values_equal(a.literal, b.literal);
    case HeadClass::Kind::Struct: return a.tag == b.tag;
    default: return true;
  }
}

}  // namespace

std::vector<std::vector<int>> coalesce_rows(const ClauseMatrix& m, int col) {
  std::vector<std::vector<int>> groups;
  for (int r = 0; r < static_cast<int>(m.rows.size()); ++r) {
    HeadClass cls = classify(m.rows[r], col);
    if (!groups.empty()) {
      HeadClass prev = classify(m.rows[groups.back().back()], col);
      if (same_class(prev, cls)) {
        groups.back().push_back(r);
        continue;
      }
    }
    groups.push_back({r});
  }
  return groups;
}

}  // namespace pmx
