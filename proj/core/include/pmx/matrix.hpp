#pragma once

#include <utility>
#include <vector>

#include "pmx/occurrence.hpp"
#include "pmx/pattern.hpp"

namespace pmx {

/// One row of the clause matrix: per-column obligation lists plus the
/// variable bindings already peeled off. Normalization flattens `and`
/// patterns into the obligation lists, moves variables into `binds`,
/// drops wildcards, and splits rows on `or` alternatives, so cell
/// obligations only ever hold literal, predicate, cons, empty-list, app,
/// sequence, and struct patterns.
struct MatrixRow {
  std::vector<std::vector<PatternPtr>> cells;
  int rhs_index = 0;
  std::vector<std::pair<std::string, Occurrence>> binds;
};

struct ClauseMatrix {
  std::vector<Occurrence> columns;
  std::vector<MatrixRow> rows;

  bool row_is_trivial(int row) const {
    for (const auto& cell : rows[row].cells) {
      if (!cell.empty()) return false;
    }
    return true;
  }
};

/// Builds the initial one-column matrix at the root occurrence. Rows with
/// `or` patterns split into consecutive rows sharing the rhs index.
ClauseMatrix build_matrix(
    const std::vector<std::pair<PatternPtr, int>>& clauses);

/// First-row-needed column heuristic: scores each column by the length of
/// the contiguous prefix of rows (from row 0) whose cell there demands a
/// test, and returns the leftmost column with the maximal score.
int select_column(const ClauseMatrix& m);

/// Partitions the rows into maximal runs of adjacent rows whose pattern at
/// `col` has the same head constructor, so one discriminating test can
/// cover the run. Rows with trivial cells group among themselves and block
/// coalescing across them; predicate, app, and sequence patterns never
/// coalesce.
std::vector<std::vector<int>> coalesce_rows(const ClauseMatrix& m, int col);

namespace matrix_detail {
// Shared between build_matrix and the compiler's specialization step.
void insert_into_cell(MatrixRow& row, int col, const Occurrence& occ,
                      const PatternPtr& p);
void split_or_rows(ClauseMatrix& m);
}  // namespace matrix_detail

}  // namespace pmx
