#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <regex>

#include "pmx/error.hpp"
#include "pmx/match_compile.hpp"
#include "pmx/matrix.hpp"
#include "pmx/parse.hpp"
#include "pmx/reader.hpp"
#include "pmx/static_env.hpp"
#include "test_support.hpp"

using namespace pmx;

namespace {

PatternPtr pat(const char* text) {
  return parse_pattern(read_one(text));
}

std::shared_ptr<const CompiledMatch> compile_text(const char* clauses_text) {
  // clauses_text: "((pat rhs) (pat rhs) ...)"
  auto clause_data = *read_one(clauses_text).proper_list_elements();
  std::vector<std::pair<PatternPtr, ExprPtr>> clauses;
  for (const Value& clause : clause_data) {
    auto parts = *clause.proper_list_elements();
    clauses.emplace_back(parse_pattern(parts[0]), parse_expr(parts[1]));
  }
  return compile_match(parse_expr(read_one("scrutinee")), clauses);
}

int count_lines(const std::string& dump, const std::string& needle) {
  int n = 0;
  std::size_t pos = 0;
  while ((pos = dump.find(needle, pos)) != std::string::npos) {
    ++n;
    pos += needle.size();
  }
  return n;
}

/// Independent column scorer used to cross-check select_column: score a
/// column by walking rows from the top until one needs no test there.
int brute_force_best_column(const ClauseMatrix& m) {
  int best = 0;
  std::size_t best_score = 0;
  for (std::size_t c = 0; c < m.columns.size(); ++c) {
    std::size_t score = 0;
    while (score < m.rows.size() && !m.rows[score].cells[c].empty()) {
      ++score;
    }
    if (score > best_score) {
      best_score = score;
      best = static_cast<int>(c);
    }
  }
  return best;
}

}  // namespace

TEST_CASE("build_matrix shapes") {
  SUBCASE("conjunction with final wildcard clause") {
    ClauseMatrix m = build_matrix(
        {{pat("(and (? number?) x)"), 0}, {pat("_"), 1}});
    CHECK(m.columns.size() == 1);
    REQUIRE(m.rows.size() == 2);
    CHECK(m.rows[0].cells[0].size() == 1);  // the predicate obligation
    REQUIRE(m.rows[0].binds.size() == 1);
    CHECK(m.rows[0].binds[0].first == "x");
    CHECK(m.rows[1].cells[0].empty());
    CHECK(m.rows[1].binds.empty());
  }

  SUBCASE("or splits rows that share an rhs index") {
    ClauseMatrix m = build_matrix({{pat("(or 'a 'b)"), 0}});
    REQUIRE(m.rows.size() == 2);
    CHECK(m.rows[0].rhs_index == 0);
    CHECK(m.rows[1].rhs_index == 0);
    CHECK(std::holds_alternative<LiteralPattern>(
        m.rows[0].cells[0][0]->node));
  }

  SUBCASE("magnitude clauses: cons chains with distinct head literals") {
    ClauseMatrix m = build_matrix(
        {{pat("(list 'cart x y)"), 0}, {pat("(list 'polar r theta)"), 1}});
    REQUIRE(m.rows.size() == 2);
    for (int r = 0; r < 2; ++r) {
      REQUIRE(m.rows[r].cells[0].size() == 1);
      CHECK(std::holds_alternative<ConsPattern>(
          m.rows[r].cells[0][0]->node));
    }
  }
}

TEST_CASE("select_column") {
  SUBCASE("single column") {
    ClauseMatrix m = build_matrix({{pat("5"), 0}});
    CHECK(select_column(m) == 0);
  }

  SUBCASE("all-var column loses to all-literal column") {
    // Build a two-column matrix by specializing a cons: (cons x 1) rows.
    ClauseMatrix m = build_matrix(
        {{pat("(cons x 1)"), 0}, {pat("(cons y 2)"), 1}});
    // Specialize by hand: both rows are pair-headed; emulate the split.
    ClauseMatrix sub;
    sub.columns = {m.columns[0].head(), m.columns[0].tail()};
    for (const MatrixRow& row : m.rows) {
      MatrixRow out;
      out.rhs_index = row.rhs_index;
      out.cells.resize(2);
      const auto& cons = std::get<ConsPattern>(row.cells[0][0]->node);
      matrix_detail::insert_into_cell(out, 0, sub.columns[0], cons.head);
      matrix_detail::insert_into_cell(out, 1, sub.columns[1], cons.tail);
      sub.rows.push_back(std::move(out));
    }
    CHECK(sub.rows[0].cells[0].empty());       // var went to binds
    CHECK_FALSE(sub.rows[0].cells[1].empty());
    CHECK(select_column(sub) == 1);
    CHECK(select_column(sub) == brute_force_best_column(sub));
  }

  SUBCASE("random matrices agree with the brute-force scorer") {
    pmxtest::Rng rng(42);
    pmxtest::ExprPool pool = pmxtest::ExprPool::make();
    pmxtest::ValueGenOptions vopts;
    vopts.allow_structs = false;
    for (int i = 0; i < 300; ++i) {
      std::vector<std::pair<PatternPtr, int>> clauses;
      int n = 1 + pmxtest::pick(rng, 4);
      for (int c = 0; c < n; ++c) {
        clauses.emplace_back(
            pmxtest::random_pattern(rng, 3, {}, pool, vopts), c);
      }
      ClauseMatrix m = build_matrix(clauses);
      if (m.rows.empty()) continue;
      CHECK(select_column(m) == brute_force_best_column(m));
    }
  }
}

TEST_CASE("coalesce_rows") {
  SUBCASE("adjacent equal literals group; different ones split") {
    ClauseMatrix m = build_matrix(
        {{pat("'cart"), 0}, {pat("'cart"), 1}, {pat("'polar"), 2}});
    auto groups = coalesce_rows(m, 0);
    REQUIRE(groups.size() == 2);
    CHECK(groups[0] == std::vector<int>{0, 1});
    CHECK(groups[1] == std::vector<int>{2});
  }

  SUBCASE("a var row blocks coalescing") {
    ClauseMatrix m =
        build_matrix({{pat("1"), 0}, {pat("x"), 1}, {pat("1"), 2}});
    auto groups = coalesce_rows(m, 0);
    REQUIRE(groups.size() == 3);
    CHECK(groups[0] == std::vector<int>{0});
    CHECK(groups[1] == std::vector<int>{1});
    CHECK(groups[2] == std::vector<int>{2});
  }

  SUBCASE("single row is one group") {
    ClauseMatrix m = build_matrix({{pat("(cons a b)"), 0}});
    auto groups = coalesce_rows(m, 0);
    REQUIRE(groups.size() == 1);
    CHECK(groups[0] == std::vector<int>{0});
  }

  SUBCASE("predicates never coalesce") {
    ClauseMatrix m = build_matrix(
        {{pat("(? number?)"), 0}, {pat("(? number?)"), 1}});
    CHECK(coalesce_rows(m, 0).size() == 2);
  }

  SUBCASE("same-tag struct rows coalesce") {
    EnvPtr env = make_base_env();
    StaticEnv statics;
    statics.register_struct("point", {"x", "y"}, env);
    ParseOptions opts;
    opts.statics = &statics;
    ClauseMatrix m = build_matrix(
        {{parse_pattern(read_one("(point 1 _)"), opts), 0},
         {parse_pattern(read_one("(point 2 _)"), opts), 1}});
    CHECK(coalesce_rows(m, 0).size() == 1);
  }
}

TEST_CASE("compile_match basics") {
  SUBCASE("the residual shape of the number-or-wildcard match") {
    auto cm = compile_text("(((and (? number?) x) 'num) (_ 'other))");
    std::string dump = dump_ir(*cm);
    CHECK(dump ==
          "#0 test-pred @r0 e0 => pass:#1 fail:#3\n"
          "#1 bind x @r0 => next:#2\n"
          "#2 success rhs:0\n"
          "#3 join => #4\n"
          "#4 success rhs:1\n");
    CHECK(cm->pred_exprs.size() == 1);
    CHECK(cm->var_layouts[0] == std::vector<std::string>{"x"});
    CHECK(cm->var_layouts[1].empty());
  }

  SUBCASE("empty-list clause compiles to a type test") {
    auto cm = compile_text("(((list) 'empty))");
    std::string dump = dump_ir(*cm);
    CHECK(count_lines(dump, "test-type @r0 empty") == 1);
    CHECK(count_lines(dump, "success") == 1);
    CHECK(count_lines(dump, "bind") == 0);
  }

  SUBCASE("seq clause with one fixed tail") {
    auto cm = compile_text("(((list x ... y) 'seq))");
    std::string dump = dump_ir(*cm);
    CHECK(count_lines(dump, "seq-loop @r0") == 1);
    CHECK(count_lines(dump, "min-tail:1") == 1);
    CHECK(count_lines(dump, "vars:[x]") == 1);
    CHECK(cm->var_layouts[0] == std::vector<std::string>{"x", "y"});
  }

  SUBCASE("single wildcard clause has no tests and no binds") {
    auto cm = compile_text("((_ 'anything))");
    CHECK(dump_ir(*cm) == "#0 success rhs:0\n");
  }

  SUBCASE("zero clauses is a static error") {
    CHECK_THROWS_AS(
        compile_match(parse_expr(read_one("5")), {}),
        StaticError);
    try {
      compile_match(parse_expr(read_one("5")), {});
    } catch (const StaticError& e) {
      CHECK(e.kind() == ErrorKind::EmptyMatch);
    }
  }
}

TEST_CASE("magnitude automaton censuses") {
  auto cm = compile_text(
      "(((list 'cart x y) 'c) ((list 'polar r theta) 'p))");
  std::string dump = dump_ir(*cm);
  // The root pair test is shared across both clauses.
  CHECK(count_lines(dump, "test-type @r0 pair") == 1);
  CHECK(count_lines(dump, "test-literal @r0.hd cart") == 1);
  CHECK(count_lines(dump, "test-literal @r0.hd polar") == 1);
  CHECK(count_lines(dump, "success rhs:0") == 1);
  CHECK(count_lines(dump, "success rhs:1") == 1);
}

TEST_CASE("rhs sharing under or-split rows") {
  // Both alternatives funnel into one success node per clause.
  auto cm = compile_text("(((or (cons 1 x) (cons 2 x)) x) (_ 'no))");
  std::string dump = dump_ir(*cm);
  CHECK(count_lines(dump, "success rhs:0") == 1);
  CHECK(count_lines(dump, "success rhs:1") == 1);
}

TEST_CASE("predicate and app expressions enter the tables once") {
  auto cm = compile_text(
      "(((and (or (cons _ _) (cons _ _)) (? number?)) 'a))");
  // The or-split duplicates the row; the shared predicate keeps one id.
  CHECK(cm->pred_exprs.size() == 1);

  auto cm2 = compile_text("(((app sqrt 4) 'a) ((app sqrt 9) 'b))");
  // Two distinct app pattern nodes keep distinct ids (no coalescing),
  // numbered in source order.
  CHECK(cm2->app_exprs.size() == 2);
  std::string dump = dump_ir(*cm2);
  CHECK(count_lines(dump, "app-transform a0") == 1);
  CHECK(count_lines(dump, "app-transform a1") == 1);

  // An app pattern over a variable subsumes later clauses entirely.
  auto cm3 = compile_text("(((app sqrt x) 'a) ((app sqrt y) 'b))");
  CHECK(count_lines(dump_ir(*cm3), "app-transform") == 1);
  CHECK(count_lines(dump_ir(*cm3), "success") == 1);
}

TEST_CASE("dump is deterministic and repeatable") {
  const char* text =
      "(((list 'cart (? real? xs) ...) 'c)"
      " ((list 'polar (? real? r) (? real? theta) ...) 'p))";
  auto cm1 = compile_text(text);
  auto cm2 = compile_text(text);
  CHECK(dump_ir(*cm1) == dump_ir(*cm2));
  CHECK(dump_ir(*cm1) == dump_ir(*cm1));
}

TEST_CASE("struct patterns compile to tagged type tests") {
  EnvPtr env = make_base_env();
  StaticEnv statics;
  statics.register_struct("point", {"x", "y"}, env);
  ParseOptions opts;
  opts.statics = &statics;
  std::vector<std::pair<PatternPtr, ExprPtr>> clauses;
  clauses.emplace_back(parse_pattern(read_one("(point a b)"), opts),
                       parse_expr(read_one("a")));
  auto cm = compile_match(parse_expr(read_one("p1")), clauses);
  std::string dump = dump_ir(*cm);
  CHECK(count_lines(dump, "test-type @r0 struct:point") == 1);
  CHECK(count_lines(dump, "bind a @r0.fld(point,0)") == 1);
  CHECK(count_lines(dump, "bind b @r0.fld(point,1)") == 1);
}
