#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>

#include "pmx/error.hpp"
#include "pmx/eval.hpp"
#include "pmx/parse.hpp"
#include "pmx/printer.hpp"
#include "pmx/reader.hpp"
#include "pmx/static_env.hpp"

using namespace pmx;

namespace {

struct Frontend {
  EnvPtr env = make_base_env();
  StaticEnv statics;

  ParseOptions opts(int fuel = kDefaultFuel) {
    ParseOptions o;
    o.statics = &statics;
    o.fuel = fuel;
    return o;
  }

  PatternPtr pattern(const char* text, int fuel = kDefaultFuel) {
    return parse_pattern(read_one(text), opts(fuel));
  }

  void expander(const char* definition) {
    auto form = *read_one(definition).proper_list_elements();
    ExpanderDef def;
    def.name = form[1].symbol_name();
    for (std::size_t i = 2; i < form.size(); ++i) {
      auto rule = *form[i].proper_list_elements();
      def.rules.push_back(ExpanderRule{rule[0], rule[1]});
    }
    statics.register_expander(std::move(def));
  }
};

ErrorKind parse_error(Frontend& f, const char* text,
                      int fuel = kDefaultFuel) {
  try {
    f.pattern(text, fuel);
  } catch (const StaticError& e) {
    return e.kind();
  }
  FAIL("expected a static error for ", text);
  return ErrorKind::InternalInvariantViolation;
}

bool pattern_is_cons_chain(const PatternPtr& p, int length) {
  const Pattern* cur = p.get();
  for (int i = 0; i < length; ++i) {
    const auto* cons = std::get_if<ConsPattern>(&cur->node);
    if (!cons) return false;
    cur = cons->tail.get();
  }
  return std::holds_alternative<EmptyListPattern>(cur->node);
}

bool contains_seq(const PatternPtr& p) {
  bool found = false;
  std::function<void(const PatternPtr&)> walk = [&](const PatternPtr& q) {
    if (std::holds_alternative<SeqPattern>(q->node)) found = true;
    if (const auto* cons = std::get_if<ConsPattern>(&q->node)) {
      walk(cons->head);
      walk(cons->tail);
    } else if (const auto* a = std::get_if<AndPattern>(&q->node)) {
      for (const auto& s : a->subs) walk(s);
    } else if (const auto* o = std::get_if<OrPattern>(&q->node)) {
      for (const auto& s : o->subs) walk(s);
    } else if (const auto* ap = std::get_if<AppPattern>(&q->node)) {
      walk(ap->sub);
    } else if (const auto* sq = std::get_if<SeqPattern>(&q->node)) {
      walk(sq->element);
      for (const auto& s : sq->tail) walk(s);
    } else if (const auto* st = std::get_if<StructPattern>(&q->node)) {
      for (const auto& s : st->fields) walk(s);
    }
  };
  walk(p);
  return found;
}

}  // namespace

TEST_CASE("parse_pattern core forms") {
  Frontend f;

  SUBCASE("fixed list desugars to a cons chain") {
    PatternPtr p = f.pattern("(list 'cart x y)");
    CHECK(pattern_is_cons_chain(p, 3));
    CHECK_FALSE(contains_seq(p));
    const auto& cons = std::get<ConsPattern>(p->node);
    const auto& lit = std::get<LiteralPattern>(cons.head->node);
    CHECK(lit.value.is_symbol("cart"));
    CHECK(bound_vars(p) == std::vector<std::string>{"x", "y"});
  }

  SUBCASE("predicate with subpatterns is a conjunction") {
    PatternPtr p = f.pattern("(? real? xs)");
    const auto& conj = std::get<AndPattern>(p->node);
    REQUIRE(conj.subs.size() == 2);
    CHECK(std::holds_alternative<PredPattern>(conj.subs[0]->node));
    CHECK(std::get<VarPattern>(conj.subs[1]->node).name == "xs");
  }

  SUBCASE("bare forms") {
    CHECK(std::holds_alternative<WildcardPattern>(f.pattern("_")->node));
    CHECK(std::get<VarPattern>(f.pattern("x")->node).name == "x");
    CHECK(std::holds_alternative<LiteralPattern>(f.pattern("5")->node));
    CHECK(std::holds_alternative<LiteralPattern>(f.pattern("\"s\"")->node));
    CHECK(std::holds_alternative<EmptyListPattern>(f.pattern("'()")->node));
    CHECK(std::holds_alternative<EmptyListPattern>(f.pattern("()")->node));
    CHECK(std::holds_alternative<LiteralPattern>(f.pattern("'cart")->node));
  }

  SUBCASE("cons, and, or") {
    CHECK(std::holds_alternative<ConsPattern>(f.pattern("(cons x y)")->node));
    CHECK(std::holds_alternative<AndPattern>(
        f.pattern("(and (? number?) x)")->node));
    CHECK(std::holds_alternative<OrPattern>(f.pattern("(or 1 2)")->node));
  }

  SUBCASE("app") {
    PatternPtr p = f.pattern("(app sqrt (and (? integer?) x))");
    const auto& app = std::get<AppPattern>(p->node);
    CHECK(std::holds_alternative<AndPattern>(app.sub->node));
  }

  SUBCASE("ellipsis shapes") {
    // (list q1 q2 p ... r) = fixed prefix over a sequence with one tail.
    PatternPtr p = f.pattern("(list 1 2 x ... 9)");
    const auto& c1 = std::get<ConsPattern>(p->node);
    const auto& c2 = std::get<ConsPattern>(c1.tail->node);
    const auto& seq = std::get<SeqPattern>(c2.tail->node);
    CHECK(std::get<VarPattern>(seq.element->node).name == "x");
    REQUIRE(seq.tail.size() == 1);
    CHECK(std::holds_alternative<LiteralPattern>(seq.tail[0]->node));

    PatternPtr whole = f.pattern("(list x ...)");
    const auto& only_seq = std::get<SeqPattern>(whole->node);
    CHECK(only_seq.tail.empty());
  }
}

TEST_CASE("parse_pattern static errors") {
  Frontend f;
  CHECK(parse_error(f, "(frob x)") == ErrorKind::UnknownPatternHead);
  CHECK(parse_error(f, "(list x x)") == ErrorKind::DuplicateVariable);
  CHECK(parse_error(f, "(and x (cons x _))") == ErrorKind::DuplicateVariable);
  CHECK(parse_error(f, "(or x 1)") == ErrorKind::OrBindingMismatch);
  CHECK(parse_error(f, "(or (list x) (list y))") ==
        ErrorKind::OrBindingMismatch);
  CHECK(parse_error(f, "(list ... x)") == ErrorKind::MalformedPattern);
  CHECK(parse_error(f, "(list a ... b ...)") == ErrorKind::MalformedPattern);
  CHECK(parse_error(f, "(cons x)") == ErrorKind::MalformedPattern);
  CHECK(parse_error(f, "(?)") == ErrorKind::MalformedPattern);
  CHECK(parse_error(f, "(app f)") == ErrorKind::MalformedPattern);
  CHECK(parse_error(f, "...") == ErrorKind::MalformedPattern);

  SUBCASE("or branches may rebind the same names") {
    PatternPtr p = f.pattern("(or (list x) (cons x _))");
    CHECK(bound_vars(p) == std::vector<std::string>{"x"});
  }
  SUBCASE("same name in separate seq slots is still a duplicate") {
    CHECK(parse_error(f, "(list x ... x)") == ErrorKind::DuplicateVariable);
  }
}

TEST_CASE("struct registration and struct patterns") {
  Frontend f;
  f.statics.register_struct("point", {"x", "y"}, f.env);

  SUBCASE("runtime procedures land in the environment") {
    Value p1 = evaluate(parse_expr(read_one("(make-point 1 2)")), f.env);
    CHECK(p1.kind() == ValueKind::Struct);
    EnvPtr env = f.env;
    env->define("p1", p1);
    CHECK(evaluate(parse_expr(read_one("(point-x p1)")), env).as_int() == 1);
    CHECK(evaluate(parse_expr(read_one("(point-y p1)")), env).as_int() == 2);
    CHECK(evaluate(parse_expr(read_one("(point? p1)")), env).as_bool());
    CHECK_FALSE(
        evaluate(parse_expr(read_one("(point? 5)")), env).as_bool());
  }

  SUBCASE("struct pattern parses with arity checking") {
    PatternPtr p = f.pattern("(point a b)");
    const auto& sp = std::get<StructPattern>(p->node);
    CHECK(sp.tag->name == "point");
    CHECK(sp.fields.size() == 2);
    CHECK(parse_error(f, "(point a)") == ErrorKind::StructArityError);
    CHECK(parse_error(f, "(point a b c)") == ErrorKind::StructArityError);
  }

  SUBCASE("duplicate and reserved registrations") {
    CHECK_THROWS_AS(f.statics.register_struct("point", {"z"}, f.env),
                    StaticError);
    CHECK_THROWS_AS(f.statics.register_struct("list", {"z"}, f.env),
                    StaticError);
    CHECK_THROWS_AS(
        f.statics.register_expander(ExpanderDef{
            "point", {ExpanderRule{read_one("(point)"), read_one("_")}},
            nullptr}),
        StaticError);
  }
}

TEST_CASE("expand_once") {
  Frontend f;

  SUBCASE("?? combines predicate and pattern") {
    f.expander("(define-match-expander ?? [(?? pred pat) (and (? pred) pat)])");
    Value out = expand_once(read_one("(?? even? x)"),
                            *f.statics.find_expander("??"));
    CHECK(print_value(out) == "(and (? even?) x)");
  }

  SUBCASE("num rewrites to a number predicate") {
    f.expander("(define-match-expander num [(num) (? number?)])");
    Value out =
        expand_once(read_one("(num)"), *f.statics.find_expander("num"));
    CHECK(print_value(out) == "(? number?)");
    PatternPtr p = f.pattern("(num)");
    CHECK(std::holds_alternative<PredPattern>(p->node));
  }

  SUBCASE("polar-style rule produces the or of list and app forms") {
    f.expander(
        "(define-match-expander polar"
        "  [(polar r pats ...)"
        "   (or (list 'polar r (? real? pats) ...)"
        "       (cons 'cart (app conv (list r (? real? pats) ...))))])");
    Value out = expand_once(read_one("(polar r theta)"),
                            *f.statics.find_expander("polar"));
    CHECK(print_value(out) ==
          "(or (list (quote polar) r (? real? theta)) "
          "(cons (quote cart) (app conv (list r (? real? theta)))))");
    auto branches = *out.proper_list_elements();
    REQUIRE(branches.size() == 3);
    CHECK(branches[0].is_symbol("or"));
    CHECK(branches[1].head().is_symbol("list"));
    CHECK(branches[2].head().is_symbol("cons"));
  }

  SUBCASE("no rule matches") {
    f.expander("(define-match-expander num [(num) (? number?)])");
    CHECK_THROWS_AS(
        expand_once(read_one("(num 5)"), *f.statics.find_expander("num")),
        StaticError);
  }

  SUBCASE("rules are tried in order") {
    f.expander(
        "(define-match-expander two-rule"
        "  [(two-rule) 1]"
        "  [(two-rule x) (list x)]"
        "  [(two-rule _) 99])");
    const ExpanderDef& def = *f.statics.find_expander("two-rule");
    CHECK(print_value(expand_once(read_one("(two-rule)"), def)) == "1");
    CHECK(print_value(expand_once(read_one("(two-rule 7)"), def)) ==
          "(list 7)");
  }

  SUBCASE("verbatim splice carries user ellipses through") {
    f.expander("(define-match-expander cart [(cart es ...) (list 'cart es ...)])");
    Value out = expand_once(read_one("(cart xs ...)"),
                            *f.statics.find_expander("cart"));
    CHECK(print_value(out) == "(list (quote cart) xs ...)");
    PatternPtr p = f.pattern("(cart xs ...)");
    CHECK(contains_seq(p));
  }

  SUBCASE("nested ellipsis depth") {
    f.expander(
        "(define-match-expander pairs"
        "  [(pairs (a b) ...) (list (cons a b) ...)])");
    Value out = expand_once(read_one("(pairs (1 2) (3 4))"),
                            *f.statics.find_expander("pairs"));
    CHECK(print_value(out) == "(list (cons 1 2) (cons 3 4))");
  }

  SUBCASE("registration validates template variable depths") {
    CHECK_THROWS_AS(
        f.expander("(define-match-expander bad [(bad x) (list x ...)])"),
        StaticError);
    CHECK_THROWS_AS(
        f.expander("(define-match-expander bad2 [(bad2 x ...) x])"),
        StaticError);
  }
}

TEST_CASE("native transformer expanders") {
  Frontend f;
  ExpanderDef def;
  def.name = "always-num";
  def.native = [](const Value&) { return read_one("(? number?)"); };
  f.statics.register_expander(std::move(def));
  PatternPtr p = f.pattern("(always-num whatever ignored)");
  CHECK(std::holds_alternative<PredPattern>(p->node));
}

TEST_CASE("expansion reaches a fixpoint or exhausts fuel") {
  Frontend f;
  f.expander("(define-match-expander num [(num) (? number?)])");

  SUBCASE("chained expanders fully expand") {
    f.expander("(define-match-expander n2 [(n2) (num)])");
    PatternPtr p = f.pattern("(n2)");
    CHECK(std::holds_alternative<PredPattern>(p->node));
  }

  SUBCASE("self-recursive expander exhausts fuel") {
    f.expander("(define-match-expander loop [(loop) (loop)])");
    CHECK(parse_error(f, "(loop)") == ErrorKind::FuelExhausted);
    CHECK(parse_error(f, "(loop)", 3) == ErrorKind::FuelExhausted);
  }

  SUBCASE("fuel counts per nesting path") {
    f.expander("(define-match-expander n2 [(n2) (num)])");
    // Two sibling uses each get the full budget.
    PatternPtr p = f.pattern("(list (n2) (n2))", 2);
    CHECK(pattern_is_cons_chain(p, 2));
  }
}

TEST_CASE("bound_vars ordering") {
  Frontend f;
  CHECK(bound_vars(f.pattern("(and (? number?) x)")) ==
        std::vector<std::string>{"x"});
  CHECK(bound_vars(f.pattern("_")).empty());
  CHECK(bound_vars(f.pattern("(list x ... y)")) ==
        std::vector<std::string>{"x", "y"});
  CHECK(bound_vars(f.pattern("(cons b (cons a _))")) ==
        std::vector<std::string>{"b", "a"});
}
