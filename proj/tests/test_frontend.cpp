#include "doctest.h"

#include <functional>

#include "eb2alloy/lexer.hpp"
#include "eb2alloy/parser.hpp"
#include "eb2alloy/printer.hpp"
#include "eb2alloy/validate.hpp"
#include "test_util.hpp"

using namespace eb2alloy;

TEST_CASE("parse_expression builds the documented trees") {
  ExprPtr e = parse_expression("Holds \\/ {p |-> m}");
  REQUIRE(e->op == ExprOp::Union);
  CHECK(e->args[0]->op == ExprOp::Ident);
  CHECK(e->args[0]->name == "Holds");
  REQUIRE(e->args[1]->op == ExprOp::SetLit);
  REQUIRE(e->args[1]->args.size() == 1);
  const ExprPtr& maplet = e->args[1]->args[0];
  CHECK(maplet->op == ExprOp::Maplet);
  CHECK(maplet->args[0]->name == "p");
  CHECK(maplet->args[1]->name == "m");

  ExprPtr d = parse_expression("{p} <<| Holds");
  REQUIRE(d->op == ExprOp::DomSub);
  CHECK(d->args[0]->op == ExprOp::SetLit);
  CHECK(d->args[1]->name == "Holds");

  ExprPtr atom = parse_expression("x");
  CHECK(atom->op == ExprOp::Ident);
  CHECK(atom->name == "x");
}

TEST_CASE("expression precedence") {
  // intersection binds tighter than union, restrictions tighter still
  CHECK(expr_equal(parse_expression("a \\/ b /\\ c"),
                   parse_expression("a \\/ (b /\\ c)")));
  CHECK(expr_equal(parse_expression("a /\\ b <| c"),
                   parse_expression("a /\\ (b <| c)")));
  CHECK(expr_equal(parse_expression("s <| r \\ t"), parse_expression("s <| (r \\ t)")) == false);
  CHECK(expr_equal(parse_expression("a + b * c"), parse_expression("a + (b * c)")));
  CHECK(expr_equal(parse_expression("a ^ b ^ c"), parse_expression("a ^ (b ^ c)")));
  CHECK(expr_equal(parse_expression("a |-> b \\/ c"), parse_expression("a |-> (b \\/ c)")));
  CHECK(expr_equal(parse_expression("A --> B <-> C"), parse_expression("A --> (B <-> C)")));
}

TEST_CASE("predicate parsing") {
  PredPtr p = parse_predicate("dom(Waits) /= Process");
  REQUIRE(p->op == PredOp::Neq);
  CHECK(p->exprs[0]->op == ExprOp::Dom);
  CHECK(p->exprs[0]->args[0]->name == "Waits");
  CHECK(p->exprs[1]->name == "Process");

  PredPtr q = parse_predicate("not a : S & b : T => c = d");
  REQUIRE(q->op == PredOp::Implies);
  CHECK(q->preds[0]->op == PredOp::And);
  CHECK(q->preds[0]->preds[0]->op == PredOp::Not);

  PredPtr f = parse_predicate("forall x, y . x : S => y : S");
  REQUIRE(f->op == PredOp::Forall);
  CHECK(f->bound == std::vector<std::string>{"x", "y"});
  CHECK(f->preds[0]->op == PredOp::Implies);

  PredPtr paren = parse_predicate("(x \\/ y) <: z");
  CHECK(paren->op == PredOp::Subset);
}

TEST_CASE("parse_machine on the mutex corpus file") {
  auto parsed = testutil::load_corpus("mutex.ebm");
  const Machine& m = parsed.machine;
  REQUIRE(parsed.context.has_value());
  CHECK(m.name == "Mutexes");
  CHECK(m.events.size() == 3);
  CHECK(m.variables.size() == 2);
  CHECK(m.invariants.size() == 3);
  CHECK(parsed.context->carrier_sets == std::vector<std::string>{"Process", "Mutex"});

  // typing guards introduce the two parameters, leaving two real guards
  for (const Event& ev : m.events) {
    REQUIRE(ev.params.size() == 2);
    CHECK(ev.params[0].name == "p");
    CHECK(ev.params[1].name == "m");
    CHECK(ev.guards.size() == 2);
  }
  CHECK(validate(m, &*parsed.context).empty());
}

TEST_CASE("empty sections parse to empty lists") {
  auto parsed = parse_machine("MACHINE Empty\n  VARIABLES\n  INVARIANTS\nEND\n");
  CHECK(parsed.machine.variables.empty());
  CHECK(parsed.machine.events.empty());
  CHECK(validate(parsed.machine, nullptr).empty());
}

TEST_CASE("syntax errors carry positions") {
  try {
    parse_machine("MACHINE M\n  VARIABLES x\n  INITIALISATION\n    x := \n  EVENT\nEND\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.pos.line == 5);
  }
}

TEST_CASE("validate reports the documented diagnostics") {
  SUBCASE("duplicate assignment in an event") {
    auto parsed = parse_machine(
        "MACHINE M\n  VARIABLES h\n  INVARIANTS\n    h : INT\n  INITIALISATION\n    h := 0\n"
        "  EVENT E\n    ACTIONS\n      h := 1\n      h := 2\n  END\nEND\n");
    auto diags = validate(parsed.machine, nullptr);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].message.find("more than once") != std::string::npos);
    CHECK(diags[0].pos.line == 10);
  }
  SUBCASE("reserved event names") {
    auto parsed = parse_machine(
        "MACHINE M\n  VARIABLES h\n  INVARIANTS\n    h : INT\n  INITIALISATION\n    h := 0\n"
        "  EVENT Undef\n    ACTIONS\n      h := 1\n  END\nEND\n");
    auto diags = validate(parsed.machine, nullptr);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].message.find("reserved") != std::string::npos);
  }
  SUBCASE("unknown identifier") {
    auto parsed = parse_machine(
        "MACHINE M\n  VARIABLES h\n  INVARIANTS\n    h : INT\n  INITIALISATION\n    h := 0\n"
        "  EVENT E\n    GUARDS\n      h = zap\n    ACTIONS\n      h := 1\n  END\nEND\n");
    auto diags = validate(parsed.machine, nullptr);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].message.find("zap") != std::string::npos);
  }
  SUBCASE("missing initialisation") {
    auto parsed = parse_machine("MACHINE M\n  VARIABLES h\n  INVARIANTS\n    h : INT\nEND\n");
    auto diags = validate(parsed.machine, nullptr);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].message.find("does not assign") != std::string::npos);
  }
  SUBCASE("bound variable shadowing is rejected") {
    auto parsed = parse_machine(
        "MACHINE M\n  VARIABLES h\n  INVARIANTS\n    h : INT\n    forall h . h : INT\n"
        "  INITIALISATION\n    h := 0\nEND\n");
    auto diags = validate(parsed.machine, nullptr);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].message.find("shadows") != std::string::npos);
  }
  SUBCASE("diagnostics are ordered by position") {
    auto parsed = parse_machine(
        "MACHINE M\n  VARIABLES h h\n  INVARIANTS\n    h : INT\n  INITIALISATION\n    h := 0\n"
        "  EVENT E\n    GUARDS\n      h = zap\n    ACTIONS\n      h := 1\n  END\nEND\n");
    auto diags = validate(parsed.machine, nullptr);
    REQUIRE(diags.size() == 2);
    CHECK(diags[0].pos.line <= diags[1].pos.line);
  }
}

TEST_CASE("round-trip: parse(print(parse(src))) is a fixpoint over the corpus") {
  for (const auto& entry : testutil::corpus()) {
    CAPTURE(entry.file);
    auto first = testutil::load_corpus(entry.file);
    std::string printed;
    if (first.context) printed += print_context(*first.context) + "\n";
    printed += print_machine(first.machine);
    auto second = parse_machine(printed);
    CHECK(machine_equal(first.machine, second.machine));
    REQUIRE(first.context.has_value() == second.context.has_value());
    if (first.context) CHECK(context_equal(*first.context, *second.context));
  }
}

TEST_CASE("printer and parser agree on random expression trees") {
  testutil::Rng rng(42);
  const std::vector<std::string> idents = {"a", "b", "c", "r"};
  std::function<ExprPtr(int)> gen = [&](int depth) -> ExprPtr {
    if (depth <= 0 || rng.chance(25)) {
      switch (rng.below(3)) {
        case 0: return mk_ident(idents[rng.below(4)]);
        case 1: return mk_int(rng.below(8));
        default: return mk_empty_set();
      }
    }
    switch (rng.below(12)) {
      case 0: return mk_binary(ExprOp::Union, gen(depth - 1), gen(depth - 1));
      case 1: return mk_binary(ExprOp::Inter, gen(depth - 1), gen(depth - 1));
      case 2: return mk_binary(ExprOp::SetMinus, gen(depth - 1), gen(depth - 1));
      case 3: return mk_binary(ExprOp::Maplet, gen(depth - 1), gen(depth - 1));
      case 4: return mk_binary(ExprOp::DomSub, gen(depth - 1), gen(depth - 1));
      case 5: return mk_binary(ExprOp::RanRes, gen(depth - 1), gen(depth - 1));
      case 6: return mk_binary(ExprOp::Add, gen(depth - 1), gen(depth - 1));
      case 7: return mk_binary(ExprOp::Mul, gen(depth - 1), gen(depth - 1));
      case 8: return mk_binary(ExprOp::Pow, gen(depth - 1), gen(depth - 1));
      case 9: return mk_unary(ExprOp::Dom, gen(depth - 1));
      case 10: return mk_set_lit({gen(depth - 1)}, {});
      default: return mk_binary(ExprOp::TotalFn, gen(depth - 1), gen(depth - 1));
    }
  };
  for (int i = 0; i < 500; ++i) {
    ExprPtr e = gen(4);
    ExprPtr back = parse_expression(print_expr(e));
    CHECK(expr_equal(e, back));
  }
}

TEST_CASE("random token soup never yields an ill-formed tree") {
  const std::vector<std::string> tokens = {
      "a", "b", "1", "2", "\\/", "/\\", "\\", "<|", "<<|", "|>", "|>>", "|->", "dom", "ran",
      "(", ")", "{", "}", ",", "+", "-", "*", "^", "<->", "-->", "id", "prj1",
  };
  testutil::Rng rng(7);
  std::function<void(const ExprPtr&)> well_formed = [&](const ExprPtr& e) {
    if (is_unary(e->op)) REQUIRE(e->args.size() == 1);
    if (is_binary(e->op)) REQUIRE(e->args.size() == 2);
    if (e->op == ExprOp::Ident || e->op == ExprOp::IntLit || e->op == ExprOp::EmptySet)
      REQUIRE(e->args.empty());
    if (e->op == ExprOp::SetLit) REQUIRE(!e->args.empty());
    for (const auto& a : e->args) well_formed(a);
  };
  int parsed_count = 0;
  for (int i = 0; i < 2000; ++i) {
    std::string text;
    int len = 1 + rng.below(12);
    for (int j = 0; j < len; ++j) {
      text += tokens[rng.below(static_cast<int>(tokens.size()))];
      text += ' ';
    }
    try {
      ExprPtr e = parse_expression(text);
      well_formed(e);
      ++parsed_count;
    } catch (const ParseError&) {
      // rejection is fine; silent acceptance of garbage is not
    }
  }
  CHECK(parsed_count > 0);
}

TEST_CASE("lexer positions and comments") {
  auto toks = lex_ebm("x := y // trailing comment\nz");
  REQUIRE(toks.size() == 5);  // x := y z <eof>
  CHECK(toks[3].text == "z");
  CHECK(toks[3].pos.line == 2);
  CHECK(toks[3].pos.col == 1);
}
