#include "eb2alloy/parser.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "eb2alloy/lexer.hpp"

namespace eb2alloy {

namespace {

class Parser {
 public:
  explicit Parser(const std::string& src) : toks_(lex_ebm(src)) {}

  ParsedSource parse_all() {
    ParsedSource out;
    while (!at_end()) {
      if (at_keyword("CONTEXT")) {
        out.contexts.push_back(parse_context());
      } else if (at_keyword("MACHINE")) {
        out.machines.push_back(parse_machine_block());
      } else {
        throw ParseError(peek().pos, "expected MACHINE or CONTEXT, got '" + peek().text + "'");
      }
    }
    return out;
  }

  ExprPtr parse_single_expr() {
    ExprPtr e = parse_expr();
    expect_end();
    return e;
  }

  PredPtr parse_single_pred() {
    PredPtr p = parse_pred();
    expect_end();
    return p;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  bool at_end() const { return peek().kind == TokKind::End; }
  const Token& advance() { return toks_[pos_++]; }

  bool at_keyword(const std::string& kw) const {
    return peek().kind == TokKind::Keyword && peek().text == kw;
  }
  bool at_op(const std::string& op) const { return peek().kind == TokKind::Op && peek().text == op; }

  bool eat_keyword(const std::string& kw) {
    if (!at_keyword(kw)) return false;
    advance();
    return true;
  }
  bool eat_op(const std::string& op) {
    if (!at_op(op)) return false;
    advance();
    return true;
  }

  void expect_keyword(const std::string& kw) {
    if (!eat_keyword(kw)) throw ParseError(peek().pos, "expected '" + kw + "', got '" + peek().text + "'");
  }
  void expect_op(const std::string& op) {
    if (!eat_op(op)) throw ParseError(peek().pos, "expected '" + op + "', got '" + peek().text + "'");
  }
  std::string expect_ident() {
    if (peek().kind != TokKind::Ident)
      throw ParseError(peek().pos, "expected identifier, got '" + peek().text + "'");
    return advance().text;
  }
  void expect_end() {
    if (!at_end()) throw ParseError(peek().pos, "unexpected trailing input: '" + peek().text + "'");
  }

  bool at_section_keyword() const {
    if (peek().kind != TokKind::Keyword) return false;
    const std::string& t = peek().text;
    return t == "MACHINE" || t == "CONTEXT" || t == "SEES" || t == "VARIABLES" || t == "INVARIANTS" ||
           t == "INITIALISATION" || t == "EVENT" || t == "GUARDS" || t == "ACTIONS" || t == "END" ||
           t == "SETS" || t == "ENUM" || t == "CONSTANTS" || t == "AXIOMS";
  }

  std::vector<std::string> ident_list(std::vector<SourcePos>* positions) {
    std::vector<std::string> names;
    while (peek().kind == TokKind::Ident) {
      if (positions) positions->push_back(peek().pos);
      names.push_back(advance().text);
      eat_op(",");
    }
    return names;
  }

  Context parse_context() {
    Context ctx;
    ctx.pos = peek().pos;
    expect_keyword("CONTEXT");
    ctx.name = expect_ident();
    while (!at_keyword("END")) {
      if (eat_keyword("SETS")) {
        auto names = ident_list(&ctx.carrier_pos);
        ctx.carrier_sets.insert(ctx.carrier_sets.end(), names.begin(), names.end());
      } else if (at_keyword("ENUM")) {
        EnumSet es;
        es.pos = peek().pos;
        advance();
        es.name = expect_ident();
        expect_op("=");
        expect_op("{");
        while (!at_op("}")) {
          es.member_pos.push_back(peek().pos);
          es.members.push_back(expect_ident());
          if (!at_op("}")) expect_op(",");
        }
        expect_op("}");
        ctx.enumerated_sets.push_back(std::move(es));
      } else if (eat_keyword("CONSTANTS")) {
        auto names = ident_list(&ctx.constant_pos);
        ctx.constants.insert(ctx.constants.end(), names.begin(), names.end());
      } else if (eat_keyword("AXIOMS")) {
        while (!at_section_keyword() && !at_end()) {
          ctx.axioms.push_back(parse_pred());
          eat_op(";");
        }
      } else {
        throw ParseError(peek().pos, "expected a context section or END, got '" + peek().text + "'");
      }
    }
    expect_keyword("END");
    return ctx;
  }

  Machine parse_machine_block() {
    Machine m;
    m.pos = peek().pos;
    expect_keyword("MACHINE");
    m.name = expect_ident();
    if (eat_keyword("SEES")) m.sees = expect_ident();
    if (eat_keyword("VARIABLES")) m.variables = ident_list(&m.variable_pos);
    if (eat_keyword("INVARIANTS")) {
      while (!at_section_keyword() && !at_end()) {
        m.invariants.push_back(parse_pred());
        eat_op(";");
      }
    }
    if (eat_keyword("INITIALISATION")) {
      while (peek().kind == TokKind::Ident) {
        m.initialisation.push_back(parse_action());
        eat_op(";");
      }
    }
    while (at_keyword("EVENT")) m.events.push_back(parse_event());
    expect_keyword("END");
    return m;
  }

  Event parse_event() {
    Event ev;
    ev.pos = peek().pos;
    expect_keyword("EVENT");
    ev.name = expect_ident();
    if (eat_keyword("GUARDS")) {
      while (!at_section_keyword() && !at_end()) {
        ev.guards.push_back(parse_pred());
        eat_op(";");
      }
    }
    if (eat_keyword("ACTIONS")) {
      while (peek().kind == TokKind::Ident) {
        ev.actions.push_back(parse_action());
        eat_op(";");
      }
    }
    expect_keyword("END");
    return ev;
  }

  Action parse_action() {
    Action a;
    a.pos = peek().pos;
    a.target = expect_ident();
    expect_op(":=");
    a.value = parse_expr();
    return a;
  }

  // ---- predicates ----

  PredPtr parse_pred() {
    if (at_keyword("forall") || at_keyword("exists")) {
      SourcePos pos = peek().pos;
      PredOp op = peek().text == "forall" ? PredOp::Forall : PredOp::Exists;
      advance();
      std::vector<std::string> vars;
      vars.push_back(expect_ident());
      while (eat_op(",")) vars.push_back(expect_ident());
      expect_op(".");
      PredPtr body = parse_pred();
      return mk_quant(op, std::move(vars), std::move(body), pos);
    }
    return parse_implies();
  }

  PredPtr parse_implies() {
    PredPtr lhs = parse_or();
    if (at_op("=>")) {
      SourcePos pos = peek().pos;
      advance();
      PredPtr rhs = parse_implies();
      return mk_connective(PredOp::Implies, std::move(lhs), std::move(rhs), pos);
    }
    return lhs;
  }

  PredPtr parse_or() {
    PredPtr lhs = parse_and();
    while (at_keyword("or")) {
      SourcePos pos = peek().pos;
      advance();
      lhs = mk_connective(PredOp::Or, std::move(lhs), parse_and(), pos);
    }
    return lhs;
  }

  PredPtr parse_and() {
    PredPtr lhs = parse_not();
    while (at_op("&")) {
      SourcePos pos = peek().pos;
      advance();
      lhs = mk_connective(PredOp::And, std::move(lhs), parse_not(), pos);
    }
    return lhs;
  }

  PredPtr parse_not() {
    if (at_keyword("not")) {
      SourcePos pos = peek().pos;
      advance();
      return mk_not(parse_not(), pos);
    }
    return parse_pred_atom();
  }

  PredPtr parse_pred_atom() {
    // A '(' may open either a parenthesized predicate or the expression on
    // the left of a comparison; try the predicate first and backtrack.
    if (at_op("(")) {
      std::size_t saved = pos_;
      try {
        advance();
        PredPtr inner = parse_pred();
        expect_op(")");
        return inner;
      } catch (const ParseError&) {
        pos_ = saved;
      }
    }
    ExprPtr lhs = parse_expr();
    SourcePos pos = peek().pos;
    PredOp op;
    if (eat_op(":")) {
      op = PredOp::In;
    } else if (eat_op("/:")) {
      op = PredOp::NotIn;
    } else if (eat_op("<:")) {
      op = PredOp::Subset;
    } else if (eat_op("=")) {
      op = PredOp::Eq;
    } else if (eat_op("/=")) {
      op = PredOp::Neq;
    } else if (eat_op("<=")) {
      op = PredOp::Le;
    } else if (eat_op("<")) {
      op = PredOp::Lt;
    } else if (eat_op(">=")) {
      op = PredOp::Ge;
    } else if (eat_op(">")) {
      op = PredOp::Gt;
    } else {
      throw ParseError(peek().pos, "expected a comparison operator, got '" + peek().text + "'");
    }
    ExprPtr rhs = parse_expr();
    return mk_compare(op, std::move(lhs), std::move(rhs), pos);
  }

  // ---- expressions ----

  ExprPtr parse_expr() { return parse_reltype(); }

  ExprPtr parse_reltype() {
    ExprPtr lhs = parse_maplet();
    SourcePos pos = peek().pos;
    ExprOp op;
    if (at_op("<->")) {
      op = ExprOp::RelType;
    } else if (at_op("-->")) {
      op = ExprOp::TotalFn;
    } else if (at_op("+->")) {
      op = ExprOp::PartialFn;
    } else if (at_op("->>")) {
      op = ExprOp::TotalSurj;
    } else if (at_op("+>>")) {
      op = ExprOp::PartialSurj;
    } else if (at_op(">->")) {
      op = ExprOp::TotalInj;
    } else {
      return lhs;
    }
    advance();
    ExprPtr rhs = parse_reltype();  // right-assoc
    return mk_binary(op, std::move(lhs), std::move(rhs), pos);
  }

  ExprPtr parse_maplet() {
    ExprPtr lhs = parse_union();
    while (at_op("|->")) {
      SourcePos pos = peek().pos;
      advance();
      lhs = mk_binary(ExprOp::Maplet, std::move(lhs), parse_union(), pos);
    }
    return lhs;
  }

  ExprPtr parse_union() {
    ExprPtr lhs = parse_inter();
    while (at_op("\\/") || at_op("\\")) {
      ExprOp op = peek().text == "\\/" ? ExprOp::Union : ExprOp::SetMinus;
      SourcePos pos = peek().pos;
      advance();
      lhs = mk_binary(op, std::move(lhs), parse_inter(), pos);
    }
    return lhs;
  }

  ExprPtr parse_inter() {
    ExprPtr lhs = parse_restrict();
    while (at_op("/\\")) {
      SourcePos pos = peek().pos;
      advance();
      lhs = mk_binary(ExprOp::Inter, std::move(lhs), parse_restrict(), pos);
    }
    return lhs;
  }

  ExprPtr parse_restrict() {
    ExprPtr lhs = parse_addsub();
    while (at_op("<|") || at_op("<<|") || at_op("|>") || at_op("|>>")) {
      const std::string& t = peek().text;
      ExprOp op = t == "<|" ? ExprOp::DomRes : t == "<<|" ? ExprOp::DomSub : t == "|>" ? ExprOp::RanRes : ExprOp::RanSub;
      SourcePos pos = peek().pos;
      advance();
      lhs = mk_binary(op, std::move(lhs), parse_addsub(), pos);
    }
    return lhs;
  }

  ExprPtr parse_addsub() {
    ExprPtr lhs = parse_muldiv();
    while (at_op("+") || at_op("-")) {
      ExprOp op = peek().text == "+" ? ExprOp::Add : ExprOp::Sub;
      SourcePos pos = peek().pos;
      advance();
      lhs = mk_binary(op, std::move(lhs), parse_muldiv(), pos);
    }
    return lhs;
  }

  ExprPtr parse_muldiv() {
    ExprPtr lhs = parse_pow();
    while (at_op("*") || at_op("/") || at_keyword("mod")) {
      ExprOp op = at_keyword("mod") ? ExprOp::Mod : peek().text == "*" ? ExprOp::Mul : ExprOp::Div;
      SourcePos pos = peek().pos;
      advance();
      lhs = mk_binary(op, std::move(lhs), parse_pow(), pos);
    }
    return lhs;
  }

  ExprPtr parse_pow() {
    ExprPtr lhs = parse_atom();
    if (at_op("^")) {
      SourcePos pos = peek().pos;
      advance();
      return mk_binary(ExprOp::Pow, std::move(lhs), parse_pow(), pos);  // right-assoc
    }
    return lhs;
  }

  ExprPtr parse_unary_call(ExprOp op) {
    SourcePos pos = peek().pos;
    advance();
    expect_op("(");
    ExprPtr arg = parse_expr();
    expect_op(")");
    return mk_unary(op, std::move(arg), pos);
  }

  ExprPtr parse_atom() {
    const Token& t = peek();
    if (t.kind == TokKind::Ident) {
      advance();
      return mk_ident(t.text, t.pos);
    }
    if (t.kind == TokKind::Int) {
      advance();
      return mk_int(t.value, t.pos);
    }
    if (at_keyword("INT")) {
      advance();
      return mk_ident("INT", t.pos);
    }
    if (at_keyword("dom")) return parse_unary_call(ExprOp::Dom);
    if (at_keyword("ran")) return parse_unary_call(ExprOp::Ran);
    if (at_keyword("prj1")) return parse_unary_call(ExprOp::Prj1);
    if (at_keyword("prj2")) return parse_unary_call(ExprOp::Prj2);
    if (at_keyword("id")) return parse_unary_call(ExprOp::Id);
    if (at_op("{")) {
      SourcePos pos = t.pos;
      advance();
      if (eat_op("}")) return mk_empty_set(pos);
      std::vector<ExprPtr> elems;
      elems.push_back(parse_expr());
      while (eat_op(",")) elems.push_back(parse_expr());
      expect_op("}");
      return mk_set_lit(std::move(elems), pos);
    }
    if (at_op("(")) {
      advance();
      ExprPtr e = parse_expr();
      expect_op(")");
      return e;
    }
    throw ParseError(t.pos, "expected an expression, got '" + t.text + "'");
  }
};

std::set<std::string> context_names(const Context& ctx) {
  std::set<std::string> names;
  for (const auto& s : ctx.carrier_sets) names.insert(s);
  for (const auto& es : ctx.enumerated_sets) {
    names.insert(es.name);
    for (const auto& m : es.members) names.insert(m);
  }
  for (const auto& c : ctx.constants) names.insert(c);
  return names;
}

}  // namespace

void bind_params(Machine& machine, const Context* context) {
  std::set<std::string> known(machine.variables.begin(), machine.variables.end());
  if (context) {
    auto cn = context_names(*context);
    known.insert(cn.begin(), cn.end());
  }
  known.insert("INT");
  for (Event& ev : machine.events) {
    std::set<std::string> in_scope = known;
    for (const auto& p : ev.params) in_scope.insert(p.name);  // idempotence
    std::vector<PredPtr> rest;
    for (const PredPtr& g : ev.guards) {
      if (g->op == PredOp::In && g->exprs[0]->op == ExprOp::Ident &&
          !in_scope.count(g->exprs[0]->name)) {
        ev.params.push_back({g->exprs[0]->name, g->exprs[1], g->pos});
        in_scope.insert(g->exprs[0]->name);
      } else {
        rest.push_back(g);
      }
    }
    ev.guards = std::move(rest);
  }
}

ParsedSource parse_source(const std::string& text) { return Parser(text).parse_all(); }

MachineWithContext parse_machine(const std::string& text) {
  ParsedSource src = parse_source(text);
  if (src.machines.size() != 1)
    throw ParseError({}, "expected exactly one MACHINE, found " + std::to_string(src.machines.size()));
  MachineWithContext out;
  out.machine = std::move(src.machines[0]);
  if (out.machine.sees) {
    bool found = false;
    for (auto& ctx : src.contexts) {
      if (ctx.name == *out.machine.sees) {
        out.context = std::move(ctx);
        found = true;
        break;
      }
    }
    if (!found)
      throw ParseError(out.machine.pos,
                       "context '" + *out.machine.sees + "' not found in source; provide its file");
  } else if (!src.contexts.empty()) {
    throw ParseError(src.contexts[0].pos, "context declared but machine has no SEES clause");
  }
  bind_params(out.machine, out.context ? &*out.context : nullptr);
  return out;
}

MachineWithContext parse_machine_file(const std::string& path) {
  auto read_file = [](const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  std::string text = read_file(path);
  try {
    return parse_machine(text);
  } catch (const ParseError& e) {
    // Unresolved SEES: look for a companion context file next to the input.
    ParsedSource src = parse_source(text);
    if (src.machines.size() != 1 || !src.machines[0].sees) throw;
    const std::string ctx_name = *src.machines[0].sees;
    namespace fs = std::filesystem;
    fs::path dir = fs::path(path).parent_path();
    for (const char* ext : {".ebm", ".ebc"}) {
      fs::path candidate = dir / (ctx_name + ext);
      if (fs::exists(candidate)) {
        ParsedSource csrc = parse_source(read_file(candidate.string()));
        for (auto& ctx : csrc.contexts) {
          if (ctx.name == ctx_name) {
            MachineWithContext out;
            out.machine = std::move(src.machines[0]);
            out.context = std::move(ctx);
            bind_params(out.machine, &*out.context);
            return out;
          }
        }
      }
    }
    throw;
  }
}

ExprPtr parse_expression(const std::string& text) { return Parser(text).parse_single_expr(); }

PredPtr parse_predicate(const std::string& text) { return Parser(text).parse_single_pred(); }

}  // namespace eb2alloy
