#include "eb2alloy/encoder.hpp"

#include <algorithm>
#include <functional>

namespace eb2alloy {

namespace {

const std::set<std::string>& reserved_target_names() {
  static const std::set<std::string> names = {
      "State", "Events", "Undef", "Ev", "ord", "rel", "Int", "univ", "iden", "none",
      "dom", "ran", "domSub", "ranSub", "prj1", "prj2", "id",
      "plus", "minus", "mul", "div", "rem", "Initial", "EventTrigger",
      "sig", "fact", "pred", "fun", "assert", "check", "extends", "abstract", "one",
      "some", "all", "no", "lone", "let", "in", "and", "or", "implies", "else",
      "not", "open", "module", "as", "set", "exactly", "for", "int",
  };
  return names;
}

std::vector<FunDecl> prelude() {
  auto r_univ_univ = a_product(a_univ(), a_univ());
  auto d = [&](const char* n) {
    QuantDecl q;
    q.names = {n};
    return q;
  };

  std::vector<FunDecl> funs;
  {
    FunDecl f;
    f.name = "dom";
    QuantDecl r = d("r");
    r.bound = r_univ_univ;
    f.params = {r};
    f.result = a_univ();
    f.result_set = true;
    f.body = a_join(a_name("r"), a_univ());
    funs.push_back(std::move(f));
  }
  {
    FunDecl f;
    f.name = "ran";
    QuantDecl r = d("r");
    r.bound = r_univ_univ;
    f.params = {r};
    f.result = a_univ();
    f.result_set = true;
    f.body = a_join(a_univ(), a_name("r"));
    funs.push_back(std::move(f));
  }
  {
    FunDecl f;
    f.name = "domSub";
    QuantDecl s = d("s");
    s.bound = a_univ();
    s.set_prefix = true;
    QuantDecl r = d("r");
    r.bound = r_univ_univ;
    f.params = {s, r};
    f.result = r_univ_univ;
    f.body = a_binary(AOp::DomRestr,
                      a_binary(AOp::Diff, a_call("dom", {a_name("r")}), a_name("s")), a_name("r"));
    funs.push_back(std::move(f));
  }
  {
    FunDecl f;
    f.name = "ranSub";
    QuantDecl r = d("r");
    r.bound = r_univ_univ;
    QuantDecl s = d("s");
    s.bound = a_univ();
    s.set_prefix = true;
    f.params = {r, s};
    f.result = r_univ_univ;
    f.body = a_binary(AOp::RanRestr, a_name("r"),
                      a_binary(AOp::Diff, a_call("ran", {a_name("r")}), a_name("s")));
    funs.push_back(std::move(f));
  }
  {
    FunDecl f;
    f.name = "prj1";
    QuantDecl r = d("r");
    r.bound = r_univ_univ;
    f.params = {r};
    f.result = a_product(a_product(a_univ(), a_univ()), a_univ());
    QuantDecl ab;
    ab.names = {"a", "b"};
    ab.bound = a_univ();
    QuantDecl c;
    c.names = {"c"};
    c.bound = a_univ();
    f.body = a_compr({ab, c}, a_compare(AOp::And,
                                        a_compare(AOp::In, a_product(a_name("a"), a_name("b")), a_name("r")),
                                        a_compare(AOp::Eq, a_name("c"), a_name("a"))));
    funs.push_back(std::move(f));
  }
  {
    FunDecl f;
    f.name = "prj2";
    QuantDecl r = d("r");
    r.bound = r_univ_univ;
    f.params = {r};
    f.result = a_product(a_product(a_univ(), a_univ()), a_univ());
    QuantDecl ab;
    ab.names = {"a", "b"};
    ab.bound = a_univ();
    QuantDecl c;
    c.names = {"c"};
    c.bound = a_univ();
    f.body = a_compr({ab, c}, a_compare(AOp::And,
                                        a_compare(AOp::In, a_product(a_name("a"), a_name("b")), a_name("r")),
                                        a_compare(AOp::Eq, a_name("c"), a_name("b"))));
    funs.push_back(std::move(f));
  }
  {
    FunDecl f;
    f.name = "id";
    QuantDecl s = d("s");
    s.bound = a_univ();
    s.set_prefix = true;
    f.params = {s};
    f.result = r_univ_univ;
    f.body = a_binary(AOp::DomRestr, a_name("s"), a_iden());
    funs.push_back(std::move(f));
  }
  return funs;
}

ArityHint hint_of_type(const TypeTermPtr& t) {
  return t->kind == TypeTerm::Kind::Rel ? ArityHint::Relational : ArityHint::Scalar;
}

ArityHint arity_hint(const ExprPtr& e, const EncodeContext& ctx) {
  switch (e->op) {
    case ExprOp::Ident: {
      if (ctx.types) {
        auto it = ctx.types->types.find(e->name);
        if (it != ctx.types->types.end()) return hint_of_type(it->second);
      }
      if (ctx.locals.count(e->name) || ctx.atom_names.count(e->name) || e->name == "INT")
        return ArityHint::Scalar;
      return ArityHint::Unknown;
    }
    case ExprOp::IntLit:
    case ExprOp::Add:
    case ExprOp::Sub:
    case ExprOp::Mul:
    case ExprOp::Div:
    case ExprOp::Mod:
    case ExprOp::Pow:
      return ArityHint::Scalar;
    case ExprOp::Maplet:
    case ExprOp::Id:
    case ExprOp::Prj1:
    case ExprOp::Prj2:
    case ExprOp::DomRes:
    case ExprOp::DomSub:
    case ExprOp::RanRes:
    case ExprOp::RanSub:
      return ArityHint::Relational;
    case ExprOp::SetLit:
      return arity_hint(e->args[0], ctx);
    case ExprOp::Union:
    case ExprOp::Inter:
    case ExprOp::SetMinus: {
      ArityHint l = arity_hint(e->args[0], ctx);
      if (l != ArityHint::Unknown) return l;
      return arity_hint(e->args[1], ctx);
    }
    case ExprOp::Dom:
    case ExprOp::Ran:
      return ArityHint::Scalar;
    default:
      return ArityHint::Unknown;
  }
}

AlloyExprPtr pow_chain(const AlloyExprPtr& base, const AlloyExprPtr& exp, int bitwidth) {
  const long long max_exp = (1LL << (bitwidth - 1)) - 1;
  auto power_of = [&](long long k) -> AlloyExprPtr {
    if (k == 0) return a_int(1);
    AlloyExprPtr acc = base;
    for (long long i = 1; i < k; ++i) acc = a_call("mul", {acc, base});
    return acc;
  };
  AlloyExprPtr chain = a_int(0);  // negative exponents fall through here
  for (long long k = max_exp; k >= 0; --k)
    chain = a_cond(a_compare(AOp::Eq, exp, a_int(k)), power_of(k), chain);
  return chain;
}

}  // namespace

EncodeContext make_encode_context(const Machine& machine, const Context* context,
                                  const TypeEnv& types, const std::string& state_var,
                                  int bitwidth) {
  EncodeContext ctx;
  ctx.current_state = state_var;
  ctx.bitwidth = bitwidth;
  ctx.types = &types;
  for (const std::string& v : machine.variables) {
    auto it = types.types.find(v);
    if (it == types.types.end()) throw TranslateError("variable '" + v + "' has no inferred type");
    AlloyExprPtr path = a_join(a_name(state_var), a_name(v));
    if (it->second->kind == TypeTerm::Kind::Rel) path = a_join(path, a_name("rel"));
    ctx.var_paths[v] = path;
  }
  if (context) {
    for (const auto& s : context->carrier_sets) ctx.atom_names.insert(s);
    for (const auto& es : context->enumerated_sets) {
      ctx.atom_names.insert(es.name);
      for (const auto& m : es.members) ctx.atom_names.insert(m);
    }
    for (const auto& c : context->constants) ctx.atom_names.insert(c);
  }
  return ctx;
}

AlloyExprPtr encode_expr(const ExprPtr& e, const EncodeContext& ctx, ArityHint hint) {
  switch (e->op) {
    case ExprOp::Ident: {
      if (ctx.locals.count(e->name)) return a_name(e->name);
      auto it = ctx.var_paths.find(e->name);
      if (it != ctx.var_paths.end()) return it->second;
      if (e->name == "INT") return a_name("Int");
      if (ctx.atom_names.count(e->name)) return a_name(e->name);
      throw TranslateError("unknown identifier '" + e->name + "' in expression");
    }
    case ExprOp::IntLit:
      return a_int(e->value);
    case ExprOp::EmptySet:
      if (hint == ArityHint::Relational) return a_product(a_none(), a_none());
      return a_none();
    case ExprOp::SetLit: {
      AlloyExprPtr acc;
      for (const ExprPtr& el : e->args) {
        AlloyExprPtr enc = encode_expr(el, ctx, ArityHint::Unknown);
        acc = acc ? a_binary(AOp::Union, acc, enc) : enc;
      }
      return acc;
    }
    case ExprOp::Maplet:
      return a_product(encode_expr(e->args[0], ctx), encode_expr(e->args[1], ctx));
    case ExprOp::Union:
    case ExprOp::Inter:
    case ExprOp::SetMinus: {
      ArityHint h = hint;
      if (h == ArityHint::Unknown) h = arity_hint(e, ctx);
      AOp op = e->op == ExprOp::Union ? AOp::Union : e->op == ExprOp::Inter ? AOp::Intersect : AOp::Diff;
      return a_binary(op, encode_expr(e->args[0], ctx, h), encode_expr(e->args[1], ctx, h));
    }
    case ExprOp::Dom:
      return a_call("dom", {encode_expr(e->args[0], ctx, ArityHint::Relational)});
    case ExprOp::Ran:
      return a_call("ran", {encode_expr(e->args[0], ctx, ArityHint::Relational)});
    case ExprOp::DomRes:
      return a_binary(AOp::DomRestr, encode_expr(e->args[0], ctx, ArityHint::Scalar),
                      encode_expr(e->args[1], ctx, ArityHint::Relational));
    case ExprOp::DomSub: {
      // S <<| r  becomes  (dom[r] - S) <: r
      AlloyExprPtr r = encode_expr(e->args[1], ctx, ArityHint::Relational);
      AlloyExprPtr s = encode_expr(e->args[0], ctx, ArityHint::Scalar);
      return a_binary(AOp::DomRestr, a_binary(AOp::Diff, a_call("dom", {r}), s), r);
    }
    case ExprOp::RanRes:
      return a_binary(AOp::RanRestr, encode_expr(e->args[0], ctx, ArityHint::Relational),
                      encode_expr(e->args[1], ctx, ArityHint::Scalar));
    case ExprOp::RanSub: {
      // r |>> S  becomes  r :> (ran[r] - S)
      AlloyExprPtr r = encode_expr(e->args[0], ctx, ArityHint::Relational);
      AlloyExprPtr s = encode_expr(e->args[1], ctx, ArityHint::Scalar);
      return a_binary(AOp::RanRestr, r, a_binary(AOp::Diff, a_call("ran", {r}), s));
    }
    case ExprOp::Prj1:
      return a_call("prj1", {encode_expr(e->args[0], ctx, ArityHint::Relational)});
    case ExprOp::Prj2:
      return a_call("prj2", {encode_expr(e->args[0], ctx, ArityHint::Relational)});
    case ExprOp::Id:
      return a_call("id", {encode_expr(e->args[0], ctx, ArityHint::Scalar)});
    case ExprOp::Add:
    case ExprOp::Sub:
    case ExprOp::Mul:
    case ExprOp::Div:
    case ExprOp::Mod: {
      const char* fn = e->op == ExprOp::Add   ? "plus"
                       : e->op == ExprOp::Sub ? "minus"
                       : e->op == ExprOp::Mul ? "mul"
                       : e->op == ExprOp::Div ? "div"
                                              : "rem";
      return a_call(fn, {encode_expr(e->args[0], ctx, ArityHint::Scalar),
                         encode_expr(e->args[1], ctx, ArityHint::Scalar)});
    }
    case ExprOp::Pow:
      return pow_chain(encode_expr(e->args[0], ctx, ArityHint::Scalar),
                       encode_expr(e->args[1], ctx, ArityHint::Scalar), ctx.bitwidth);
    default:
      throw TranslateError("type constructor in expression position");
  }
}

namespace {

// `e in A -> B` plus the function-class facts, for flat constructor types.
AlloyExprPtr encode_type_membership(const AlloyExprPtr& lhs, const ExprPtr& type_expr,
                                    const EncodeContext& ctx) {
  auto endpoint = [&](const ExprPtr& t) -> AlloyExprPtr {
    if (t->op == ExprOp::Ident) {
      if (t->name == "INT") return a_name("Int");
      if (ctx.atom_names.count(t->name)) return a_name(t->name);
    }
    throw TranslateError("nested relational type in membership predicate");
  };
  AlloyExprPtr left = endpoint(type_expr->args[0]);
  AlloyExprPtr right = endpoint(type_expr->args[1]);
  AlloyExprPtr result = a_compare(AOp::In, lhs, a_product(left, right));

  FnClass cls = type_expr->op == ExprOp::RelType       ? FnClass::Relation
                : type_expr->op == ExprOp::TotalFn     ? FnClass::TotalFn
                : type_expr->op == ExprOp::PartialFn   ? FnClass::PartialFn
                : type_expr->op == ExprOp::TotalSurj   ? FnClass::TotalSurj
                : type_expr->op == ExprOp::PartialSurj ? FnClass::PartialSurj
                                                       : FnClass::TotalInj;
  for (ClassFact fact : class_facts(cls)) {
    QuantDecl d;
    AlloyExprPtr body;
    switch (fact) {
      case ClassFact::Functional:
        d.names = {"ax"};
        d.bound = left;
        body = a_mult("lone", a_join(a_name("ax"), lhs));
        break;
      case ClassFact::Total:
        d.names = {"ax"};
        d.bound = left;
        body = a_mult("some", a_join(a_name("ax"), lhs));
        break;
      case ClassFact::Surjective:
        d.names = {"ay"};
        d.bound = right;
        body = a_mult("some", a_join(lhs, a_name("ay")));
        break;
      case ClassFact::Injective:
        d.names = {"ay"};
        d.bound = right;
        body = a_mult("lone", a_join(lhs, a_name("ay")));
        break;
    }
    result = a_compare(AOp::And, result, a_quant("all", {d}, {body}));
  }
  return result;
}

}  // namespace

AlloyExprPtr encode_pred(const PredPtr& p, const EncodeContext& ctx) {
  switch (p->op) {
    case PredOp::In:
    case PredOp::NotIn: {
      AlloyExprPtr f;
      if (is_type_constructor(p->exprs[1]->op)) {
        f = encode_type_membership(encode_expr(p->exprs[0], ctx, ArityHint::Relational),
                                   p->exprs[1], ctx);
      } else {
        ArityHint h = arity_hint(p->exprs[1], ctx);
        f = a_compare(AOp::In, encode_expr(p->exprs[0], ctx, h), encode_expr(p->exprs[1], ctx, h));
      }
      return p->op == PredOp::In ? f : a_not(f);
    }
    case PredOp::Subset: {
      ArityHint h = arity_hint(p->exprs[0], ctx);
      if (h == ArityHint::Unknown) h = arity_hint(p->exprs[1], ctx);
      return a_compare(AOp::In, encode_expr(p->exprs[0], ctx, h), encode_expr(p->exprs[1], ctx, h));
    }
    case PredOp::Eq:
    case PredOp::Neq: {
      ArityHint h = arity_hint(p->exprs[0], ctx);
      if (h == ArityHint::Unknown) h = arity_hint(p->exprs[1], ctx);
      AlloyExprPtr f = a_compare(AOp::Eq, encode_expr(p->exprs[0], ctx, h),
                                 encode_expr(p->exprs[1], ctx, h));
      return p->op == PredOp::Eq ? f : a_not(f);
    }
    case PredOp::Lt:
    case PredOp::Le:
    case PredOp::Gt:
    case PredOp::Ge: {
      AOp op = p->op == PredOp::Lt   ? AOp::Lt
               : p->op == PredOp::Le ? AOp::Le
               : p->op == PredOp::Gt ? AOp::Gt
                                     : AOp::Ge;
      return a_compare(op, encode_expr(p->exprs[0], ctx, ArityHint::Scalar),
                       encode_expr(p->exprs[1], ctx, ArityHint::Scalar));
    }
    case PredOp::And:
    case PredOp::Or:
    case PredOp::Implies: {
      AOp op = p->op == PredOp::And ? AOp::And : p->op == PredOp::Or ? AOp::Or : AOp::Implies;
      return a_compare(op, encode_pred(p->preds[0], ctx), encode_pred(p->preds[1], ctx));
    }
    case PredOp::Not:
      return a_not(encode_pred(p->preds[0], ctx));
    case PredOp::Forall:
    case PredOp::Exists: {
      EncodeContext inner = ctx;
      for (const std::string& v : p->bound) inner.locals.insert(v);
      QuantDecl d;
      d.names = p->bound;
      d.bound = a_univ();
      return a_quant(p->op == PredOp::Forall ? "all" : "some", {d},
                     {encode_pred(p->preds[0], inner)});
    }
  }
  throw TranslateError("unreachable predicate form");
}

std::vector<SigDecl> encode_events_enum(const std::vector<Event>& events) {
  std::set<std::string> names;
  for (const Event& ev : events) names.insert(ev.name);
  SigDecl base;
  base.names = {"Events"};
  base.abstract_ = true;
  SigDecl enums;
  enums.one_ = true;
  enums.extends = "Events";
  enums.names.push_back("Undef");
  for (const Event& ev : events) {
    std::string enum_name = ev.name + "E";
    if (names.count(enum_name))
      throw TranslateError("event enumeration '" + enum_name + "' collides with event '" +
                           enum_name + "'");
    enums.names.push_back(std::move(enum_name));
  }
  return {base, enums};
}

SigDecl encode_state_sig(const Machine& machine,
                         const std::map<std::string, std::string>& field_types) {
  SigDecl state;
  state.names = {"State"};
  for (const std::string& v : machine.variables) {
    auto it = field_types.find(v);
    if (it == field_types.end()) throw TranslateError("no field type for variable '" + v + "'");
    state.fields.push_back({v, a_name(it->second)});
  }
  state.fields.push_back({"Ev", a_name("Events")});
  return state;
}

FactDecl encode_init(const Machine& machine, const EncodeContext& init_ctx) {
  std::map<std::string, const Action*> by_var;
  for (const Action& a : machine.initialisation) by_var[a.target] = &a;
  std::vector<AlloyExprPtr> eqs;
  for (const std::string& v : machine.variables) {
    auto it = by_var.find(v);
    if (it == by_var.end()) throw TranslateError("initialisation does not assign '" + v + "'");
    ArityHint h = ArityHint::Scalar;
    auto ty = init_ctx.types->types.find(v);
    if (ty != init_ctx.types->types.end()) h = ty->second->kind == TypeTerm::Kind::Rel
                                                   ? ArityHint::Relational
                                                   : ArityHint::Scalar;
    eqs.push_back(a_compare(AOp::Eq, init_ctx.var_paths.at(v),
                            encode_expr(it->second->value, init_ctx, h)));
  }
  eqs.push_back(a_compare(AOp::Eq, a_join(a_name(init_ctx.current_state), a_name("Ev")),
                          a_name("Undef")));
  FactDecl fact;
  fact.name = "Initial";
  fact.body = {a_let(init_ctx.current_state, a_name("ord/first"), std::move(eqs))};
  return fact;
}

PredDecl encode_event(const Event& event, const Machine& machine, const EncodeContext& ctx) {
  EncodeContext inner = ctx;
  std::vector<QuantDecl> param_decls;
  for (const EventParam& p : event.params) {
    if (is_type_constructor(p.type_expr->op))
      throw TranslateError("event '" + event.name + "' parameter '" + p.name +
                           "' has a relational type; only set-typed parameters are supported");
    QuantDecl d;
    d.names = {p.name};
    d.bound = encode_expr(p.type_expr, inner);
    param_decls.push_back(std::move(d));
    inner.locals.insert(p.name);
  }

  std::vector<AlloyExprPtr> body;
  body.push_back(a_comment("Guards"));
  for (const PredPtr& g : event.guards) body.push_back(encode_pred(g, inner));
  body.push_back(a_comment("Action"));

  std::set<std::string> assigned;
  for (const Action& a : event.actions) {
    assigned.insert(a.target);
    auto ty = inner.types->types.find(a.target);
    bool relational = ty != inner.types->types.end() && ty->second->kind == TypeTerm::Kind::Rel;
    AlloyExprPtr target = a_join(a_name(inner.next_state), a_name(a.target));
    if (relational) target = a_join(target, a_name("rel"));
    body.push_back(a_compare(AOp::Eq, target,
                             encode_expr(a.value, inner,
                                         relational ? ArityHint::Relational : ArityHint::Scalar)));
  }
  // frame conditions: unassigned fields keep their previous value
  for (const std::string& v : machine.variables) {
    if (assigned.count(v)) continue;
    body.push_back(a_compare(AOp::Eq, a_join(a_name(inner.next_state), a_name(v)),
                             a_join(a_name(inner.current_state), a_name(v))));
  }
  body.push_back(a_compare(AOp::Eq, a_join(a_name(inner.next_state), a_name("Ev")),
                           a_name(event.name + "E")));

  PredDecl pred;
  pred.name = event.name;
  QuantDecl states;
  states.names = {ctx.current_state, ctx.next_state};
  states.bound = a_name("State");
  pred.params = {states};
  if (param_decls.empty()) {
    pred.body = std::move(body);
  } else {
    pred.body = {a_quant("some", std::move(param_decls), std::move(body))};
  }
  return pred;
}

FactDecl encode_trigger(const std::vector<Event>& events) {
  if (events.empty())
    throw TranslateError("machine has no events; the execution model cannot step");
  AlloyExprPtr disj;
  for (const Event& ev : events) {
    AlloyExprPtr call = a_call(ev.name, {a_name("s"), a_name("s'")});
    disj = disj ? a_compare(AOp::Or, disj, call) : call;
  }
  QuantDecl d;
  d.names = {"s"};
  d.bound = a_binary(AOp::Diff, a_name("State"), a_name("ord/last"));
  FactDecl fact;
  fact.name = "EventTrigger";
  fact.body = {a_quant("all", {d}, {a_let("s'", a_call("ord/next", {a_name("s")}), {disj})})};
  return fact;
}

AssertDecl encode_invariants(const Machine& machine, const TypeEnv& types, const EncodeContext& ctx,
                             const std::string& assert_name, std::vector<std::string>* warnings) {
  std::set<std::size_t> typing;
  for (const auto& [var, idx] : types.typing_invariant) typing.insert(idx);
  AlloyExprPtr conj;
  for (std::size_t i = 0; i < machine.invariants.size(); ++i) {
    if (typing.count(i)) continue;  // enforced structurally by the signatures
    AlloyExprPtr f = encode_pred(machine.invariants[i], ctx);
    conj = conj ? a_compare(AOp::And, conj, f) : f;
  }
  if (!conj) {
    if (warnings)
      warnings->push_back("machine has no non-typing invariants; assertion body is vacuous");
    conj = a_mult("some", a_univ());
  }
  QuantDecl d;
  d.names = {ctx.current_state};
  d.bound = a_name("State");
  AssertDecl decl;
  decl.name = assert_name;
  decl.body = {a_quant("all", {d}, {conj})};
  return decl;
}

CheckCmd emit_check(const EncodeOptions& options, const std::vector<std::string>& carrier_sets,
                    const std::vector<std::string>& aux_sigs, const std::string& assert_name) {
  CheckCmd cmd;
  cmd.assert_name = assert_name;
  cmd.bitwidth = options.bitwidth;
  cmd.exact_bounds.emplace_back("State", options.num_states);
  for (const std::string& s : carrier_sets) {
    auto it = options.scopes.find(s);
    if (it == options.scopes.end())
      throw TranslateError("no scope given for carrier set '" + s + "'");
    cmd.exact_bounds.emplace_back(s, it->second);
  }
  // auxiliary signatures need as many atoms as there are states
  for (const std::string& s : aux_sigs) cmd.exact_bounds.emplace_back(s, options.num_states);
  return cmd;
}

FactDecl class_fact_decl(const SigSpec& spec) {
  std::vector<AlloyExprPtr> lines;
  AlloyExprPtr field = a_join(a_name("x"), a_name(spec.field_name));
  for (ClassFact fact : spec.side_facts) {
    QuantDecl d;
    AlloyExprPtr body;
    switch (fact) {
      case ClassFact::Functional:
        d.names = {"a"};
        d.bound = a_name(spec.left);
        body = a_mult("lone", a_join(a_name("a"), field));
        break;
      case ClassFact::Total:
        d.names = {"a"};
        d.bound = a_name(spec.left);
        body = a_mult("some", a_join(a_name("a"), field));
        break;
      case ClassFact::Surjective:
        d.names = {"b"};
        d.bound = a_name(spec.right);
        body = a_mult("some", a_join(field, a_name("b")));
        break;
      case ClassFact::Injective:
        d.names = {"b"};
        d.bound = a_name(spec.right);
        body = a_mult("lone", a_join(field, a_name("b")));
        break;
    }
    lines.push_back(a_quant("all", {d}, {body}));
  }
  QuantDecl x;
  x.names = {"x"};
  x.bound = a_name(spec.name);
  FactDecl fact;
  fact.name = spec.name + "Class";
  fact.body = {a_quant("all", {x}, std::move(lines))};
  return fact;
}

EncodeResult encode(const Machine& machine, const Context* context, const TypeEnv& types,
                    const EncodeOptions& options) {
  if (options.num_states < 2)
    throw TranslateError("num_states must be at least 2 (initial state plus one transition)");
  if (options.bitwidth < 1) throw TranslateError("bitwidth must be at least 1");

  // model names must not collide with target-language machinery
  std::vector<std::string> model_names;
  model_names.insert(model_names.end(), machine.variables.begin(), machine.variables.end());
  for (const Event& ev : machine.events) {
    model_names.push_back(ev.name);
    for (const EventParam& p : ev.params) model_names.push_back(p.name);
  }
  if (context) {
    model_names.insert(model_names.end(), context->carrier_sets.begin(), context->carrier_sets.end());
    for (const auto& es : context->enumerated_sets) {
      model_names.push_back(es.name);
      model_names.insert(model_names.end(), es.members.begin(), es.members.end());
    }
    model_names.insert(model_names.end(), context->constants.begin(), context->constants.end());
  }
  for (const std::string& n : model_names) {
    if (reserved_target_names().count(n))
      throw TranslateError("name '" + n + "' collides with a reserved target name");
    if (n == "s" || n == "s0") throw TranslateError("name '" + n + "' collides with a state variable");
  }

  EncodeResult result;
  AlloyModule& mod = result.module;
  mod.name = machine.name;
  mod.opens = {"util/ordering[State] as ord"};

  for (FunDecl& f : prelude()) mod.decls.emplace_back(std::move(f));

  if (context) {
    for (const std::string& s : context->carrier_sets) {
      SigDecl sig;
      sig.names = {s};
      mod.decls.emplace_back(std::move(sig));
    }
    for (const EnumSet& es : context->enumerated_sets) {
      SigDecl base;
      base.names = {es.name};
      base.abstract_ = true;
      mod.decls.emplace_back(std::move(base));
      SigDecl members;
      members.one_ = true;
      members.names = es.members;
      members.extends = es.name;
      mod.decls.emplace_back(std::move(members));
    }
    // scalar constants become singleton subset sigs typed by their axiom
    for (const std::string& c : context->constants) {
      const ExprPtr* type_expr = nullptr;
      for (const PredPtr& ax : context->axioms) {
        if (ax->op == PredOp::In && ax->exprs[0]->op == ExprOp::Ident && ax->exprs[0]->name == c) {
          type_expr = &ax->exprs[1];
          break;
        }
      }
      if (!type_expr) throw TranslateError("constant '" + c + "' has no typing axiom");
      if ((*type_expr)->op != ExprOp::Ident)
        throw TranslateError("constant '" + c + "' is not scalar; relational constants are unsupported");
      SigDecl sig;
      sig.names = {c};
      sig.one_ = true;
      sig.extends = (*type_expr)->name;
      sig.subset_ = true;
      mod.decls.emplace_back(std::move(sig));
    }
  }

  for (SigDecl& s : encode_events_enum(machine.events)) mod.decls.emplace_back(std::move(s));

  // auxiliary signatures, innermost first, in variable order
  std::map<std::string, std::string> field_types;
  std::vector<std::string> aux_names;
  for (const std::string& v : machine.variables) {
    FlattenResult flat = flatten_type(types.types.at(v), v);
    field_types[v] = flat.state_field_type;
    for (const SigSpec& spec : flat.sigs) {
      aux_names.push_back(spec.name);
      SigDecl sig;
      sig.names = {spec.name};
      sig.fields.push_back({spec.field_name, a_product(a_name(spec.left), a_name(spec.right))});
      mod.decls.emplace_back(std::move(sig));
      if (!spec.side_facts.empty()) mod.decls.emplace_back(class_fact_decl(spec));
    }
  }

  mod.decls.emplace_back(encode_state_sig(machine, field_types));

  // non-typing context axioms
  if (context && !context->axioms.empty()) {
    EncodeContext axiom_ctx = make_encode_context(machine, context, types, "s", options.bitwidth);
    axiom_ctx.var_paths.clear();  // axioms may not mention machine state
    std::set<std::size_t> typing_axioms;
    for (std::size_t i = 0; i < context->axioms.size(); ++i) {
      const PredPtr& ax = context->axioms[i];
      if (ax->op == PredOp::In && ax->exprs[0]->op == ExprOp::Ident) {
        bool is_constant = std::find(context->constants.begin(), context->constants.end(),
                                     ax->exprs[0]->name) != context->constants.end();
        if (is_constant && ax->exprs[1]->op == ExprOp::Ident) {
          typing_axioms.insert(i);  // already enforced by the subset sig
          continue;
        }
      }
    }
    std::vector<AlloyExprPtr> body;
    for (std::size_t i = 0; i < context->axioms.size(); ++i)
      if (!typing_axioms.count(i)) body.push_back(encode_pred(context->axioms[i], axiom_ctx));
    if (!body.empty()) {
      FactDecl fact;
      fact.name = context->name + "Axioms";
      fact.body = std::move(body);
      mod.decls.emplace_back(std::move(fact));
    }
  }

  EncodeContext ctx = make_encode_context(machine, context, types, "s", options.bitwidth);

  EncodeContext init_ctx = make_encode_context(machine, context, types, "s0", options.bitwidth);
  mod.decls.emplace_back(encode_init(machine, init_ctx));

  for (const Event& ev : machine.events)
    mod.decls.emplace_back(encode_event(ev, machine, ctx));

  mod.decls.emplace_back(encode_trigger(machine.events));

  std::string assert_name =
      options.assert_name.empty() ? machine.name + "Invariants" : options.assert_name;
  mod.decls.emplace_back(encode_invariants(machine, types, ctx, assert_name, &result.warnings));

  std::vector<std::string> carriers;
  if (context) carriers = context->carrier_sets;
  mod.decls.emplace_back(emit_check(options, carriers, aux_names, assert_name));

  return result;
}

std::map<std::string, int> count_field_constraints(const PredDecl& pred,
                                                   const std::vector<std::string>& state_fields) {
  std::map<std::string, int> counts;
  for (const std::string& f : state_fields) counts[f] = 0;

  std::function<void(const AlloyExprPtr&)> walk = [&](const AlloyExprPtr& e) {
    if (e->op == AOp::Eq) {
      // s'.F = ...  or  s'.F.rel = ...
      const AlloyExpr* lhs = e->args[0].get();
      if (lhs->op == AOp::Join && lhs->args[1]->op == AOp::Name && lhs->args[1]->name == "rel")
        lhs = lhs->args[0].get();
      if (lhs->op == AOp::Join && lhs->args[0]->op == AOp::Name && lhs->args[0]->name == "s'" &&
          lhs->args[1]->op == AOp::Name && counts.count(lhs->args[1]->name)) {
        ++counts[lhs->args[1]->name];
      }
    }
    for (const auto& a : e->args) walk(a);
    for (const auto& b : e->body) walk(b);
  };
  for (const auto& f : pred.body) walk(f);
  return counts;
}

}  // namespace eb2alloy
