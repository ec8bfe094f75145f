#include "eb2alloy/alloy_eval.hpp"

#include <algorithm>
#include <functional>

namespace eb2alloy {

namespace {

Relation set_union(const Relation& a, const Relation& b) {
  if (!a.empty() && !b.empty() && arity(a) != arity(b)) throw AlloyEvalError("arity mismatch in +");
  Relation out = a;
  out.insert(b.begin(), b.end());
  return out;
}

Relation set_diff(const Relation& a, const Relation& b) {
  if (!a.empty() && !b.empty() && arity(a) != arity(b)) throw AlloyEvalError("arity mismatch in -");
  Relation out;
  for (const Tuple& t : a)
    if (!b.count(t)) out.insert(t);
  return out;
}

Relation set_inter(const Relation& a, const Relation& b) {
  Relation out;
  for (const Tuple& t : a)
    if (b.count(t)) out.insert(t);
  return out;
}

Relation product(const Relation& a, const Relation& b) {
  Relation out;
  for (const Tuple& x : a) {
    for (const Tuple& y : b) {
      Tuple t = x;
      t.insert(t.end(), y.begin(), y.end());
      out.insert(std::move(t));
    }
  }
  return out;
}

Relation join(const Relation& a, const Relation& b) {
  if (a.empty() || b.empty()) return {};
  if (arity(a) + arity(b) < 3) throw AlloyEvalError("join of two unary relations");
  Relation out;
  for (const Tuple& x : a) {
    for (const Tuple& y : b) {
      if (x.back() == y.front()) {
        Tuple t(x.begin(), x.end() - 1);
        t.insert(t.end(), y.begin() + 1, y.end());
        out.insert(std::move(t));
      }
    }
  }
  return out;
}

Relation dom_restrict(const Relation& s, const Relation& r) {
  if (!s.empty() && arity(s) != 1) throw AlloyEvalError("left of <: must be unary");
  Relation out;
  for (const Tuple& t : r)
    if (s.count({t.front()})) out.insert(t);
  return out;
}

Relation ran_restrict(const Relation& r, const Relation& s) {
  if (!s.empty() && arity(s) != 1) throw AlloyEvalError("right of :> must be unary");
  Relation out;
  for (const Tuple& t : r)
    if (s.count({t.back()})) out.insert(t);
  return out;
}

Relation drop_last(const Relation& r) {
  if (r.empty()) return {};
  if (arity(r) < 2) throw AlloyEvalError("dom of a unary relation");
  Relation out;
  for (const Tuple& t : r) out.insert(Tuple(t.begin(), t.end() - 1));
  return out;
}

Relation drop_first(const Relation& r) {
  if (r.empty()) return {};
  if (arity(r) < 2) throw AlloyEvalError("ran of a unary relation");
  Relation out;
  for (const Tuple& t : r) out.insert(Tuple(t.begin() + 1, t.end()));
  return out;
}

}  // namespace

AlloyEvaluator::AlloyEvaluator(std::map<std::string, Relation> env, std::vector<Elem> atoms,
                               int bitwidth, const AlloyModule* module)
    : env_(std::move(env)), atoms_(std::move(atoms)), bitwidth_(bitwidth), module_(module) {}

Relation AlloyEvaluator::eval(const AlloyExprPtr& e) const { return eval_expr(e, {}); }

bool AlloyEvaluator::eval_formula(const AlloyExprPtr& f) const { return eval_form(f, {}); }

Relation AlloyEvaluator::universe_rel() const {
  Relation u;
  for (const Elem& a : atoms_) u.insert({a});
  const std::int64_t hi = std::int64_t{1} << (bitwidth_ - 1);
  for (std::int64_t i = -hi; i < hi; ++i) u.insert({Elem{i}});
  return u;
}

Relation AlloyEvaluator::lookup(const std::string& name, const Locals& locals) const {
  auto it = locals.find(name);
  if (it != locals.end()) return it->second;
  it = env_.find(name);
  if (it != env_.end()) return it->second;
  if (name == "Int") {
    Relation ints;
    const std::int64_t hi = std::int64_t{1} << (bitwidth_ - 1);
    for (std::int64_t i = -hi; i < hi; ++i) ints.insert({Elem{i}});
    return ints;
  }
  throw AlloyEvalError("unbound name '" + name + "'");
}

std::int64_t AlloyEvaluator::int_value(const Relation& r, const char* what) const {
  if (r.size() != 1 || r.begin()->size() != 1 || !std::holds_alternative<std::int64_t>(r.begin()->front()))
    throw AlloyEvalError(std::string(what) + " expects a singleton integer");
  return std::get<std::int64_t>(r.begin()->front());
}

Relation AlloyEvaluator::call(const std::string& fn, std::vector<Relation> args,
                              const Locals& locals) const {
  // prelude functions by definition
  if (fn == "dom" && args.size() == 1) return drop_last(args[0]);
  if (fn == "ran" && args.size() == 1) return drop_first(args[0]);
  if (fn == "domSub" && args.size() == 2) return dom_restrict(set_diff(drop_last(args[1]), args[0]), args[1]);
  if (fn == "ranSub" && args.size() == 2) return ran_restrict(args[0], set_diff(drop_first(args[0]), args[1]));
  if (fn == "prj1" && args.size() == 1) {
    if (!args[0].empty() && arity(args[0]) != 2) throw AlloyEvalError("prj1 expects a binary relation");
    Relation out;
    for (const Tuple& t : args[0]) out.insert({t[0], t[1], t[0]});
    return out;
  }
  if (fn == "prj2" && args.size() == 1) {
    if (!args[0].empty() && arity(args[0]) != 2) throw AlloyEvalError("prj2 expects a binary relation");
    Relation out;
    for (const Tuple& t : args[0]) out.insert({t[0], t[1], t[1]});
    return out;
  }
  if (fn == "id" && args.size() == 1) {
    if (!args[0].empty() && arity(args[0]) != 1) throw AlloyEvalError("id expects a set");
    Relation out;
    for (const Tuple& t : args[0]) out.insert({t[0], t[0]});
    return out;
  }
  // built-in integer functions
  if (fn == "plus" || fn == "minus" || fn == "mul" || fn == "div" || fn == "rem") {
    if (args.size() != 2) throw AlloyEvalError(fn + " expects two arguments");
    std::int64_t a = int_value(args[0], fn.c_str());
    std::int64_t b = int_value(args[1], fn.c_str());
    std::int64_t v;
    if (fn == "plus") {
      v = a + b;
    } else if (fn == "minus") {
      v = a - b;
    } else if (fn == "mul") {
      v = a * b;
    } else {
      if (b == 0) throw AlloyEvalError("division by zero");
      v = fn == "div" ? a / b : a % b;
    }
    return singleton(Elem{wrap_int(v, bitwidth_)});
  }
  // module functions
  if (module_) {
    if (const FunDecl* f = module_->find_fun(fn)) {
      Locals callee;
      std::size_t ai = 0;
      for (const QuantDecl& d : f->params) {
        for (const std::string& n : d.names) {
          if (ai >= args.size()) throw AlloyEvalError("too few arguments to " + fn);
          callee[n] = args[ai++];
        }
      }
      if (ai != args.size()) throw AlloyEvalError("too many arguments to " + fn);
      return eval_expr(f->body, callee);
    }
  }
  // box join over a bound relation: f[a, b] = b.(a.f)
  Relation r = lookup(fn, locals);
  for (Relation& a : args) r = join(a, r);
  return r;
}

bool AlloyEvaluator::quant_loop(const std::vector<QuantDecl>& decls, std::size_t di, std::size_t ni,
                                Locals& locals, bool universal,
                                const std::vector<AlloyExprPtr>& body) const {
  if (di == decls.size()) {
    Locals copy = locals;
    return eval_body(body, copy);
  }
  const QuantDecl& d = decls[di];
  if (ni == d.names.size()) return quant_loop(decls, di + 1, 0, locals, universal, body);
  Relation bound = eval_expr(d.bound, locals);
  if (!bound.empty() && arity(bound) != 1) throw AlloyEvalError("quantifier bound must be unary");
  for (const Tuple& t : bound) {
    locals[d.names[ni]] = Relation{t};
    bool r = quant_loop(decls, di, ni + 1, locals, universal, body);
    locals.erase(d.names[ni]);
    if (universal && !r) return false;
    if (!universal && r) return true;
  }
  return universal;
}

bool AlloyEvaluator::eval_body(const std::vector<AlloyExprPtr>& body, Locals& locals) const {
  for (const AlloyExprPtr& f : body) {
    if (f->op == AOp::Comment) continue;
    if (!eval_form(f, locals)) return false;
  }
  return true;
}

bool AlloyEvaluator::eval_form(const AlloyExprPtr& f, const Locals& locals) const {
  switch (f->op) {
    case AOp::Not:
      return !eval_form(f->args[0], locals);
    case AOp::And:
      return eval_form(f->args[0], locals) && eval_form(f->args[1], locals);
    case AOp::Or:
      return eval_form(f->args[0], locals) || eval_form(f->args[1], locals);
    case AOp::Implies:
      return !eval_form(f->args[0], locals) || eval_form(f->args[1], locals);
    case AOp::Eq:
      return eval_expr(f->args[0], locals) == eval_expr(f->args[1], locals);
    case AOp::In: {
      Relation a = eval_expr(f->args[0], locals);
      Relation b = eval_expr(f->args[1], locals);
      return std::includes(b.begin(), b.end(), a.begin(), a.end());
    }
    case AOp::Lt:
    case AOp::Le:
    case AOp::Gt:
    case AOp::Ge: {
      std::int64_t a = int_value(eval_expr(f->args[0], locals), "comparison");
      std::int64_t b = int_value(eval_expr(f->args[1], locals), "comparison");
      switch (f->op) {
        case AOp::Lt: return a < b;
        case AOp::Le: return a <= b;
        case AOp::Gt: return a > b;
        default: return a >= b;
      }
    }
    case AOp::MultF: {
      Relation r = eval_expr(f->args[0], locals);
      if (f->name == "some") return !r.empty();
      if (f->name == "no") return r.empty();
      if (f->name == "lone") return r.size() <= 1;
      if (f->name == "one") return r.size() == 1;
      throw AlloyEvalError("unknown multiplicity '" + f->name + "'");
    }
    case AOp::Quant: {
      bool universal;
      if (f->name == "all") {
        universal = true;
      } else if (f->name == "some") {
        universal = false;
      } else {
        throw AlloyEvalError("unsupported quantifier '" + f->name + "'");
      }
      Locals scope = locals;
      return quant_loop(f->decls, 0, 0, scope, universal, f->body);
    }
    case AOp::Let: {
      Locals scope = locals;
      scope[f->name] = eval_expr(f->args[0], locals);
      return eval_body(f->body, scope);
    }
    case AOp::Call: {
      // predicate application
      if (module_) {
        if (const PredDecl* p = module_->find_pred(f->name)) {
          std::vector<Relation> args;
          for (const auto& a : f->args) args.push_back(eval_expr(a, locals));
          Locals callee;
          std::size_t ai = 0;
          for (const QuantDecl& d : p->params) {
            for (const std::string& n : d.names) {
              if (ai >= args.size()) throw AlloyEvalError("too few arguments to " + f->name);
              callee[n] = args[ai++];
            }
          }
          if (ai != args.size()) throw AlloyEvalError("too many arguments to " + f->name);
          return eval_body(p->body, callee);
        }
      }
      throw AlloyEvalError("'" + f->name + "' is not a predicate");
    }
    case AOp::Comment:
      return true;
    default:
      throw AlloyEvalError("expression used as a formula");
  }
}

Relation AlloyEvaluator::eval_expr(const AlloyExprPtr& e, const Locals& locals) const {
  switch (e->op) {
    case AOp::Name:
      return lookup(e->name, locals);
    case AOp::Int:
      return singleton(Elem{wrap_int(e->value, bitwidth_)});
    case AOp::None:
      return {};
    case AOp::Univ:
      return universe_rel();
    case AOp::Iden: {
      Relation out;
      for (const Tuple& t : universe_rel()) out.insert({t[0], t[0]});
      return out;
    }
    case AOp::Product:
      return product(eval_expr(e->args[0], locals), eval_expr(e->args[1], locals));
    case AOp::Union:
      return set_union(eval_expr(e->args[0], locals), eval_expr(e->args[1], locals));
    case AOp::Diff:
      return set_diff(eval_expr(e->args[0], locals), eval_expr(e->args[1], locals));
    case AOp::Intersect:
      return set_inter(eval_expr(e->args[0], locals), eval_expr(e->args[1], locals));
    case AOp::Join:
      return join(eval_expr(e->args[0], locals), eval_expr(e->args[1], locals));
    case AOp::DomRestr:
      return dom_restrict(eval_expr(e->args[0], locals), eval_expr(e->args[1], locals));
    case AOp::RanRestr:
      return ran_restrict(eval_expr(e->args[0], locals), eval_expr(e->args[1], locals));
    case AOp::Transpose: {
      Relation r = eval_expr(e->args[0], locals);
      if (!r.empty() && arity(r) != 2) throw AlloyEvalError("transpose of a non-binary relation");
      Relation out;
      for (const Tuple& t : r) out.insert({t[1], t[0]});
      return out;
    }
    case AOp::Call: {
      std::vector<Relation> args;
      for (const auto& a : e->args) args.push_back(eval_expr(a, locals));
      return call(e->name, std::move(args), locals);
    }
    case AOp::Cond:
      return eval_form(e->args[0], locals) ? eval_expr(e->args[1], locals)
                                           : eval_expr(e->args[2], locals);
    case AOp::Compr: {
      Relation out;
      Locals scope = locals;
      std::vector<std::string> names;
      std::vector<Relation> bounds;
      for (const QuantDecl& d : e->decls) {
        Relation b = eval_expr(d.bound, scope);
        if (!b.empty() && arity(b) != 1) throw AlloyEvalError("comprehension bound must be unary");
        for (const std::string& n : d.names) {
          names.push_back(n);
          bounds.push_back(b);
        }
      }
      std::vector<Relation::const_iterator> its;
      std::function<void(std::size_t, Tuple&)> rec = [&](std::size_t k, Tuple& acc) {
        if (k == names.size()) {
          if (eval_form(e->args[0], scope)) out.insert(acc);
          return;
        }
        for (const Tuple& t : bounds[k]) {
          scope[names[k]] = Relation{t};
          acc.push_back(t[0]);
          rec(k + 1, acc);
          acc.pop_back();
          scope.erase(names[k]);
        }
      };
      Tuple acc;
      rec(0, acc);
      return out;
    }
    default:
      throw AlloyEvalError("formula used as an expression");
  }
}

Relation eval_alloy_expr(const AlloyExprPtr& e, const std::map<std::string, Relation>& env,
                         const std::vector<Elem>& atoms, int bitwidth, const AlloyModule* module) {
  return AlloyEvaluator(env, atoms, bitwidth, module).eval(e);
}

bool eval_alloy_formula(const AlloyExprPtr& f, const std::map<std::string, Relation>& env,
                        const std::vector<Elem>& atoms, int bitwidth, const AlloyModule* module) {
  return AlloyEvaluator(env, atoms, bitwidth, module).eval_formula(f);
}

}  // namespace eb2alloy
