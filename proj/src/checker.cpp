#include "eb2alloy/checker.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <sstream>

#include "json.hpp"

namespace eb2alloy {

namespace {

Relation int_range(int bitwidth) {
  Relation out;
  const std::int64_t hi = std::int64_t{1} << (bitwidth - 1);
  for (std::int64_t i = -hi; i < hi; ++i) out.insert({Elem{i}});
  return out;
}

Relation eb_union(const Relation& a, const Relation& b) {
  if (!a.empty() && !b.empty() && arity(a) != arity(b)) throw EvalError("arity mismatch in union");
  Relation out = a;
  out.insert(b.begin(), b.end());
  return out;
}

Relation eb_diff(const Relation& a, const Relation& b) {
  if (!a.empty() && !b.empty() && arity(a) != arity(b))
    throw EvalError("arity mismatch in set difference");
  Relation out;
  for (const Tuple& t : a)
    if (!b.count(t)) out.insert(t);
  return out;
}

Relation eb_inter(const Relation& a, const Relation& b) {
  Relation out;
  for (const Tuple& t : a)
    if (b.count(t)) out.insert(t);
  return out;
}

std::int64_t scalar_int(const Relation& r, const char* what) {
  if (r.size() != 1 || r.begin()->size() != 1 || !std::holds_alternative<std::int64_t>(r.begin()->front()))
    throw EvalError(std::string(what) + " expects an integer value");
  return std::get<std::int64_t>(r.begin()->front());
}

}  // namespace

const std::vector<Elem>* CheckerUniverse::find(const std::string& name) const {
  for (const auto& [n, atoms] : sets)
    if (n == name) return &atoms;
  return nullptr;
}

std::vector<Elem> CheckerUniverse::all_atoms() const {
  std::vector<Elem> out;
  for (const auto& [n, atoms] : sets) out.insert(out.end(), atoms.begin(), atoms.end());
  return out;
}

CheckerUniverse build_universe(const Context* context, const Scope& scope) {
  CheckerUniverse u;
  u.bitwidth = scope.bitwidth;
  if (!context) return u;
  for (const std::string& s : context->carrier_sets) {
    auto it = scope.carrier_counts.find(s);
    if (it == scope.carrier_counts.end())
      throw EvalError("no scope given for carrier set '" + s + "'");
    if (it->second < 1) throw EvalError("scope for '" + s + "' must be positive");
    std::vector<Elem> atoms;
    for (int i = 0; i < it->second; ++i) atoms.push_back(Elem{s + std::to_string(i)});
    u.sets.emplace_back(s, std::move(atoms));
  }
  for (const EnumSet& es : context->enumerated_sets) {
    std::vector<Elem> atoms;
    for (const std::string& m : es.members) atoms.push_back(Elem{m});
    u.sets.emplace_back(es.name, std::move(atoms));
  }
  return u;
}

Relation eval_eventb_expr(const ExprPtr& e, const Env& env, const CheckerUniverse& universe,
                          int bitwidth) {
  auto eval = [&](const ExprPtr& x) { return eval_eventb_expr(x, env, universe, bitwidth); };
  switch (e->op) {
    case ExprOp::Ident: {
      auto it = env.find(e->name);
      if (it != env.end()) return it->second;
      if (const std::vector<Elem>* atoms = universe.find(e->name)) {
        Relation out;
        for (const Elem& a : *atoms) out.insert({a});
        return out;
      }
      // enumerated members are atoms of their set
      for (const auto& [set_name, atoms] : universe.sets) {
        for (const Elem& a : atoms)
          if (std::holds_alternative<std::string>(a) && std::get<std::string>(a) == e->name)
            return singleton(a);
      }
      if (e->name == "INT") return int_range(bitwidth);
      throw EvalError("unbound identifier '" + e->name + "'");
    }
    case ExprOp::IntLit:
      return singleton(Elem{wrap_int(e->value, bitwidth)});
    case ExprOp::EmptySet:
      return {};
    case ExprOp::SetLit: {
      Relation out;
      std::size_t ar = 0;
      for (const ExprPtr& el : e->args) {
        Relation v = eval(el);
        if (v.size() != 1) throw EvalError("set literal element is not a single value");
        const Tuple& t = *v.begin();
        if (ar == 0)
          ar = t.size();
        else if (t.size() != ar)
          throw EvalError("heterogeneous set literal");
        out.insert(t);
      }
      return out;
    }
    case ExprOp::Maplet: {
      Relation l = eval(e->args[0]);
      Relation r = eval(e->args[1]);
      Relation out;
      for (const Tuple& x : l) {
        for (const Tuple& y : r) {
          Tuple t = x;
          t.insert(t.end(), y.begin(), y.end());
          out.insert(std::move(t));
        }
      }
      return out;
    }
    case ExprOp::Union:
      return eb_union(eval(e->args[0]), eval(e->args[1]));
    case ExprOp::Inter:
      return eb_inter(eval(e->args[0]), eval(e->args[1]));
    case ExprOp::SetMinus:
      return eb_diff(eval(e->args[0]), eval(e->args[1]));
    case ExprOp::Dom: {
      Relation r = eval(e->args[0]);
      if (r.empty()) return {};
      if (arity(r) < 2) throw EvalError("dom of a set of scalars");
      Relation out;
      for (const Tuple& t : r) out.insert(Tuple(t.begin(), t.end() - 1));
      return out;
    }
    case ExprOp::Ran: {
      Relation r = eval(e->args[0]);
      if (r.empty()) return {};
      if (arity(r) < 2) throw EvalError("ran of a set of scalars");
      Relation out;
      for (const Tuple& t : r) out.insert(Tuple(t.begin() + 1, t.end()));
      return out;
    }
    case ExprOp::DomRes: {
      Relation s = eval(e->args[0]);
      Relation r = eval(e->args[1]);
      if (!s.empty() && arity(s) != 1) throw EvalError("domain restriction needs a set of scalars");
      Relation out;
      for (const Tuple& t : r) {
        if (t.size() < 2) throw EvalError("domain restriction of a set of scalars");
        if (s.count({t.front()})) out.insert(t);
      }
      return out;
    }
    case ExprOp::DomSub: {
      Relation s = eval(e->args[0]);
      Relation r = eval(e->args[1]);
      if (!s.empty() && arity(s) != 1) throw EvalError("domain subtraction needs a set of scalars");
      Relation out;
      for (const Tuple& t : r) {
        if (t.size() < 2) throw EvalError("domain subtraction of a set of scalars");
        if (!s.count({t.front()})) out.insert(t);
      }
      return out;
    }
    case ExprOp::RanRes: {
      Relation r = eval(e->args[0]);
      Relation s = eval(e->args[1]);
      if (!s.empty() && arity(s) != 1) throw EvalError("range restriction needs a set of scalars");
      Relation out;
      for (const Tuple& t : r) {
        if (t.size() < 2) throw EvalError("range restriction of a set of scalars");
        if (s.count({t.back()})) out.insert(t);
      }
      return out;
    }
    case ExprOp::RanSub: {
      Relation r = eval(e->args[0]);
      Relation s = eval(e->args[1]);
      if (!s.empty() && arity(s) != 1) throw EvalError("range subtraction needs a set of scalars");
      Relation out;
      for (const Tuple& t : r) {
        if (t.size() < 2) throw EvalError("range subtraction of a set of scalars");
        if (!s.count({t.back()})) out.insert(t);
      }
      return out;
    }
    case ExprOp::Prj1: {
      Relation r = eval(e->args[0]);
      if (!r.empty() && arity(r) != 2) throw EvalError("prj1 expects a binary relation");
      Relation out;
      for (const Tuple& t : r) out.insert({t[0], t[1], t[0]});
      return out;
    }
    case ExprOp::Prj2: {
      Relation r = eval(e->args[0]);
      if (!r.empty() && arity(r) != 2) throw EvalError("prj2 expects a binary relation");
      Relation out;
      for (const Tuple& t : r) out.insert({t[0], t[1], t[1]});
      return out;
    }
    case ExprOp::Id: {
      Relation s = eval(e->args[0]);
      if (!s.empty() && arity(s) != 1) throw EvalError("id expects a set of scalars");
      Relation out;
      for (const Tuple& t : s) out.insert({t[0], t[0]});
      return out;
    }
    case ExprOp::Add:
    case ExprOp::Sub:
    case ExprOp::Mul:
    case ExprOp::Div:
    case ExprOp::Mod: {
      std::int64_t a = scalar_int(eval(e->args[0]), "arithmetic");
      std::int64_t b = scalar_int(eval(e->args[1]), "arithmetic");
      std::int64_t v;
      switch (e->op) {
        case ExprOp::Add: v = a + b; break;
        case ExprOp::Sub: v = a - b; break;
        case ExprOp::Mul: v = a * b; break;
        case ExprOp::Div:
          if (b == 0) throw EvalError("division by zero");
          v = a / b;
          break;
        default:
          if (b == 0) throw EvalError("division by zero");
          v = a % b;
          break;
      }
      return singleton(Elem{wrap_int(v, bitwidth)});
    }
    case ExprOp::Pow: {
      std::int64_t a = scalar_int(eval(e->args[0]), "power");
      std::int64_t b = scalar_int(eval(e->args[1]), "power");
      if (b < 0) return singleton(Elem{std::int64_t{0}});
      std::int64_t v = 1;
      for (std::int64_t i = 0; i < b; ++i) v = wrap_int(v * a, bitwidth);
      return singleton(Elem{wrap_int(v, bitwidth)});
    }
    default:
      throw EvalError("type constructor in value position");
  }
}

namespace {

// `x : T` for constructor types is a type-conformance check, not a set
// membership over a constructed (nested) set.
bool membership_holds(const ExprPtr& lhs, const ExprPtr& rhs, const Env& env,
                      const CheckerUniverse& universe, int bitwidth) {
  Relation x = eval_eventb_expr(lhs, env, universe, bitwidth);
  if (is_type_constructor(rhs->op)) {
    Relation domain = eval_eventb_expr(rhs->args[0], env, universe, bitwidth);
    Relation range = eval_eventb_expr(rhs->args[1], env, universe, bitwidth);
    FnClass cls;
    switch (rhs->op) {
      case ExprOp::RelType: cls = FnClass::Relation; break;
      case ExprOp::TotalFn: cls = FnClass::TotalFn; break;
      case ExprOp::PartialFn: cls = FnClass::PartialFn; break;
      case ExprOp::TotalSurj: cls = FnClass::TotalSurj; break;
      case ExprOp::PartialSurj: cls = FnClass::PartialSurj; break;
      default: cls = FnClass::TotalInj; break;
    }
    if (rhs->args[0]->op != ExprOp::Ident || rhs->args[1]->op != ExprOp::Ident)
      throw EvalError("nested relational type in membership predicate");
    return satisfies_class(x, domain, range, cls);
  }
  Relation s = eval_eventb_expr(rhs, env, universe, bitwidth);
  if (x.size() != 1) throw EvalError("membership left-hand side is not a single value");
  return s.count(*x.begin()) > 0;
}

}  // namespace

bool eval_eventb_pred(const PredPtr& p, const Env& env, const CheckerUniverse& universe,
                      int bitwidth) {
  auto eval_p = [&](const PredPtr& q) { return eval_eventb_pred(q, env, universe, bitwidth); };
  auto eval_e = [&](const ExprPtr& x) { return eval_eventb_expr(x, env, universe, bitwidth); };
  switch (p->op) {
    case PredOp::In:
      return membership_holds(p->exprs[0], p->exprs[1], env, universe, bitwidth);
    case PredOp::NotIn:
      return !membership_holds(p->exprs[0], p->exprs[1], env, universe, bitwidth);
    case PredOp::Eq:
      return eval_e(p->exprs[0]) == eval_e(p->exprs[1]);
    case PredOp::Neq:
      return eval_e(p->exprs[0]) != eval_e(p->exprs[1]);
    case PredOp::Subset: {
      Relation a = eval_e(p->exprs[0]);
      Relation b = eval_e(p->exprs[1]);
      return std::includes(b.begin(), b.end(), a.begin(), a.end());
    }
    case PredOp::Lt:
      return scalar_int(eval_e(p->exprs[0]), "<") < scalar_int(eval_e(p->exprs[1]), "<");
    case PredOp::Le:
      return scalar_int(eval_e(p->exprs[0]), "<=") <= scalar_int(eval_e(p->exprs[1]), "<=");
    case PredOp::Gt:
      return scalar_int(eval_e(p->exprs[0]), ">") > scalar_int(eval_e(p->exprs[1]), ">");
    case PredOp::Ge:
      return scalar_int(eval_e(p->exprs[0]), ">=") >= scalar_int(eval_e(p->exprs[1]), ">=");
    case PredOp::And:
      return eval_p(p->preds[0]) && eval_p(p->preds[1]);
    case PredOp::Or:
      return eval_p(p->preds[0]) || eval_p(p->preds[1]);
    case PredOp::Not:
      return !eval_p(p->preds[0]);
    case PredOp::Implies:
      return !eval_p(p->preds[0]) || eval_p(p->preds[1]);
    case PredOp::Forall:
    case PredOp::Exists: {
      // bound variables range over the whole scoped universe plus integers
      std::vector<Elem> domain = universe.all_atoms();
      for (const Tuple& t : int_range(bitwidth)) domain.push_back(t[0]);
      const bool universal = p->op == PredOp::Forall;
      std::function<bool(std::size_t, Env&)> loop = [&](std::size_t i, Env& scope) -> bool {
        if (i == p->bound.size())
          return eval_eventb_pred(p->preds[0], scope, universe, bitwidth);
        for (const Elem& a : domain) {
          scope[p->bound[i]] = singleton(a);
          bool r = loop(i + 1, scope);
          scope.erase(p->bound[i]);
          if (universal && !r) return false;
          if (!universal && r) return true;
        }
        return universal;
      };
      Env scope = env;
      return loop(0, scope);
    }
  }
  throw EvalError("unreachable predicate form");
}

ConcreteState initial_state(const Machine& machine, const Context* context, const Scope& scope) {
  CheckerUniverse universe = build_universe(context, scope);
  std::set<std::string> vars(machine.variables.begin(), machine.variables.end());
  ConcreteState state;
  for (const Action& a : machine.initialisation) {
    // the empty variable environment: reading another variable is an error
    std::function<void(const ExprPtr&)> forbid = [&](const ExprPtr& e) {
      if (e->op == ExprOp::Ident && vars.count(e->name))
        throw EvalError("initialisation of '" + a.target + "' references variable '" + e->name + "'");
      for (const auto& c : e->args) forbid(c);
    };
    forbid(a.value);
    state.vars[a.target] = eval_eventb_expr(a.value, {}, universe, scope.bitwidth);
  }
  for (const std::string& v : machine.variables)
    if (!state.vars.count(v)) throw EvalError("initialisation does not assign '" + v + "'");
  return state;
}

namespace {

bool value_in_type(const Relation& value, const TypeTermPtr& type, const CheckerUniverse& universe,
                   int bitwidth) {
  auto extent = [&](const TypeTermPtr& t) -> Relation {
    if (t->kind == TypeTerm::Kind::Integer) return int_range(bitwidth);
    const std::vector<Elem>* atoms = universe.find(t->set_name);
    Relation out;
    if (atoms)
      for (const Elem& a : *atoms) out.insert({a});
    return out;
  };
  if (type->kind != TypeTerm::Kind::Rel) {
    if (value.size() != 1 || value.begin()->size() != 1) return false;
    return extent(type).count(*value.begin()) > 0;
  }
  if (type->left->kind == TypeTerm::Kind::Rel || type->right->kind == TypeTerm::Kind::Rel)
    throw EvalError("nested relational type is not executable by the checker");
  return satisfies_class(value, extent(type->left), extent(type->right), type->fn_class);
}

void reject_unsupported(const Machine& machine, const Context* context, const TypeEnv& types) {
  if (context && !context->constants.empty())
    throw EvalError("machines with context constants are not executable by the checker");
  for (const auto& [v, t] : types.types) {
    if (t->kind == TypeTerm::Kind::Rel &&
        (t->left->kind == TypeTerm::Kind::Rel || t->right->kind == TypeTerm::Kind::Rel))
      throw EvalError("variable '" + v + "' has a nested relational type; the checker handles flat values only");
  }
}

std::vector<Elem> sorted_elems(const Relation& r) {
  std::vector<Elem> out;
  for (const Tuple& t : r) out.push_back(t[0]);
  return out;  // Relation iteration is already ordered
}

}  // namespace

std::vector<Successor> successors(const ConcreteState& state, const Machine& machine,
                                  const Context* context, const TypeEnv& types, const Scope& scope) {
  CheckerUniverse universe = build_universe(context, scope);
  std::vector<Successor> out;
  for (const Event& ev : machine.events) {
    // enumerate parameter bindings in lexicographic order
    std::vector<std::pair<std::string, Elem>> binding;
    std::function<void(std::size_t, Env&)> enumerate = [&](std::size_t pi, Env& env) {
      if (pi == ev.params.size()) {
        for (const PredPtr& g : ev.guards)
          if (!eval_eventb_pred(g, env, universe, scope.bitwidth)) return;
        ConcreteState next = state;
        for (const Action& a : ev.actions) {
          Relation value = eval_eventb_expr(a.value, env, universe, scope.bitwidth);
          auto ty = types.types.find(a.target);
          if (ty != types.types.end() &&
              !value_in_type(value, ty->second, universe, scope.bitwidth))
            throw EvalError("event '" + ev.name + "' assigns a value outside the type of '" +
                            a.target + "': " + relation_to_string(value));
          next.vars[a.target] = std::move(value);
        }
        out.push_back({ev.name, binding, std::move(next)});
        return;
      }
      const EventParam& p = ev.params[pi];
      Relation domain = eval_eventb_expr(p.type_expr, env, universe, scope.bitwidth);
      if (!domain.empty() && arity(domain) != 1)
        throw EvalError("parameter '" + p.name + "' ranges over a non-scalar set");
      for (const Elem& a : sorted_elems(domain)) {
        env[p.name] = singleton(a);
        binding.emplace_back(p.name, a);
        enumerate(pi + 1, env);
        binding.pop_back();
        env.erase(p.name);
      }
    };
    Env env(state.vars.begin(), state.vars.end());
    enumerate(0, env);
  }
  return out;
}

Verdict check(const Machine& machine, const Context* context, const TypeEnv& types,
              const Scope& scope) {
  reject_unsupported(machine, context, types);
  CheckerUniverse universe = build_universe(context, scope);

  auto violated_invariant = [&](const ConcreteState& s) -> std::optional<std::size_t> {
    Env env(s.vars.begin(), s.vars.end());
    for (std::size_t i = 0; i < machine.invariants.size(); ++i)
      if (!eval_eventb_pred(machine.invariants[i], env, universe, scope.bitwidth)) return i;
    return std::nullopt;
  };

  struct Node {
    ConcreteState state;
    int depth;
    std::ptrdiff_t parent;
    std::string event;
    std::vector<std::pair<std::string, Elem>> params;
  };
  std::vector<Node> nodes;
  std::map<ConcreteState, std::size_t> visited;
  std::deque<std::size_t> frontier;

  auto build_trace = [&](std::size_t idx) {
    Trace trace;
    for (std::ptrdiff_t i = static_cast<std::ptrdiff_t>(idx); i >= 0; i = nodes[i].parent)
      trace.push_back({nodes[i].event, nodes[i].params, nodes[i].state});
    std::reverse(trace.begin(), trace.end());
    return trace;
  };

  ConcreteState init = initial_state(machine, context, scope);
  nodes.push_back({init, 0, -1, "Undef", {}});
  visited.emplace(std::move(init), 0);
  frontier.push_back(0);

  if (auto inv = violated_invariant(nodes[0].state)) {
    Verdict v;
    v.kind = Verdict::Kind::Violation;
    v.depth = 0;
    v.trace = build_trace(0);
    v.invariant_index = *inv;
    v.states_explored = 1;
    return v;
  }

  while (!frontier.empty()) {
    std::size_t idx = frontier.front();
    frontier.pop_front();
    if (nodes[idx].depth >= scope.depth) continue;
    for (Successor& succ : successors(nodes[idx].state, machine, context, types, scope)) {
      if (visited.count(succ.state)) continue;
      if (nodes.size() >= scope.node_budget)
        throw ResourceError("node budget of " + std::to_string(scope.node_budget) +
                            " states exceeded");
      std::size_t child = nodes.size();
      nodes.push_back({succ.state, nodes[idx].depth + 1, static_cast<std::ptrdiff_t>(idx),
                       succ.event, std::move(succ.params)});
      visited.emplace(std::move(succ.state), child);
      if (auto inv = violated_invariant(nodes[child].state)) {
        Verdict v;
        v.kind = Verdict::Kind::Violation;
        v.depth = nodes[child].depth;
        v.trace = build_trace(child);
        v.invariant_index = *inv;
        v.states_explored = nodes.size();
        return v;
      }
      frontier.push_back(child);
    }
  }

  Verdict v;
  v.kind = Verdict::Kind::NoViolationWithinDepth;
  v.depth = scope.depth;
  v.states_explored = nodes.size();
  return v;
}

namespace {

nlohmann::ordered_json relation_to_json(const Relation& r) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const Tuple& t : r) {
    nlohmann::ordered_json tup = nlohmann::ordered_json::array();
    for (const Elem& e : t) {
      if (std::holds_alternative<std::int64_t>(e))
        tup.push_back(std::get<std::int64_t>(e));
      else
        tup.push_back(std::get<std::string>(e));
    }
    arr.push_back(std::move(tup));
  }
  return arr;
}

}  // namespace

std::string format_trace(const Machine& machine, const Scope& scope, const Verdict& verdict,
                         TraceFormat format) {
  if (format == TraceFormat::Text) {
    std::ostringstream os;
    if (verdict.kind == Verdict::Kind::NoViolationWithinDepth) {
      os << "no invariant violation within " << verdict.depth << " transitions ("
         << verdict.states_explored << " states explored)\n";
      return os.str();
    }
    os << "invariant " << verdict.invariant_index << " violated after " << verdict.depth
       << " transitions (" << verdict.states_explored << " states explored)\n";
    for (std::size_t i = 0; i < verdict.trace.size(); ++i) {
      const TraceStep& step = verdict.trace[i];
      os << "step " << i << ": " << step.event;
      if (!step.params.empty()) {
        os << '[';
        for (std::size_t j = 0; j < step.params.size(); ++j) {
          if (j) os << ", ";
          os << step.params[j].first << " = " << elem_to_string(step.params[j].second);
        }
        os << ']';
      }
      os << '\n';
      for (const std::string& v : machine.variables) {
        auto it = step.state.vars.find(v);
        if (it == step.state.vars.end()) continue;
        const Relation& r = it->second;
        os << "  " << v << " = ";
        if (r.size() == 1 && r.begin()->size() == 1)
          os << elem_to_string(r.begin()->front());
        else
          os << relation_to_string(r);
        os << '\n';
      }
    }
    return os.str();
  }

  nlohmann::ordered_json doc;
  doc["machine"] = machine.name;
  nlohmann::ordered_json scopes;
  for (const auto& [s, k] : scope.carrier_counts) scopes[s] = k;
  doc["scope"] = std::move(scopes);
  doc["depth"] = scope.depth;
  doc["bitwidth"] = scope.bitwidth;
  if (verdict.kind == Verdict::Kind::NoViolationWithinDepth) {
    doc["verdict"] = "no-violation-within-depth";
  } else {
    doc["verdict"] = "violation";
    doc["violated_invariant"] = verdict.invariant_index;
    doc["violation_depth"] = verdict.depth;
  }
  doc["states_explored"] = verdict.states_explored;
  nlohmann::ordered_json steps = nlohmann::ordered_json::array();
  for (const TraceStep& step : verdict.trace) {
    nlohmann::ordered_json js;
    js["event"] = step.event;
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    for (const auto& [name, value] : step.params) {
      if (std::holds_alternative<std::int64_t>(value))
        params[name] = std::get<std::int64_t>(value);
      else
        params[name] = std::get<std::string>(value);
    }
    js["params"] = std::move(params);
    nlohmann::ordered_json state = nlohmann::ordered_json::object();
    for (const std::string& v : machine.variables) {
      auto it = step.state.vars.find(v);
      if (it != step.state.vars.end()) state[v] = relation_to_json(it->second);
    }
    js["state"] = std::move(state);
    steps.push_back(std::move(js));
  }
  doc["trace"] = std::move(steps);
  return doc.dump(2) + "\n";
}

}  // namespace eb2alloy
