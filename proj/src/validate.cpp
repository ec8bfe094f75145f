#include "eb2alloy/validate.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace eb2alloy {

namespace {

SourcePos pos_at(const std::vector<SourcePos>& positions, std::size_t i, SourcePos fallback) {
  return i < positions.size() ? positions[i] : fallback;
}

class Validator {
 public:
  Validator(const Machine& m, const Context* ctx) : machine_(m), context_(ctx) {}

  std::vector<Diagnostic> run() {
    if (context_) check_context();
    check_machine_names();
    check_initialisation();
    check_events();
    std::stable_sort(diags_.begin(), diags_.end(), [](const Diagnostic& a, const Diagnostic& b) {
      if (a.pos.line != b.pos.line) return a.pos.line < b.pos.line;
      return a.pos.col < b.pos.col;
    });
    return std::move(diags_);
  }

 private:
  const Machine& machine_;
  const Context* context_;
  std::vector<Diagnostic> diags_;
  std::set<std::string> context_names_;
  std::set<std::string> variables_;

  void report(SourcePos pos, std::string msg) { diags_.push_back({pos, std::move(msg)}); }

  void declare(std::set<std::string>& seen, const std::string& name, SourcePos pos, const char* what) {
    if (!seen.insert(name).second)
      report(pos, std::string("duplicate declaration of ") + what + " '" + name + "'");
  }

  void check_context() {
    const Context& ctx = *context_;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < ctx.carrier_sets.size(); ++i)
      declare(seen, ctx.carrier_sets[i], pos_at(ctx.carrier_pos, i, ctx.pos), "carrier set");
    for (const EnumSet& es : ctx.enumerated_sets) {
      declare(seen, es.name, es.pos, "enumerated set");
      for (std::size_t i = 0; i < es.members.size(); ++i)
        declare(seen, es.members[i], pos_at(es.member_pos, i, es.pos), "enumerated member");
    }
    for (std::size_t i = 0; i < ctx.constants.size(); ++i)
      declare(seen, ctx.constants[i], pos_at(ctx.constant_pos, i, ctx.pos), "constant");
    context_names_ = std::move(seen);

    std::set<std::string> axiom_scope = context_names_;
    axiom_scope.insert("INT");
    for (const PredPtr& ax : ctx.axioms) check_pred(ax, axiom_scope);
  }

  void check_machine_names() {
    std::set<std::string> seen = context_names_;
    for (std::size_t i = 0; i < machine_.variables.size(); ++i) {
      const std::string& v = machine_.variables[i];
      SourcePos pos = pos_at(machine_.variable_pos, i, machine_.pos);
      if (context_names_.count(v)) {
        report(pos, "variable '" + v + "' collides with a context declaration");
      } else if (!seen.insert(v).second) {
        report(pos, "duplicate declaration of variable '" + v + "'");
      }
      variables_.insert(v);
    }

    std::set<std::string> scope = base_scope();
    for (const PredPtr& inv : machine_.invariants) check_pred(inv, scope);

    std::set<std::string> event_names;
    for (const Event& ev : machine_.events) {
      if (ev.name == "Undef" || ev.name == "Initialisation")
        report(ev.pos, "event name '" + ev.name + "' is reserved");
      else if (!event_names.insert(ev.name).second)
        report(ev.pos, "duplicate event name '" + ev.name + "'");
    }
  }

  void check_initialisation() {
    std::map<std::string, int> assigned;
    for (const Action& a : machine_.initialisation) {
      if (!variables_.count(a.target)) {
        report(a.pos, "initialisation assigns '" + a.target + "', which is not a machine variable");
        continue;
      }
      if (++assigned[a.target] > 1)
        report(a.pos, "initialisation assigns variable '" + a.target + "' more than once");
      check_expr(a.value, base_scope());
    }
    for (const std::string& v : machine_.variables) {
      if (!assigned.count(v)) report(machine_.pos, "initialisation does not assign variable '" + v + "'");
    }
  }

  void check_events() {
    for (const Event& ev : machine_.events) {
      std::set<std::string> scope = base_scope();
      for (const EventParam& p : ev.params) {
        check_expr(p.type_expr, scope);
        if (!scope.insert(p.name).second)
          report(p.pos, "parameter '" + p.name + "' shadows an existing name");
      }
      for (const PredPtr& g : ev.guards) check_pred(g, scope);
      std::set<std::string> assigned;
      for (const Action& a : ev.actions) {
        if (!variables_.count(a.target))
          report(a.pos, "event '" + ev.name + "' assigns '" + a.target + "', which is not a machine variable");
        else if (!assigned.insert(a.target).second)
          report(a.pos, "event '" + ev.name + "' assigns variable '" + a.target + "' more than once");
        check_expr(a.value, scope);
      }
    }
  }

  std::set<std::string> base_scope() const {
    std::set<std::string> scope = context_names_;
    scope.insert(variables_.begin(), variables_.end());
    scope.insert("INT");
    return scope;
  }

  void check_expr(const ExprPtr& e, const std::set<std::string>& scope) {
    if (e->op == ExprOp::Ident) {
      if (!scope.count(e->name)) report(e->pos, "unknown identifier '" + e->name + "'");
      return;
    }
    for (const ExprPtr& a : e->args) check_expr(a, scope);
  }

  void check_pred(const PredPtr& p, const std::set<std::string>& scope) {
    if (is_quantifier(p->op)) {
      std::set<std::string> inner = scope;
      for (const std::string& v : p->bound) {
        if (!inner.insert(v).second)
          report(p->pos, "bound variable '" + v + "' shadows an existing name");
      }
      check_pred(p->preds[0], inner);
      return;
    }
    for (const ExprPtr& e : p->exprs) check_expr(e, scope);
    for (const PredPtr& q : p->preds) check_pred(q, scope);
  }
};

}  // namespace

std::vector<Diagnostic> validate(const Machine& machine, const Context* context) {
  return Validator(machine, context).run();
}

}  // namespace eb2alloy
