#include "eb2alloy/ast.hpp"

#include <cassert>

namespace eb2alloy {

bool is_unary(ExprOp op) {
  switch (op) {
    case ExprOp::Dom:
    case ExprOp::Ran:
    case ExprOp::Id:
    case ExprOp::Prj1:
    case ExprOp::Prj2:
      return true;
    default:
      return false;
  }
}

bool is_binary(ExprOp op) {
  switch (op) {
    case ExprOp::Ident:
    case ExprOp::IntLit:
    case ExprOp::EmptySet:
    case ExprOp::SetLit:
      return false;
    default:
      return !is_unary(op);
  }
}

bool is_type_constructor(ExprOp op) {
  switch (op) {
    case ExprOp::RelType:
    case ExprOp::TotalFn:
    case ExprOp::PartialFn:
    case ExprOp::TotalSurj:
    case ExprOp::PartialSurj:
    case ExprOp::TotalInj:
      return true;
    default:
      return false;
  }
}

ExprPtr mk_ident(std::string name, SourcePos pos) {
  auto e = std::make_shared<Expr>();
  e->op = ExprOp::Ident;
  e->name = std::move(name);
  e->pos = pos;
  return e;
}

ExprPtr mk_int(long long v, SourcePos pos) {
  auto e = std::make_shared<Expr>();
  e->op = ExprOp::IntLit;
  e->value = v;
  e->pos = pos;
  return e;
}

ExprPtr mk_empty_set(SourcePos pos) {
  auto e = std::make_shared<Expr>();
  e->op = ExprOp::EmptySet;
  e->pos = pos;
  return e;
}

ExprPtr mk_set_lit(std::vector<ExprPtr> elems, SourcePos pos) {
  assert(!elems.empty());
  auto e = std::make_shared<Expr>();
  e->op = ExprOp::SetLit;
  e->args = std::move(elems);
  e->pos = pos;
  return e;
}

ExprPtr mk_unary(ExprOp op, ExprPtr a, SourcePos pos) {
  assert(is_unary(op) && a);
  auto e = std::make_shared<Expr>();
  e->op = op;
  e->args = {std::move(a)};
  e->pos = pos;
  return e;
}

ExprPtr mk_binary(ExprOp op, ExprPtr a, ExprPtr b, SourcePos pos) {
  assert(is_binary(op) && a && b);
  auto e = std::make_shared<Expr>();
  e->op = op;
  e->args = {std::move(a), std::move(b)};
  e->pos = pos;
  return e;
}

bool is_comparison(PredOp op) {
  switch (op) {
    case PredOp::In:
    case PredOp::NotIn:
    case PredOp::Eq:
    case PredOp::Neq:
    case PredOp::Subset:
    case PredOp::Lt:
    case PredOp::Le:
    case PredOp::Gt:
    case PredOp::Ge:
      return true;
    default:
      return false;
  }
}

bool is_quantifier(PredOp op) { return op == PredOp::Forall || op == PredOp::Exists; }

PredPtr mk_compare(PredOp op, ExprPtr a, ExprPtr b, SourcePos pos) {
  assert(is_comparison(op) && a && b);
  auto p = std::make_shared<Pred>();
  p->op = op;
  p->exprs = {std::move(a), std::move(b)};
  p->pos = pos;
  return p;
}

PredPtr mk_not(PredPtr q, SourcePos pos) {
  assert(q);
  auto p = std::make_shared<Pred>();
  p->op = PredOp::Not;
  p->preds = {std::move(q)};
  p->pos = pos;
  return p;
}

PredPtr mk_connective(PredOp op, PredPtr a, PredPtr b, SourcePos pos) {
  assert((op == PredOp::And || op == PredOp::Or || op == PredOp::Implies) && a && b);
  auto p = std::make_shared<Pred>();
  p->op = op;
  p->preds = {std::move(a), std::move(b)};
  p->pos = pos;
  return p;
}

PredPtr mk_quant(PredOp op, std::vector<std::string> vars, PredPtr body, SourcePos pos) {
  assert(is_quantifier(op) && !vars.empty() && body);
  auto p = std::make_shared<Pred>();
  p->op = op;
  p->bound = std::move(vars);
  p->preds = {std::move(body)};
  p->pos = pos;
  return p;
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return a == b;
  if (a->op != b->op || a->name != b->name || a->value != b->value) return false;
  if (a->args.size() != b->args.size()) return false;
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!expr_equal(a->args[i], b->args[i])) return false;
  return true;
}

bool pred_equal(const PredPtr& a, const PredPtr& b) {
  if (!a || !b) return a == b;
  if (a->op != b->op || a->bound != b->bound) return false;
  if (a->exprs.size() != b->exprs.size() || a->preds.size() != b->preds.size()) return false;
  for (std::size_t i = 0; i < a->exprs.size(); ++i)
    if (!expr_equal(a->exprs[i], b->exprs[i])) return false;
  for (std::size_t i = 0; i < a->preds.size(); ++i)
    if (!pred_equal(a->preds[i], b->preds[i])) return false;
  return true;
}

static bool actions_equal(const std::vector<Action>& a, const std::vector<Action>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].target != b[i].target || !expr_equal(a[i].value, b[i].value)) return false;
  return true;
}

static bool preds_equal(const std::vector<PredPtr>& a, const std::vector<PredPtr>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!pred_equal(a[i], b[i])) return false;
  return true;
}

bool machine_equal(const Machine& a, const Machine& b) {
  if (a.name != b.name || a.sees != b.sees || a.variables != b.variables) return false;
  if (!preds_equal(a.invariants, b.invariants)) return false;
  if (!actions_equal(a.initialisation, b.initialisation)) return false;
  if (a.events.size() != b.events.size()) return false;
  for (std::size_t i = 0; i < a.events.size(); ++i) {
    const Event& x = a.events[i];
    const Event& y = b.events[i];
    if (x.name != y.name || x.params.size() != y.params.size()) return false;
    for (std::size_t j = 0; j < x.params.size(); ++j) {
      if (x.params[j].name != y.params[j].name) return false;
      if (!expr_equal(x.params[j].type_expr, y.params[j].type_expr)) return false;
    }
    if (!preds_equal(x.guards, y.guards) || !actions_equal(x.actions, y.actions)) return false;
  }
  return true;
}

bool context_equal(const Context& a, const Context& b) {
  if (a.name != b.name || a.carrier_sets != b.carrier_sets || a.constants != b.constants) return false;
  if (a.enumerated_sets.size() != b.enumerated_sets.size()) return false;
  for (std::size_t i = 0; i < a.enumerated_sets.size(); ++i) {
    if (a.enumerated_sets[i].name != b.enumerated_sets[i].name) return false;
    if (a.enumerated_sets[i].members != b.enumerated_sets[i].members) return false;
  }
  return preds_equal(a.axioms, b.axioms);
}

}  // namespace eb2alloy
