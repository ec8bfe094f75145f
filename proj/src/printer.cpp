#include "eb2alloy/printer.hpp"

#include <sstream>

namespace eb2alloy {

namespace {

// Binding tightness; must agree with the parser.
int expr_level(ExprOp op) {
  switch (op) {
    case ExprOp::RelType:
    case ExprOp::TotalFn:
    case ExprOp::PartialFn:
    case ExprOp::TotalSurj:
    case ExprOp::PartialSurj:
    case ExprOp::TotalInj:
      return 10;
    case ExprOp::Maplet:
      return 20;
    case ExprOp::Union:
    case ExprOp::SetMinus:
      return 30;
    case ExprOp::Inter:
      return 40;
    case ExprOp::DomRes:
    case ExprOp::DomSub:
    case ExprOp::RanRes:
    case ExprOp::RanSub:
      return 50;
    case ExprOp::Add:
    case ExprOp::Sub:
      return 60;
    case ExprOp::Mul:
    case ExprOp::Div:
    case ExprOp::Mod:
      return 70;
    case ExprOp::Pow:
      return 80;
    default:
      return 100;
  }
}

bool right_assoc(ExprOp op) { return is_type_constructor(op) || op == ExprOp::Pow; }

const char* expr_token(ExprOp op) {
  switch (op) {
    case ExprOp::RelType: return "<->";
    case ExprOp::TotalFn: return "-->";
    case ExprOp::PartialFn: return "+->";
    case ExprOp::TotalSurj: return "->>";
    case ExprOp::PartialSurj: return "+>>";
    case ExprOp::TotalInj: return ">->";
    case ExprOp::Maplet: return "|->";
    case ExprOp::Union: return "\\/";
    case ExprOp::SetMinus: return "\\";
    case ExprOp::Inter: return "/\\";
    case ExprOp::DomRes: return "<|";
    case ExprOp::DomSub: return "<<|";
    case ExprOp::RanRes: return "|>";
    case ExprOp::RanSub: return "|>>";
    case ExprOp::Add: return "+";
    case ExprOp::Sub: return "-";
    case ExprOp::Mul: return "*";
    case ExprOp::Div: return "/";
    case ExprOp::Mod: return "mod";
    case ExprOp::Pow: return "^";
    default: return "?";
  }
}

const char* unary_name(ExprOp op) {
  switch (op) {
    case ExprOp::Dom: return "dom";
    case ExprOp::Ran: return "ran";
    case ExprOp::Prj1: return "prj1";
    case ExprOp::Prj2: return "prj2";
    case ExprOp::Id: return "id";
    default: return "?";
  }
}

void print_expr_rec(std::ostream& os, const ExprPtr& e, int min_level) {
  int lvl = expr_level(e->op);
  switch (e->op) {
    case ExprOp::Ident:
      os << e->name;
      return;
    case ExprOp::IntLit:
      os << e->value;
      return;
    case ExprOp::EmptySet:
      os << "{}";
      return;
    case ExprOp::SetLit: {
      os << '{';
      for (std::size_t i = 0; i < e->args.size(); ++i) {
        if (i) os << ", ";
        print_expr_rec(os, e->args[i], 0);
      }
      os << '}';
      return;
    }
    default:
      break;
  }
  if (is_unary(e->op)) {
    os << unary_name(e->op) << '(';
    print_expr_rec(os, e->args[0], 0);
    os << ')';
    return;
  }
  bool parens = lvl < min_level;
  if (parens) os << '(';
  int left_min = right_assoc(e->op) ? lvl + 1 : lvl;
  int right_min = right_assoc(e->op) ? lvl : lvl + 1;
  print_expr_rec(os, e->args[0], left_min);
  os << ' ' << expr_token(e->op) << ' ';
  print_expr_rec(os, e->args[1], right_min);
  if (parens) os << ')';
}

int pred_level(PredOp op) {
  switch (op) {
    case PredOp::Forall:
    case PredOp::Exists:
      return 5;
    case PredOp::Implies:
      return 10;
    case PredOp::Or:
      return 20;
    case PredOp::And:
      return 30;
    case PredOp::Not:
      return 40;
    default:
      return 50;
  }
}

const char* compare_token(PredOp op) {
  switch (op) {
    case PredOp::In: return ":";
    case PredOp::NotIn: return "/:";
    case PredOp::Subset: return "<:";
    case PredOp::Eq: return "=";
    case PredOp::Neq: return "/=";
    case PredOp::Lt: return "<";
    case PredOp::Le: return "<=";
    case PredOp::Gt: return ">";
    case PredOp::Ge: return ">=";
    default: return "?";
  }
}

void print_pred_rec(std::ostream& os, const PredPtr& p, int min_level) {
  int lvl = pred_level(p->op);
  bool parens = lvl < min_level;
  if (parens) os << '(';
  switch (p->op) {
    case PredOp::Forall:
    case PredOp::Exists: {
      os << (p->op == PredOp::Forall ? "forall " : "exists ");
      for (std::size_t i = 0; i < p->bound.size(); ++i) {
        if (i) os << ", ";
        os << p->bound[i];
      }
      os << " . ";
      print_pred_rec(os, p->preds[0], lvl);
      break;
    }
    case PredOp::Implies:
      print_pred_rec(os, p->preds[0], lvl + 1);
      os << " => ";
      print_pred_rec(os, p->preds[1], lvl);
      break;
    case PredOp::Or:
      print_pred_rec(os, p->preds[0], lvl);
      os << " or ";
      print_pred_rec(os, p->preds[1], lvl + 1);
      break;
    case PredOp::And:
      print_pred_rec(os, p->preds[0], lvl);
      os << " & ";
      print_pred_rec(os, p->preds[1], lvl + 1);
      break;
    case PredOp::Not:
      os << "not ";
      print_pred_rec(os, p->preds[0], lvl);
      break;
    default:
      print_expr_rec(os, p->exprs[0], 0);
      os << ' ' << compare_token(p->op) << ' ';
      print_expr_rec(os, p->exprs[1], 0);
      break;
  }
  if (parens) os << ')';
}

void print_action(std::ostream& os, const Action& a, const char* indent) {
  os << indent << a.target << " := ";
  print_expr_rec(os, a.value, 0);
  os << '\n';
}

}  // namespace

std::string print_expr(const ExprPtr& e) {
  std::ostringstream os;
  print_expr_rec(os, e, 0);
  return os.str();
}

std::string print_pred(const PredPtr& p) {
  std::ostringstream os;
  print_pred_rec(os, p, 0);
  return os.str();
}

std::string print_context(const Context& ctx) {
  std::ostringstream os;
  os << "CONTEXT " << ctx.name << '\n';
  if (!ctx.carrier_sets.empty()) {
    os << "  SETS";
    for (const auto& s : ctx.carrier_sets) os << ' ' << s;
    os << '\n';
  }
  for (const auto& es : ctx.enumerated_sets) {
    os << "  ENUM " << es.name << " = {";
    for (std::size_t i = 0; i < es.members.size(); ++i) {
      if (i) os << ", ";
      os << es.members[i];
    }
    os << "}\n";
  }
  if (!ctx.constants.empty()) {
    os << "  CONSTANTS";
    for (const auto& c : ctx.constants) os << ' ' << c;
    os << '\n';
  }
  if (!ctx.axioms.empty()) {
    os << "  AXIOMS\n";
    for (const auto& a : ctx.axioms) os << "    " << print_pred(a) << '\n';
  }
  os << "END\n";
  return os.str();
}

std::string print_machine(const Machine& m) {
  std::ostringstream os;
  os << "MACHINE " << m.name << '\n';
  if (m.sees) os << "  SEES " << *m.sees << '\n';
  if (!m.variables.empty()) {
    os << "  VARIABLES";
    for (const auto& v : m.variables) os << ' ' << v;
    os << '\n';
  }
  if (!m.invariants.empty()) {
    os << "  INVARIANTS\n";
    for (const auto& inv : m.invariants) os << "    " << print_pred(inv) << '\n';
  }
  if (!m.initialisation.empty()) {
    os << "  INITIALISATION\n";
    for (const auto& a : m.initialisation) print_action(os, a, "    ");
  }
  for (const Event& ev : m.events) {
    os << "  EVENT " << ev.name << '\n';
    if (!ev.params.empty() || !ev.guards.empty()) {
      os << "    GUARDS\n";
      for (const auto& p : ev.params) {
        os << "      " << p.name << " : " << print_expr(p.type_expr) << '\n';
      }
      for (const auto& g : ev.guards) os << "      " << print_pred(g) << '\n';
    }
    if (!ev.actions.empty()) {
      os << "    ACTIONS\n";
      for (const auto& a : ev.actions) print_action(os, a, "      ");
    }
    os << "  END\n";
  }
  os << "END\n";
  return os.str();
}

}  // namespace eb2alloy
