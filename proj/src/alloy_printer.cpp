#include "eb2alloy/alloy_printer.hpp"

#include <sstream>

namespace eb2alloy {

namespace {

// Binding tightness, loosest first; mirrors the Alloy 4 grammar for the
// subset this backend emits.
int level(AOp op) {
  switch (op) {
    case AOp::Quant:
    case AOp::Let:
      return 4;
    case AOp::Or:
      return 8;
    case AOp::Implies:
    case AOp::Cond:
      return 12;
    case AOp::And:
      return 16;
    case AOp::Not:
      return 20;
    case AOp::Eq:
    case AOp::In:
    case AOp::Lt:
    case AOp::Le:
    case AOp::Gt:
    case AOp::Ge:
      return 24;
    case AOp::MultF:
      return 26;
    case AOp::Union:
    case AOp::Diff:
      return 30;
    case AOp::Intersect:
      return 34;
    case AOp::Product:
      return 38;
    case AOp::DomRestr:
      return 42;
    case AOp::RanRestr:
      return 44;
    case AOp::Join:
      return 50;
    case AOp::Transpose:
      return 54;
    default:
      return 60;
  }
}

const char* binop_token(AOp op) {
  switch (op) {
    case AOp::Product: return "->";
    case AOp::Union: return "+";
    case AOp::Diff: return "-";
    case AOp::Intersect: return "&";
    case AOp::Join: return ".";
    case AOp::DomRestr: return "<:";
    case AOp::RanRestr: return ":>";
    case AOp::And: return "and";
    case AOp::Or: return "or";
    case AOp::Implies: return "implies";
    case AOp::Eq: return "=";
    case AOp::In: return "in";
    case AOp::Lt: return "<";
    case AOp::Le: return "<=";
    case AOp::Gt: return ">";
    case AOp::Ge: return ">=";
    default: return "?";
  }
}

class Printer {
 public:
  explicit Printer(std::ostream& os) : os_(os) {}

  void expr(const AlloyExprPtr& e, int min_level) {
    int lvl = level(e->op);
    switch (e->op) {
      case AOp::Name:
        os_ << e->name;
        return;
      case AOp::Int:
        os_ << e->value;
        return;
      case AOp::None:
        os_ << "none";
        return;
      case AOp::Univ:
        os_ << "univ";
        return;
      case AOp::Iden:
        os_ << "iden";
        return;
      case AOp::Transpose:
        os_ << '~';
        expr(e->args[0], lvl);
        return;
      case AOp::Call: {
        os_ << e->name << '[';
        for (std::size_t i = 0; i < e->args.size(); ++i) {
          if (i) os_ << ", ";
          expr(e->args[i], 0);
        }
        os_ << ']';
        return;
      }
      case AOp::Compr: {
        os_ << "{ ";
        print_decls(e->decls);
        os_ << " | ";
        expr(e->args[0], 0);
        os_ << " }";
        return;
      }
      case AOp::Not:
        // always parenthesized, as in the usual Alloy style !(x in y)
        os_ << "!(";
        expr(e->args[0], 0);
        os_ << ')';
        return;
      case AOp::MultF: {
        bool parens = lvl < min_level;
        if (parens) os_ << '(';
        os_ << e->name << ' ';
        expr(e->args[0], lvl + 1);
        if (parens) os_ << ')';
        return;
      }
      case AOp::Cond: {
        bool parens = lvl < min_level;
        if (parens) os_ << '(';
        expr(e->args[0], lvl + 1);
        os_ << " implies ";
        expr(e->args[1], lvl + 1);
        os_ << " else ";
        expr(e->args[2], lvl);  // right-assoc chains stay flat
        if (parens) os_ << ')';
        return;
      }
      case AOp::Quant: {
        bool parens = lvl < min_level;
        if (parens) os_ << '(';
        os_ << e->name << ' ';
        print_decls(e->decls);
        os_ << " | ";
        inline_body(e->body);
        if (parens) os_ << ')';
        return;
      }
      case AOp::Let: {
        bool parens = lvl < min_level;
        if (parens) os_ << '(';
        os_ << "let " << e->name << " = ";
        expr(e->args[0], 0);
        os_ << " | ";
        inline_body(e->body);
        if (parens) os_ << ')';
        return;
      }
      case AOp::Comment:
        os_ << "// " << e->name;
        return;
      default:
        break;
    }
    // binary operators
    bool parens = lvl < min_level;
    // products read better bracketed inside set operators: r + (p -> m)
    if (!parens && e->op == AOp::Product && min_level > 24 && min_level <= 34) parens = true;
    if (parens) os_ << '(';
    int left_min = lvl;
    int right_min = lvl + 1;
    const char* tok = binop_token(e->op);
    bool spaced = e->op != AOp::Join;
    expr(e->args[0], left_min);
    if (spaced)
      os_ << ' ' << tok << ' ';
    else
      os_ << tok;
    expr(e->args[1], right_min);
    if (parens) os_ << ')';
  }

  // A formula in statement position (a line of a block).
  void statement(const AlloyExprPtr& f, int indent) {
    if (f->op == AOp::Comment) {
      line(indent);
      os_ << "// " << f->name;
      return;
    }
    if (f->op == AOp::Quant || f->op == AOp::Let) {
      bool block = needs_block(f->body);
      line(indent);
      if (f->op == AOp::Quant) {
        os_ << f->name << ' ';
        print_decls(f->decls);
      } else {
        os_ << "let " << f->name << " = ";
        expr(f->args[0], 0);
      }
      if (block) {
        os_ << " {";
        for (const auto& b : f->body) statement(b, indent + 1);
        line(indent);
        os_ << '}';
      } else {
        os_ << " | ";
        inline_body(f->body);
      }
      return;
    }
    line(indent);
    expr(f, 0);
  }

  void block(const std::vector<AlloyExprPtr>& body, int indent) {
    os_ << '{';
    for (const auto& f : body) statement(f, indent + 1);
    line(indent);
    os_ << '}';
  }

  void print_decls(const std::vector<QuantDecl>& decls) {
    for (std::size_t i = 0; i < decls.size(); ++i) {
      if (i) os_ << ", ";
      const QuantDecl& d = decls[i];
      for (std::size_t j = 0; j < d.names.size(); ++j) {
        if (j) os_ << ", ";
        os_ << d.names[j];
      }
      os_ << " : ";
      if (d.set_prefix) os_ << "set ";
      expr(d.bound, 0);
    }
  }

 private:
  std::ostream& os_;

  void line(int indent) {
    os_ << '\n';
    for (int i = 0; i < indent; ++i) os_ << "  ";
  }

  static bool needs_block(const std::vector<AlloyExprPtr>& body) {
    std::size_t real = 0;
    for (const auto& f : body) {
      if (f->op == AOp::Comment) return true;
      if (f->op == AOp::Quant || f->op == AOp::Let) return true;
      ++real;
    }
    return real != 1;
  }

  void inline_body(const std::vector<AlloyExprPtr>& body) {
    bool first = true;
    for (const auto& f : body) {
      if (f->op == AOp::Comment) continue;
      if (!first) os_ << " and ";
      first = false;
      expr(f, level(AOp::And) + 1);
    }
    if (first) os_ << "some univ";  // empty body: vacuously true
  }
};

void print_sig(std::ostream& os, const SigDecl& s) {
  Printer p(os);
  if (s.abstract_) os << "abstract ";
  if (s.one_) os << "one ";
  os << "sig ";
  for (std::size_t i = 0; i < s.names.size(); ++i) {
    if (i) os << ", ";
    os << s.names[i];
  }
  if (!s.extends.empty()) os << (s.subset_ ? " in " : " extends ") << s.extends;
  if (s.fields.empty()) {
    os << " {}";
    return;
  }
  os << " {\n";
  for (std::size_t i = 0; i < s.fields.size(); ++i) {
    os << "  " << s.fields[i].name << " : ";
    p.expr(s.fields[i].type, 0);
    if (i + 1 < s.fields.size()) os << ',';
    os << '\n';
  }
  os << '}';
}

void print_fun(std::ostream& os, const FunDecl& f) {
  Printer p(os);
  os << "fun " << f.name << '[';
  p.print_decls(f.params);
  os << "] : ";
  if (f.result_set) os << "set ";
  p.expr(f.result, 0);
  os << " { ";
  p.expr(f.body, 0);
  os << " }";
}

void print_pred(std::ostream& os, const PredDecl& d) {
  Printer p(os);
  os << "pred " << d.name << '[';
  p.print_decls(d.params);
  os << "] ";
  p.block(d.body, 0);
}

void print_fact(std::ostream& os, const FactDecl& d) {
  Printer p(os);
  os << "fact " << d.name << ' ';
  p.block(d.body, 0);
}

void print_assert(std::ostream& os, const AssertDecl& d) {
  Printer p(os);
  os << "assert " << d.name << ' ';
  p.block(d.body, 0);
}

void print_check(std::ostream& os, const CheckCmd& c) {
  os << "check " << c.assert_name << " for";
  bool first = true;
  for (const auto& [name, count] : c.exact_bounds) {
    os << (first ? " " : ", ") << "exactly " << count << ' ' << name;
    first = false;
  }
  os << (first ? " " : ", ") << c.bitwidth << " int";
}

bool one_liner(const Decl& d) {
  if (const auto* s = std::get_if<SigDecl>(&d)) return s->fields.empty();
  return std::holds_alternative<FunDecl>(d) || std::holds_alternative<CheckCmd>(d);
}

bool same_kind(const Decl& a, const Decl& b) { return a.index() == b.index(); }

}  // namespace

std::string print_alloy_expr(const AlloyExprPtr& e) {
  std::ostringstream os;
  Printer(os).expr(e, 0);
  return os.str();
}

std::string print_module(const AlloyModule& m) {
  std::ostringstream os;
  os << "module " << m.name << '\n';
  for (const auto& o : m.opens) os << "\nopen " << o;
  if (!m.opens.empty()) os << '\n';
  for (std::size_t i = 0; i < m.decls.size(); ++i) {
    if (i == 0) {
      os << '\n';
    } else if (one_liner(m.decls[i]) && one_liner(m.decls[i - 1]) && same_kind(m.decls[i], m.decls[i - 1])) {
      // consecutive short declarations stay grouped
    } else {
      os << '\n';
    }
    std::visit(
        [&](const auto& d) {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, SigDecl>) print_sig(os, d);
          else if constexpr (std::is_same_v<T, FunDecl>) print_fun(os, d);
          else if constexpr (std::is_same_v<T, PredDecl>) print_pred(os, d);
          else if constexpr (std::is_same_v<T, FactDecl>) print_fact(os, d);
          else if constexpr (std::is_same_v<T, AssertDecl>) print_assert(os, d);
          else print_check(os, d);
        },
        m.decls[i]);
    os << '\n';
  }
  return os.str();
}

}  // namespace eb2alloy
