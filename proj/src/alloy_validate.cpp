#include "eb2alloy/alloy_validate.hpp"

#include <set>
#include <string>

namespace eb2alloy {

namespace {

class ModuleValidator {
 public:
  explicit ModuleValidator(const AlloyModule& m) : m_(m) {}

  std::vector<Diagnostic> run() {
    collect();
    for (const Decl& d : m_.decls) {
      std::visit([&](const auto& x) { check_decl(x); }, d);
    }
    return std::move(diags_);
  }

 private:
  const AlloyModule& m_;
  std::vector<Diagnostic> diags_;
  std::set<std::string> sig_names_;
  std::set<std::string> field_names_;
  std::set<std::string> callables_;  // funs + preds
  std::set<std::string> assert_names_;
  bool has_ordering_ = false;

  void report(std::string msg) { diags_.push_back({{0, 0}, std::move(msg)}); }

  static bool builtin_call(const std::string& n) {
    return n == "dom" || n == "ran" || n == "domSub" || n == "ranSub" || n == "prj1" ||
           n == "prj2" || n == "id" || n == "plus" || n == "minus" || n == "mul" || n == "div" ||
           n == "rem";
  }

  bool ord_name(const std::string& n) const {
    return has_ordering_ && (n == "ord/first" || n == "ord/last" || n == "ord/next" || n == "ord/prev");
  }

  void collect() {
    for (const auto& o : m_.opens)
      if (o.find("util/ordering") != std::string::npos) has_ordering_ = true;
    std::set<std::string> top;
    auto declare = [&](const std::string& n, const char* what) {
      if (!top.insert(n).second) report(std::string("duplicate top-level name '") + n + "' (" + what + ")");
    };
    for (const Decl& d : m_.decls) {
      if (const auto* s = std::get_if<SigDecl>(&d)) {
        for (const auto& n : s->names) {
          declare(n, "sig");
          sig_names_.insert(n);
        }
        for (const auto& f : s->fields) field_names_.insert(f.name);
      } else if (const auto* f = std::get_if<FunDecl>(&d)) {
        declare(f->name, "fun");
        callables_.insert(f->name);
      } else if (const auto* p = std::get_if<PredDecl>(&d)) {
        declare(p->name, "pred");
        callables_.insert(p->name);
      } else if (const auto* fa = std::get_if<FactDecl>(&d)) {
        if (!fa->name.empty()) declare(fa->name, "fact");
      } else if (const auto* a = std::get_if<AssertDecl>(&d)) {
        declare(a->name, "assert");
        assert_names_.insert(a->name);
      }
    }
  }

  bool known_name(const std::string& n, const std::set<std::string>& locals) const {
    return locals.count(n) || sig_names_.count(n) || field_names_.count(n) || n == "Int" || ord_name(n);
  }

  void check_expr(const AlloyExprPtr& e, std::set<std::string> locals) {
    switch (e->op) {
      case AOp::Name:
        if (!known_name(e->name, locals)) report("unresolved name '" + e->name + "'");
        return;
      case AOp::Call:
        if (!builtin_call(e->name) && !callables_.count(e->name) && !known_name(e->name, locals))
          report("unresolved call target '" + e->name + "'");
        break;
      case AOp::Quant:
      case AOp::Compr:
        for (const QuantDecl& d : e->decls) {
          check_expr(d.bound, locals);
          for (const auto& n : d.names) locals.insert(n);
        }
        break;
      case AOp::Let:
        check_expr(e->args[0], locals);
        locals.insert(e->name);
        for (const auto& b : e->body) check_expr(b, locals);
        return;
      default:
        break;
    }
    if (e->op != AOp::Let) {
      for (const auto& a : e->args) check_expr(a, locals);
      for (const auto& b : e->body) check_expr(b, locals);
    }
  }

  void check_body(const std::vector<AlloyExprPtr>& body, const std::set<std::string>& locals) {
    for (const auto& f : body)
      if (f->op != AOp::Comment) check_expr(f, locals);
  }

  std::set<std::string> param_names(const std::vector<QuantDecl>& params) {
    std::set<std::string> locals;
    for (const QuantDecl& d : params) {
      check_expr(d.bound, locals);
      for (const auto& n : d.names) locals.insert(n);
    }
    return locals;
  }

  void check_decl(const SigDecl& s) {
    if (!s.extends.empty() && !sig_names_.count(s.extends))
      report("sig extends unknown '" + s.extends + "'");
    if (s.one_ && !s.fields.empty() && !s.extends.empty())
      report("enumeration sig '" + s.names.front() + "' must not declare fields");
    for (const auto& f : s.fields) check_expr(f.type, {});
  }

  void check_decl(const FunDecl& f) {
    auto locals = param_names(f.params);
    check_expr(f.result, locals);
    check_expr(f.body, locals);
  }

  void check_decl(const PredDecl& p) { check_body(p.body, param_names(p.params)); }
  void check_decl(const FactDecl& f) { check_body(f.body, {}); }
  void check_decl(const AssertDecl& a) { check_body(a.body, {}); }

  void check_decl(const CheckCmd& c) {
    if (!assert_names_.count(c.assert_name))
      report("check references unknown assertion '" + c.assert_name + "'");
    std::set<std::string> bounded;
    for (const auto& [name, count] : c.exact_bounds) {
      if (!sig_names_.count(name)) report("bound for unknown sig '" + name + "'");
      if (count <= 0) report("non-positive bound for '" + name + "'");
      bounded.insert(name);
    }
    // every plain top-level sig (not abstract, not one, not a subset sig)
    // needs an exact bound
    for (const Decl& d : m_.decls) {
      if (const auto* s = std::get_if<SigDecl>(&d)) {
        if (s->abstract_ || s->one_ || s->subset_) continue;
        for (const auto& n : s->names)
          if (!bounded.count(n)) report("check command is missing a bound for sig '" + n + "'");
      }
    }
    if (c.bitwidth < 1) report("bitwidth must be positive");
  }
};

}  // namespace

std::vector<Diagnostic> validate_module(const AlloyModule& m) { return ModuleValidator(m).run(); }

}  // namespace eb2alloy
