#include "eb2alloy/typing.hpp"

#include <functional>
#include <set>

namespace eb2alloy {

TypeTermPtr type_given(std::string set_name) {
  auto t = std::make_shared<TypeTerm>();
  t->kind = TypeTerm::Kind::Given;
  t->set_name = std::move(set_name);
  return t;
}

TypeTermPtr type_int() {
  auto t = std::make_shared<TypeTerm>();
  t->kind = TypeTerm::Kind::Integer;
  return t;
}

TypeTermPtr type_rel(TypeTermPtr left, TypeTermPtr right, FnClass cls) {
  auto t = std::make_shared<TypeTerm>();
  t->kind = TypeTerm::Kind::Rel;
  t->left = std::move(left);
  t->right = std::move(right);
  t->fn_class = cls;
  return t;
}

bool type_equal(const TypeTermPtr& a, const TypeTermPtr& b) {
  if (!a || !b) return a == b;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case TypeTerm::Kind::Given:
      return a->set_name == b->set_name;
    case TypeTerm::Kind::Integer:
      return true;
    case TypeTerm::Kind::Rel:
      return a->fn_class == b->fn_class && type_equal(a->left, b->left) && type_equal(a->right, b->right);
  }
  return false;
}

std::string type_to_string(const TypeTermPtr& t) {
  switch (t->kind) {
    case TypeTerm::Kind::Given:
      return t->set_name;
    case TypeTerm::Kind::Integer:
      return "INT";
    case TypeTerm::Kind::Rel: {
      const char* tok = "<->";
      switch (t->fn_class) {
        case FnClass::Relation: tok = "<->"; break;
        case FnClass::TotalFn: tok = "-->"; break;
        case FnClass::PartialFn: tok = "+->"; break;
        case FnClass::TotalSurj: tok = "->>"; break;
        case FnClass::PartialSurj: tok = "+>>"; break;
        case FnClass::TotalInj: tok = ">->"; break;
      }
      return "(" + type_to_string(t->left) + " " + tok + " " + type_to_string(t->right) + ")";
    }
  }
  return "?";
}

std::vector<ClassFact> class_facts(FnClass cls) {
  switch (cls) {
    case FnClass::Relation:
      return {};
    case FnClass::TotalFn:
      return {ClassFact::Functional, ClassFact::Total};
    case FnClass::PartialFn:
      return {ClassFact::Functional};
    case FnClass::TotalSurj:
      return {ClassFact::Functional, ClassFact::Total, ClassFact::Surjective};
    case FnClass::PartialSurj:
      return {ClassFact::Functional, ClassFact::Surjective};
    case FnClass::TotalInj:
      return {ClassFact::Functional, ClassFact::Total, ClassFact::Injective};
  }
  return {};
}

namespace {

bool is_known_set(const std::string& name, const Context* context) {
  if (!context) return false;
  for (const auto& s : context->carrier_sets)
    if (s == name) return true;
  for (const auto& es : context->enumerated_sets)
    if (es.name == name) return true;
  return false;
}

FnClass class_of(ExprOp op) {
  switch (op) {
    case ExprOp::RelType: return FnClass::Relation;
    case ExprOp::TotalFn: return FnClass::TotalFn;
    case ExprOp::PartialFn: return FnClass::PartialFn;
    case ExprOp::TotalSurj: return FnClass::TotalSurj;
    case ExprOp::PartialSurj: return FnClass::PartialSurj;
    default: return FnClass::TotalInj;
  }
}

}  // namespace

TypeTermPtr type_from_expr(const ExprPtr& e, const Context* context) {
  if (e->op == ExprOp::Ident) {
    if (e->name == "INT") return type_int();
    if (is_known_set(e->name, context)) return type_given(e->name);
    return nullptr;
  }
  if (is_type_constructor(e->op)) {
    TypeTermPtr l = type_from_expr(e->args[0], context);
    TypeTermPtr r = type_from_expr(e->args[1], context);
    if (!l || !r) return nullptr;
    return type_rel(std::move(l), std::move(r), class_of(e->op));
  }
  return nullptr;
}

TypeEnv infer_types(const Machine& machine, const Context* context) {
  TypeEnv env;
  for (const std::string& v : machine.variables) {
    bool found = false;
    bool saw_membership = false;
    for (std::size_t i = 0; i < machine.invariants.size() && !found; ++i) {
      const PredPtr& inv = machine.invariants[i];
      if (inv->op != PredOp::In) continue;
      if (inv->exprs[0]->op != ExprOp::Ident || inv->exprs[0]->name != v) continue;
      saw_membership = true;
      TypeTermPtr t = type_from_expr(inv->exprs[1], context);
      if (!t) continue;
      env.types[v] = std::move(t);
      env.typing_invariant[v] = i;
      found = true;
    }
    if (!found) {
      if (saw_membership)
        throw TranslateError("variable '" + v +
                             "' has membership invariants but none with a pure type right-hand side");
      throw TranslateError("variable '" + v + "' has no typing invariant");
    }
  }
  return env;
}

FlattenResult flatten_type(const TypeTermPtr& t, const std::string& base_name) {
  FlattenResult out;
  if (t->kind == TypeTerm::Kind::Given) {
    out.state_field_type = t->set_name;
    return out;
  }
  if (t->kind == TypeTerm::Kind::Integer) {
    out.state_field_type = "Int";
    return out;
  }
  int next_index = 0;
  // Innermost first; the outermost signature takes the bare `<base>Rel` name.
  std::function<std::string(const TypeTermPtr&, bool)> emit =
      [&](const TypeTermPtr& node, bool outermost) -> std::string {
    if (node->kind == TypeTerm::Kind::Given) return node->set_name;
    if (node->kind == TypeTerm::Kind::Integer) return "Int";
    std::string left = emit(node->left, false);
    std::string right = emit(node->right, false);
    SigSpec spec;
    spec.name = outermost ? base_name + "Rel" : base_name + "Rel" + std::to_string(next_index++);
    spec.field_name = "rel";
    spec.left = std::move(left);
    spec.right = std::move(right);
    spec.side_facts = class_facts(node->fn_class);
    out.sigs.push_back(spec);
    return spec.name;
  };
  out.state_field_type = emit(t, true);
  return out;
}

bool fact_holds(const Relation& r, const Relation& domain, const Relation& range, ClassFact fact) {
  auto image_count = [&](const Elem& a) {
    std::size_t n = 0;
    for (const Tuple& t : r)
      if (t.size() == 2 && t[0] == a) ++n;
    return n;
  };
  auto preimage_count = [&](const Elem& b) {
    std::size_t n = 0;
    for (const Tuple& t : r)
      if (t.size() == 2 && t[1] == b) ++n;
    return n;
  };
  switch (fact) {
    case ClassFact::Functional:
      for (const Tuple& t : r)
        if (t.size() == 2 && image_count(t[0]) > 1) return false;
      return true;
    case ClassFact::Total:
      for (const Tuple& d : domain)
        if (image_count(d[0]) == 0) return false;
      return true;
    case ClassFact::Surjective:
      for (const Tuple& b : range)
        if (preimage_count(b[0]) == 0) return false;
      return true;
    case ClassFact::Injective:
      for (const Tuple& t : r)
        if (t.size() == 2 && preimage_count(t[1]) > 1) return false;
      return true;
  }
  return false;
}

bool satisfies_class(const Relation& r, const Relation& domain, const Relation& range, FnClass cls) {
  for (const Tuple& t : r) {
    if (t.size() != 2) return false;
    if (!domain.count({t[0]}) || !range.count({t[1]})) return false;
  }
  for (ClassFact f : class_facts(cls))
    if (!fact_holds(r, domain, range, f)) return false;
  return true;
}

}  // namespace eb2alloy
