#include "eb2alloy/alloy_ast.hpp"

#include <cassert>

namespace eb2alloy {

namespace {

AlloyExprPtr node(AOp op) {
  auto e = std::make_shared<AlloyExpr>();
  e->op = op;
  return e;
}

std::shared_ptr<AlloyExpr> mut(AOp op) {
  auto e = std::make_shared<AlloyExpr>();
  e->op = op;
  return e;
}

}  // namespace

AlloyExprPtr a_name(std::string n) {
  auto e = mut(AOp::Name);
  e->name = std::move(n);
  return e;
}

AlloyExprPtr a_int(long long v) {
  auto e = mut(AOp::Int);
  e->value = v;
  return e;
}

AlloyExprPtr a_none() { return node(AOp::None); }
AlloyExprPtr a_univ() { return node(AOp::Univ); }
AlloyExprPtr a_iden() { return node(AOp::Iden); }

AlloyExprPtr a_binary(AOp op, AlloyExprPtr a, AlloyExprPtr b) {
  assert(a && b);
  auto e = mut(op);
  e->args = {std::move(a), std::move(b)};
  return e;
}

AlloyExprPtr a_join(AlloyExprPtr a, AlloyExprPtr b) { return a_binary(AOp::Join, std::move(a), std::move(b)); }
AlloyExprPtr a_product(AlloyExprPtr a, AlloyExprPtr b) { return a_binary(AOp::Product, std::move(a), std::move(b)); }

AlloyExprPtr a_transpose(AlloyExprPtr a) {
  auto e = mut(AOp::Transpose);
  e->args = {std::move(a)};
  return e;
}

AlloyExprPtr a_call(std::string fn, std::vector<AlloyExprPtr> args) {
  auto e = mut(AOp::Call);
  e->name = std::move(fn);
  e->args = std::move(args);
  return e;
}

AlloyExprPtr a_cond(AlloyExprPtr cond, AlloyExprPtr then_e, AlloyExprPtr else_e) {
  auto e = mut(AOp::Cond);
  e->args = {std::move(cond), std::move(then_e), std::move(else_e)};
  return e;
}

AlloyExprPtr a_compr(std::vector<QuantDecl> decls, AlloyExprPtr formula) {
  auto e = mut(AOp::Compr);
  e->decls = std::move(decls);
  e->args = {std::move(formula)};
  return e;
}

AlloyExprPtr a_not(AlloyExprPtr f) {
  auto e = mut(AOp::Not);
  e->args = {std::move(f)};
  return e;
}

AlloyExprPtr a_compare(AOp op, AlloyExprPtr a, AlloyExprPtr b) {
  assert(op == AOp::Eq || op == AOp::In || op == AOp::Lt || op == AOp::Le || op == AOp::Gt ||
         op == AOp::Ge || op == AOp::And || op == AOp::Or || op == AOp::Implies);
  return a_binary(op, std::move(a), std::move(b));
}

AlloyExprPtr a_mult(std::string kind, AlloyExprPtr e2) {
  auto e = mut(AOp::MultF);
  e->name = std::move(kind);
  e->args = {std::move(e2)};
  return e;
}

AlloyExprPtr a_quant(std::string kind, std::vector<QuantDecl> decls, std::vector<AlloyExprPtr> body) {
  auto e = mut(AOp::Quant);
  e->name = std::move(kind);
  e->decls = std::move(decls);
  e->body = std::move(body);
  return e;
}

AlloyExprPtr a_let(std::string var, AlloyExprPtr value, std::vector<AlloyExprPtr> body) {
  auto e = mut(AOp::Let);
  e->name = std::move(var);
  e->args = {std::move(value)};
  e->body = std::move(body);
  return e;
}

AlloyExprPtr a_comment(std::string text) {
  auto e = mut(AOp::Comment);
  e->name = std::move(text);
  return e;
}

namespace {

std::vector<AlloyExprPtr> strip_comments(const std::vector<AlloyExprPtr>& body) {
  std::vector<AlloyExprPtr> out;
  for (const auto& f : body)
    if (f->op != AOp::Comment) out.push_back(f);
  return out;
}

bool decls_equal(const std::vector<QuantDecl>& a, const std::vector<QuantDecl>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].names != b[i].names || a[i].set_prefix != b[i].set_prefix) return false;
    if (!alloy_equal(a[i].bound, b[i].bound)) return false;
  }
  return true;
}

bool bodies_equal(const std::vector<AlloyExprPtr>& a, const std::vector<AlloyExprPtr>& b) {
  auto sa = strip_comments(a);
  auto sb = strip_comments(b);
  if (sa.size() != sb.size()) return false;
  for (std::size_t i = 0; i < sa.size(); ++i)
    if (!alloy_equal(sa[i], sb[i])) return false;
  return true;
}

}  // namespace

bool alloy_equal(const AlloyExprPtr& a, const AlloyExprPtr& b) {
  if (!a || !b) return a == b;
  if (a->op != b->op || a->name != b->name || a->value != b->value) return false;
  if (a->args.size() != b->args.size()) return false;
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!alloy_equal(a->args[i], b->args[i])) return false;
  if (!decls_equal(a->decls, b->decls)) return false;
  return bodies_equal(a->body, b->body);
}

std::vector<const SigDecl*> AlloyModule::sigs() const {
  std::vector<const SigDecl*> out;
  for (const Decl& d : decls)
    if (auto* s = std::get_if<SigDecl>(&d)) out.push_back(s);
  return out;
}

std::vector<const FunDecl*> AlloyModule::funs() const {
  std::vector<const FunDecl*> out;
  for (const Decl& d : decls)
    if (auto* f = std::get_if<FunDecl>(&d)) out.push_back(f);
  return out;
}

std::vector<const PredDecl*> AlloyModule::preds() const {
  std::vector<const PredDecl*> out;
  for (const Decl& d : decls)
    if (auto* p = std::get_if<PredDecl>(&d)) out.push_back(p);
  return out;
}

std::vector<const FactDecl*> AlloyModule::facts() const {
  std::vector<const FactDecl*> out;
  for (const Decl& d : decls)
    if (auto* f = std::get_if<FactDecl>(&d)) out.push_back(f);
  return out;
}

std::vector<const AssertDecl*> AlloyModule::asserts() const {
  std::vector<const AssertDecl*> out;
  for (const Decl& d : decls)
    if (auto* a = std::get_if<AssertDecl>(&d)) out.push_back(a);
  return out;
}

std::vector<const CheckCmd*> AlloyModule::checks() const {
  std::vector<const CheckCmd*> out;
  for (const Decl& d : decls)
    if (auto* c = std::get_if<CheckCmd>(&d)) out.push_back(c);
  return out;
}

const SigDecl* AlloyModule::find_sig(const std::string& n) const {
  for (const auto* s : sigs())
    for (const auto& nm : s->names)
      if (nm == n) return s;
  return nullptr;
}

const PredDecl* AlloyModule::find_pred(const std::string& n) const {
  for (const auto* p : preds())
    if (p->name == n) return p;
  return nullptr;
}

const FunDecl* AlloyModule::find_fun(const std::string& n) const {
  for (const auto* f : funs())
    if (f->name == n) return f;
  return nullptr;
}

const FactDecl* AlloyModule::find_fact(const std::string& n) const {
  for (const auto* f : facts())
    if (f->name == n) return f;
  return nullptr;
}

bool sig_equal(const SigDecl& a, const SigDecl& b) {
  if (a.names != b.names || a.abstract_ != b.abstract_ || a.one_ != b.one_) return false;
  if (a.extends != b.extends || a.subset_ != b.subset_) return false;
  if (a.fields.size() != b.fields.size()) return false;
  for (std::size_t i = 0; i < a.fields.size(); ++i) {
    if (a.fields[i].name != b.fields[i].name) return false;
    if (!alloy_equal(a.fields[i].type, b.fields[i].type)) return false;
  }
  return true;
}

bool pred_decl_equal(const PredDecl& a, const PredDecl& b) {
  return a.name == b.name && decls_equal(a.params, b.params) && bodies_equal(a.body, b.body);
}

bool fact_equal(const FactDecl& a, const FactDecl& b) {
  return a.name == b.name && bodies_equal(a.body, b.body);
}

bool assert_equal(const AssertDecl& a, const AssertDecl& b) {
  return a.name == b.name && bodies_equal(a.body, b.body);
}

bool check_equal(const CheckCmd& a, const CheckCmd& b) {
  return a.assert_name == b.assert_name && a.exact_bounds == b.exact_bounds && a.bitwidth == b.bitwidth;
}

}  // namespace eb2alloy
