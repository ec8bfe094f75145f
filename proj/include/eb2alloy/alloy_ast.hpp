#pragma once

#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace eb2alloy {

struct AlloyExpr;
using AlloyExprPtr = std::shared_ptr<const AlloyExpr>;

enum class AOp {
  // relational / integer expressions
  Name,
  Int,
  None,
  Univ,
  Iden,
  Product,    // ->
  Union,      // +
  Diff,       // -
  Intersect,  // &
  Join,       // .
  DomRestr,   // <:
  RanRestr,   // :>
  Transpose,  // ~
  Call,       // name[args]; prelude/builtin functions, predicates, box joins
  Cond,       // cond implies e1 else e2
  Compr,      // { decls | formula }
  // formulas
  Not,
  And,
  Or,
  Implies,
  Eq,
  In,
  Lt,
  Le,
  Gt,
  Ge,
  MultF,   // some/no/lone/one <expr>; kind in `name`
  Quant,   // all/some decls { body }; kind in `name`
  Let,     // let name = args[0] { body }
  Comment, // `// text`; pseudo-formula, ignored by evaluation and comparison
};

struct QuantDecl {
  std::vector<std::string> names;
  AlloyExprPtr bound;
  bool set_prefix = false;  // `s : set univ` in function parameters
};

struct AlloyExpr {
  AOp op;
  std::string name;           // Name/Call/MultF/Quant/Let/Comment payload
  long long value = 0;        // Int
  std::vector<AlloyExprPtr> args;
  std::vector<AlloyExprPtr> body;  // Quant/Let bodies (conjunction of formulas)
  std::vector<QuantDecl> decls;    // Quant/Compr
};

AlloyExprPtr a_name(std::string n);
AlloyExprPtr a_int(long long v);
AlloyExprPtr a_none();
AlloyExprPtr a_univ();
AlloyExprPtr a_iden();
AlloyExprPtr a_binary(AOp op, AlloyExprPtr a, AlloyExprPtr b);
AlloyExprPtr a_join(AlloyExprPtr a, AlloyExprPtr b);
AlloyExprPtr a_product(AlloyExprPtr a, AlloyExprPtr b);
AlloyExprPtr a_transpose(AlloyExprPtr a);
AlloyExprPtr a_call(std::string fn, std::vector<AlloyExprPtr> args);
AlloyExprPtr a_cond(AlloyExprPtr cond, AlloyExprPtr then_e, AlloyExprPtr else_e);
AlloyExprPtr a_compr(std::vector<QuantDecl> decls, AlloyExprPtr formula);
AlloyExprPtr a_not(AlloyExprPtr f);
AlloyExprPtr a_compare(AOp op, AlloyExprPtr a, AlloyExprPtr b);
AlloyExprPtr a_mult(std::string kind, AlloyExprPtr e);
AlloyExprPtr a_quant(std::string kind, std::vector<QuantDecl> decls, std::vector<AlloyExprPtr> body);
AlloyExprPtr a_let(std::string var, AlloyExprPtr value, std::vector<AlloyExprPtr> body);
AlloyExprPtr a_comment(std::string text);

// Structural equality; Comment nodes are skipped inside bodies.
bool alloy_equal(const AlloyExprPtr& a, const AlloyExprPtr& b);

struct FieldDecl {
  std::string name;
  AlloyExprPtr type;  // Name or Product
};

struct SigDecl {
  std::vector<std::string> names;  // `one sig A, B, C ...` declares several
  bool abstract_ = false;
  bool one_ = false;
  std::string extends;      // empty = top-level
  bool subset_ = false;     // `in` instead of `extends`
  std::vector<FieldDecl> fields;
};

struct FunDecl {
  std::string name;
  std::vector<QuantDecl> params;
  AlloyExprPtr result;
  bool result_set = false;
  AlloyExprPtr body;
};

struct PredDecl {
  std::string name;
  std::vector<QuantDecl> params;
  std::vector<AlloyExprPtr> body;
};

struct FactDecl {
  std::string name;
  std::vector<AlloyExprPtr> body;
};

struct AssertDecl {
  std::string name;
  std::vector<AlloyExprPtr> body;
};

struct CheckCmd {
  std::string assert_name;
  std::vector<std::pair<std::string, int>> exact_bounds;  // printed order
  int bitwidth = 4;
};

using Decl = std::variant<SigDecl, FunDecl, PredDecl, FactDecl, AssertDecl, CheckCmd>;

struct AlloyModule {
  std::string name;
  std::vector<std::string> opens;  // e.g. "util/ordering[State] as ord"
  std::vector<Decl> decls;         // printed in this order

  std::vector<const SigDecl*> sigs() const;
  std::vector<const FunDecl*> funs() const;
  std::vector<const PredDecl*> preds() const;
  std::vector<const FactDecl*> facts() const;
  std::vector<const AssertDecl*> asserts() const;
  std::vector<const CheckCmd*> checks() const;

  const SigDecl* find_sig(const std::string& name) const;
  const PredDecl* find_pred(const std::string& name) const;
  const FunDecl* find_fun(const std::string& name) const;
  const FactDecl* find_fact(const std::string& name) const;
};

bool sig_equal(const SigDecl& a, const SigDecl& b);
bool pred_decl_equal(const PredDecl& a, const PredDecl& b);
bool fact_equal(const FactDecl& a, const FactDecl& b);
bool assert_equal(const AssertDecl& a, const AssertDecl& b);
bool check_equal(const CheckCmd& a, const CheckCmd& b);

}  // namespace eb2alloy
