#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace eb2alloy {

struct SourcePos {
  int line = 0;  // 1-based, 0 = unknown
  int col = 0;
};

struct Diagnostic {
  SourcePos pos;
  std::string message;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(SourcePos p, const std::string& msg)
      : std::runtime_error("line " + std::to_string(p.line) + ":" + std::to_string(p.col) + ": " + msg),
        pos(p) {}
  SourcePos pos;
};

// Raised by typing/encoding stages on inputs validation cannot accept.
class TranslateError : public std::runtime_error {
 public:
  explicit TranslateError(const std::string& msg) : std::runtime_error(msg) {}
};

enum class ExprOp {
  Ident,
  IntLit,
  EmptySet,
  SetLit,
  Maplet,
  Union,
  Inter,
  SetMinus,
  Dom,
  Ran,
  DomRes,
  DomSub,
  RanRes,
  RanSub,
  Prj1,
  Prj2,
  Id,
  RelType,
  TotalFn,
  PartialFn,
  TotalSurj,
  PartialSurj,
  TotalInj,
  Add,
  Sub,
  Mul,
  Div,
  Mod,
  Pow,
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  ExprOp op;
  std::string name;       // Ident
  long long value = 0;    // IntLit
  std::vector<ExprPtr> args;
  SourcePos pos;
};

bool is_unary(ExprOp op);   // Dom, Ran, Id, Prj1, Prj2
bool is_binary(ExprOp op);  // everything else except atoms and SetLit
bool is_type_constructor(ExprOp op);

// Arity-checked constructors; the parser builds trees only through these.
ExprPtr mk_ident(std::string name, SourcePos pos = {});
ExprPtr mk_int(long long v, SourcePos pos = {});
ExprPtr mk_empty_set(SourcePos pos = {});
ExprPtr mk_set_lit(std::vector<ExprPtr> elems, SourcePos pos = {});
ExprPtr mk_unary(ExprOp op, ExprPtr a, SourcePos pos = {});
ExprPtr mk_binary(ExprOp op, ExprPtr a, ExprPtr b, SourcePos pos = {});

enum class PredOp {
  In,
  NotIn,
  Eq,
  Neq,
  Subset,
  Lt,
  Le,
  Gt,
  Ge,
  And,
  Or,
  Not,
  Implies,
  Forall,
  Exists,
};

struct Pred;
using PredPtr = std::shared_ptr<const Pred>;

struct Pred {
  PredOp op;
  std::vector<ExprPtr> exprs;       // comparison operands (2)
  std::vector<PredPtr> preds;       // connective children / quantifier body
  std::vector<std::string> bound;   // quantifier variables
  SourcePos pos;
};

bool is_comparison(PredOp op);
bool is_quantifier(PredOp op);

PredPtr mk_compare(PredOp op, ExprPtr a, ExprPtr b, SourcePos pos = {});
PredPtr mk_not(PredPtr p, SourcePos pos = {});
PredPtr mk_connective(PredOp op, PredPtr a, PredPtr b, SourcePos pos = {});
PredPtr mk_quant(PredOp op, std::vector<std::string> vars, PredPtr body, SourcePos pos = {});

// Deterministic assignment `target := value`.
struct Action {
  std::string target;
  ExprPtr value;
  SourcePos pos;
};

struct EventParam {
  std::string name;
  ExprPtr type_expr;  // rhs of the introducing membership guard
  SourcePos pos;
};

struct Event {
  std::string name;
  std::vector<EventParam> params;  // derived from typing guards, in order of appearance
  std::vector<PredPtr> guards;     // non-introducing guards, declaration order
  std::vector<Action> actions;
  SourcePos pos;
};

struct EnumSet {
  std::string name;
  std::vector<std::string> members;
  std::vector<SourcePos> member_pos;  // parallel to members; may be empty for built trees
  SourcePos pos;
};

struct Context {
  std::string name;
  std::vector<std::string> carrier_sets;
  std::vector<EnumSet> enumerated_sets;
  std::vector<std::string> constants;
  std::vector<PredPtr> axioms;
  std::vector<SourcePos> carrier_pos;
  std::vector<SourcePos> constant_pos;
  SourcePos pos;
};

struct Machine {
  std::string name;
  std::optional<std::string> sees;
  std::vector<std::string> variables;
  std::vector<PredPtr> invariants;
  std::vector<Action> initialisation;
  std::vector<Event> events;
  std::vector<SourcePos> variable_pos;
  SourcePos pos;
};

bool expr_equal(const ExprPtr& a, const ExprPtr& b);
bool pred_equal(const PredPtr& a, const PredPtr& b);
bool machine_equal(const Machine& a, const Machine& b);
bool context_equal(const Context& a, const Context& b);

}  // namespace eb2alloy
