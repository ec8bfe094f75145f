#pragma once

#include <map>
#include <string>
#include <vector>

#include "eb2alloy/alloy_ast.hpp"
#include "eb2alloy/ast.hpp"
#include "eb2alloy/value.hpp"

namespace eb2alloy {

class AlloyEvalError : public std::runtime_error {
 public:
  explicit AlloyEvalError(const std::string& msg) : std::runtime_error("alloy eval: " + msg) {}
};

// Finite-universe evaluator for the emitted Alloy subset: standard relational
// semantics, prelude functions unfolded by definition, integers wrapped
// two's-complement at the bit width. `atoms` is the non-integer universe;
// `env` binds free names to relations. A module may be supplied so that
// calls resolve to its functions and predicates.
class AlloyEvaluator {
 public:
  AlloyEvaluator(std::map<std::string, Relation> env, std::vector<Elem> atoms, int bitwidth,
                 const AlloyModule* module = nullptr);

  Relation eval(const AlloyExprPtr& e) const;
  bool eval_formula(const AlloyExprPtr& f) const;

 private:
  using Locals = std::map<std::string, Relation>;

  Relation eval_expr(const AlloyExprPtr& e, const Locals& locals) const;
  bool eval_form(const AlloyExprPtr& f, const Locals& locals) const;
  bool eval_body(const std::vector<AlloyExprPtr>& body, Locals& locals) const;
  Relation lookup(const std::string& name, const Locals& locals) const;
  Relation universe_rel() const;
  std::int64_t int_value(const Relation& r, const char* what) const;
  Relation call(const std::string& fn, std::vector<Relation> args, const Locals& locals) const;
  bool quant_loop(const std::vector<QuantDecl>& decls, std::size_t di, std::size_t ni, Locals& locals,
                  bool universal, const std::vector<AlloyExprPtr>& body) const;

  std::map<std::string, Relation> env_;
  std::vector<Elem> atoms_;
  int bitwidth_;
  const AlloyModule* module_;
};

// Convenience wrapper: evaluates one expression.
Relation eval_alloy_expr(const AlloyExprPtr& e, const std::map<std::string, Relation>& env,
                         const std::vector<Elem>& atoms, int bitwidth,
                         const AlloyModule* module = nullptr);

bool eval_alloy_formula(const AlloyExprPtr& f, const std::map<std::string, Relation>& env,
                        const std::vector<Elem>& atoms, int bitwidth,
                        const AlloyModule* module = nullptr);

}  // namespace eb2alloy
