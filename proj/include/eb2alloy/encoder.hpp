#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "eb2alloy/alloy_ast.hpp"
#include "eb2alloy/ast.hpp"
#include "eb2alloy/typing.hpp"

namespace eb2alloy {

struct EncodeOptions {
  int num_states = 6;  // >= 2: initial state plus at least one transition
  int bitwidth = 4;    // >= 1
  std::map<std::string, int> scopes;  // carrier set -> exact atom count
  std::string assert_name;            // empty: "<Machine>Invariants"
};

// Name environment threaded through expression/predicate encoding.
struct EncodeContext {
  std::string current_state = "s";
  std::string next_state = "s'";
  std::map<std::string, AlloyExprPtr> var_paths;  // variable -> field path under current state
  std::set<std::string> locals;                   // event params and bound variables
  std::set<std::string> atom_names;               // carrier/enum sets, members, constants
  const TypeEnv* types = nullptr;
  int bitwidth = 4;
};

EncodeContext make_encode_context(const Machine& machine, const Context* context,
                                  const TypeEnv& types, const std::string& state_var,
                                  int bitwidth);

enum class ArityHint { Unknown, Scalar, Relational };

AlloyExprPtr encode_expr(const ExprPtr& e, const EncodeContext& ctx, ArityHint hint = ArityHint::Unknown);
AlloyExprPtr encode_pred(const PredPtr& p, const EncodeContext& ctx);

std::vector<SigDecl> encode_events_enum(const std::vector<Event>& events);
SigDecl encode_state_sig(const Machine& machine,
                         const std::map<std::string, std::string>& field_types);
FactDecl encode_init(const Machine& machine, const EncodeContext& init_ctx);
PredDecl encode_event(const Event& event, const Machine& machine, const EncodeContext& ctx);
FactDecl encode_trigger(const std::vector<Event>& events);
AssertDecl encode_invariants(const Machine& machine, const TypeEnv& types, const EncodeContext& ctx,
                             const std::string& assert_name, std::vector<std::string>* warnings);
CheckCmd emit_check(const EncodeOptions& options, const std::vector<std::string>& carrier_sets,
                    const std::vector<std::string>& aux_sigs, const std::string& assert_name);

// Facts constraining an auxiliary signature's field to its function class.
FactDecl class_fact_decl(const SigSpec& spec);

struct EncodeResult {
  AlloyModule module;
  std::vector<std::string> warnings;
};

// Full translation per the model-structure encoding: prelude, carrier and
// enumerated sets, Events enumeration, auxiliary signatures, State, Initial
// fact, event predicates, trigger fact, invariant assertion, check command.
EncodeResult encode(const Machine& machine, const Context* context, const TypeEnv& types,
                    const EncodeOptions& options);

// Counts how often each State field is constrained by an equation on the
// next state inside a generated event predicate (frame-completeness probe).
std::map<std::string, int> count_field_constraints(const PredDecl& pred,
                                                   const std::vector<std::string>& state_fields);

}  // namespace eb2alloy
