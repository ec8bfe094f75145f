#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "eb2alloy/ast.hpp"
#include "eb2alloy/typing.hpp"
#include "eb2alloy/value.hpp"

namespace eb2alloy {

class EvalError : public std::runtime_error {
 public:
  explicit EvalError(const std::string& msg) : std::runtime_error("eval: " + msg) {}
};

// State-space budget exhausted; distinct from a verdict.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& msg) : std::runtime_error(msg) {}
};

struct Scope {
  std::map<std::string, int> carrier_counts;  // carrier set -> atom count (>= 1)
  int depth = 6;                              // max transitions
  int bitwidth = 4;
  std::size_t node_budget = 1000000;
};

// Finite atom universe: carrier sets get atoms `<Set>0..<Set>k-1`,
// enumerated sets contribute their members.
struct CheckerUniverse {
  std::vector<std::pair<std::string, std::vector<Elem>>> sets;
  int bitwidth = 4;

  const std::vector<Elem>* find(const std::string& name) const;
  std::vector<Elem> all_atoms() const;
};

CheckerUniverse build_universe(const Context* context, const Scope& scope);

using Env = std::map<std::string, Relation>;

// Set-theoretic evaluation of the Event-B operator subset; scalars are
// singleton relations, integers wrap two's-complement at the bit width.
Relation eval_eventb_expr(const ExprPtr& e, const Env& env, const CheckerUniverse& universe,
                          int bitwidth);
bool eval_eventb_pred(const PredPtr& p, const Env& env, const CheckerUniverse& universe,
                      int bitwidth);

struct ConcreteState {
  std::map<std::string, Relation> vars;
  bool operator==(const ConcreteState& o) const { return vars == o.vars; }
  bool operator<(const ConcreteState& o) const { return vars < o.vars; }
};

struct TraceStep {
  std::string event;  // "Undef" for the initial state
  std::vector<std::pair<std::string, Elem>> params;
  ConcreteState state;
};

using Trace = std::vector<TraceStep>;

struct Successor {
  std::string event;
  std::vector<std::pair<std::string, Elem>> params;
  ConcreteState state;
};

struct Verdict {
  enum class Kind { NoViolationWithinDepth, Violation };
  Kind kind = Kind::NoViolationWithinDepth;
  int depth = 0;                    // searched depth / violation depth
  Trace trace;                      // Violation only
  std::size_t invariant_index = 0;  // Violation only
  std::size_t states_explored = 0;
};

// Evaluates the initialisation in the empty variable environment.
ConcreteState initial_state(const Machine& machine, const Context* context, const Scope& scope);

// All enabled (event, binding, next-state) triples, in event declaration
// order then lexicographic binding order; the frame rule copies unassigned
// variables.
std::vector<Successor> successors(const ConcreteState& state, const Machine& machine,
                                  const Context* context, const TypeEnv& types, const Scope& scope);

// Breadth-first bounded search; returns the shallowest violation with its
// trace, or NoViolationWithinDepth. Throws ResourceError past the budget.
Verdict check(const Machine& machine, const Context* context, const TypeEnv& types,
              const Scope& scope);

enum class TraceFormat { Text, Structured };

std::string format_trace(const Machine& machine, const Scope& scope, const Verdict& verdict,
                         TraceFormat format);

}  // namespace eb2alloy
