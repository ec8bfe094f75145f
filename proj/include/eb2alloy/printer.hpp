#pragma once

#include <string>

#include "eb2alloy/ast.hpp"

namespace eb2alloy {

// Canonical .ebm surface form; re-parsing the result yields a structurally
// identical tree. Event parameters print back as their typing guards.
std::string print_expr(const ExprPtr& e);
std::string print_pred(const PredPtr& p);
std::string print_context(const Context& ctx);
std::string print_machine(const Machine& m);

}  // namespace eb2alloy
