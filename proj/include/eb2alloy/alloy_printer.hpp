#pragma once

#include <string>

#include "eb2alloy/alloy_ast.hpp"

namespace eb2alloy {

// Deterministic Alloy text: 2-space indent, LF endings, minimal parentheses
// per Alloy 4 precedence. Identical modules print byte-identically.
std::string print_alloy_expr(const AlloyExprPtr& e);
std::string print_module(const AlloyModule& m);

}  // namespace eb2alloy
