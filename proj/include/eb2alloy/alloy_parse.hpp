#pragma once

#include <string>

#include "eb2alloy/alloy_ast.hpp"
#include "eb2alloy/ast.hpp"

namespace eb2alloy {

// Minimal structural parser for the Alloy subset this backend emits.
// Used to check emitted text against the grammar and to compare modules
// tree-structurally, ignoring whitespace and comments.
AlloyModule parse_alloy_module(const std::string& text);

AlloyExprPtr parse_alloy_formula(const std::string& text);

// Parses a single top-level declaration (sig/fun/pred/fact/assert/check).
Decl parse_alloy_decl(const std::string& text);

}  // namespace eb2alloy
