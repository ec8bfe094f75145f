#pragma once

#include <vector>

#include "eb2alloy/alloy_ast.hpp"
#include "eb2alloy/ast.hpp"

namespace eb2alloy {

// Name resolution, top-level uniqueness and check-command bound coverage.
std::vector<Diagnostic> validate_module(const AlloyModule& m);

}  // namespace eb2alloy
