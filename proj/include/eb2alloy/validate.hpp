#pragma once

#include <vector>

#include "eb2alloy/ast.hpp"

namespace eb2alloy {

// Well-formedness checks on parsed trees. Returns diagnostics ordered by
// source position; an empty list means the model may be translated.
// Expects event parameters to be bound (see bind_params).
std::vector<Diagnostic> validate(const Machine& machine, const Context* context);

}  // namespace eb2alloy
