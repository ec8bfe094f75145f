#pragma once

#include <optional>
#include <string>
#include <vector>

#include "eb2alloy/ast.hpp"

namespace eb2alloy {

struct ParsedSource {
  std::vector<Context> contexts;
  std::vector<Machine> machines;
};

// Parses a whole .ebm source (any number of CONTEXT and MACHINE blocks).
// Event parameters are not yet derived; callers normally go through
// parse_machine / parse_machine_file instead.
ParsedSource parse_source(const std::string& text);

struct MachineWithContext {
  Machine machine;
  std::optional<Context> context;
};

// Derives event parameters from typing guards: the first membership guard on
// an identifier that is neither a machine variable nor a context name
// introduces it as a parameter. Idempotent.
void bind_params(Machine& machine, const Context* context);

// Parses a source containing exactly one machine (plus its context, if the
// SEES target is declared inline). Throws ParseError if the seen context is
// not present in the source.
MachineWithContext parse_machine(const std::string& text);

// Like parse_machine, but resolves a SEES target missing from the source by
// reading `<context>.ebm` or `<context>.ebc` next to the input file.
MachineWithContext parse_machine_file(const std::string& path);

ExprPtr parse_expression(const std::string& text);
PredPtr parse_predicate(const std::string& text);

}  // namespace eb2alloy
