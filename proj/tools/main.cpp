#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "eb2alloy/alloy_printer.hpp"
#include "eb2alloy/alloy_validate.hpp"
#include "eb2alloy/checker.hpp"
#include "eb2alloy/encoder.hpp"
#include "eb2alloy/parser.hpp"
#include "eb2alloy/printer.hpp"
#include "eb2alloy/typing.hpp"
#include "eb2alloy/validate.hpp"

namespace {

// exit statuses: 0 ok / no violation, 1 error, 2 violation found, 3 budget exceeded
constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kViolation = 2;
constexpr int kBudget = 3;

std::map<std::string, int> parse_scopes(const std::vector<std::string>& raw) {
  std::map<std::string, int> scopes;
  for (const std::string& s : raw) {
    auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 >= s.size())
      throw std::runtime_error("bad --scope '" + s + "', expected NAME=COUNT");
    std::string name = s.substr(0, eq);
    int count = std::stoi(s.substr(eq + 1));
    if (count < 1) throw std::runtime_error("scope for '" + name + "' must be positive");
    scopes[name] = count;
  }
  return scopes;
}

struct LoadedMachine {
  eb2alloy::Machine machine;
  std::optional<eb2alloy::Context> context;
};

LoadedMachine load_and_validate(const std::string& path) {
  auto parsed = eb2alloy::parse_machine_file(path);
  const eb2alloy::Context* ctx = parsed.context ? &*parsed.context : nullptr;
  auto diags = eb2alloy::validate(parsed.machine, ctx);
  if (!diags.empty()) {
    for (const auto& d : diags)
      std::cerr << path << ":" << d.pos.line << ":" << d.pos.col << ": " << d.message << "\n";
    throw std::runtime_error(std::to_string(diags.size()) + " validation error(s)");
  }
  return {std::move(parsed.machine), std::move(parsed.context)};
}

int run_translate(const std::string& input, std::string output, int states, int bitwidth,
                  const std::vector<std::string>& raw_scopes, const std::string& assert_name) {
  LoadedMachine loaded = load_and_validate(input);
  const eb2alloy::Context* ctx = loaded.context ? &*loaded.context : nullptr;
  eb2alloy::TypeEnv types = eb2alloy::infer_types(loaded.machine, ctx);

  eb2alloy::EncodeOptions options;
  options.num_states = states;
  options.bitwidth = bitwidth;
  options.scopes = parse_scopes(raw_scopes);
  options.assert_name = assert_name;

  eb2alloy::EncodeResult result = eb2alloy::encode(loaded.machine, ctx, types, options);
  for (const std::string& w : result.warnings) std::cerr << "warning: " << w << "\n";
  auto diags = eb2alloy::validate_module(result.module);
  for (const auto& d : diags) std::cerr << "internal: " << d.message << "\n";
  if (!diags.empty()) return kError;

  std::string text = eb2alloy::print_module(result.module);
  if (output.empty())
    output = std::filesystem::path(input).stem().string() + ".als";
  std::ofstream out(output, std::ios::binary);
  if (!out) {
    std::cerr << "cannot write " << output << "\n";
    return kError;
  }
  out << text;

  const auto* check = result.module.checks().front();
  std::cout << "wrote " << output << "\n"
            << "sigs: " << result.module.sigs().size()
            << ", preds: " << result.module.preds().size()
            << ", facts: " << result.module.facts().size() << "\n"
            << "check " << check->assert_name << " for";
  for (const auto& [name, count] : check->exact_bounds)
    std::cout << " " << count << " " << name;
  std::cout << ", " << check->bitwidth << " int\n";
  return kOk;
}

int run_check(const std::string& input, int depth, int bitwidth,
              const std::vector<std::string>& raw_scopes, const std::string& format,
              std::size_t node_budget) {
  LoadedMachine loaded = load_and_validate(input);
  const eb2alloy::Context* ctx = loaded.context ? &*loaded.context : nullptr;
  eb2alloy::TypeEnv types = eb2alloy::infer_types(loaded.machine, ctx);

  eb2alloy::Scope scope;
  scope.carrier_counts = parse_scopes(raw_scopes);
  scope.depth = depth;
  scope.bitwidth = bitwidth;
  scope.node_budget = node_budget;

  eb2alloy::Verdict verdict;
  try {
    verdict = eb2alloy::check(loaded.machine, ctx, types, scope);
  } catch (const eb2alloy::ResourceError& e) {
    std::cerr << e.what() << "\n";
    return kBudget;
  }
  eb2alloy::TraceFormat tf =
      format == "structured" ? eb2alloy::TraceFormat::Structured : eb2alloy::TraceFormat::Text;
  std::cout << eb2alloy::format_trace(loaded.machine, scope, verdict, tf);
  return verdict.kind == eb2alloy::Verdict::Kind::Violation ? kViolation : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Event-B to Alloy translator with a bounded explicit-state checker"};
  app.require_subcommand(1);

  std::string input, output, assert_name, trace_format = "text";
  int states = 6, bitwidth = 4, depth = 6;
  std::size_t node_budget = 1000000;
  std::vector<std::string> scopes;

  CLI::App* translate = app.add_subcommand("translate", "translate a .ebm machine to an Alloy model");
  translate->add_option("input", input, "machine file (.ebm)")->required();
  translate->add_option("-o,--output", output, "output .als path (default: <input>.als)");
  translate->add_option("--states", states, "number of State atoms (trace length)")->required();
  translate->add_option("--scope", scopes, "exact carrier-set scope NAME=COUNT (repeatable)");
  translate->add_option("--bitwidth", bitwidth, "integer bit width (default 4)");
  translate->add_option("--assert", assert_name, "assertion name (default <Machine>Invariants)");

  CLI::App* check = app.add_subcommand("check", "run the bounded explicit-state checker");
  check->add_option("input", input, "machine file (.ebm)")->required();
  check->add_option("--depth", depth, "max transitions to explore")->required();
  check->add_option("--scope", scopes, "carrier-set scope NAME=COUNT (repeatable)");
  check->add_option("--bitwidth", bitwidth, "integer bit width (default 4)");
  check->add_option("--trace-format", trace_format, "text|structured")
      ->check(CLI::IsMember({"text", "structured"}));
  check->add_option("--node-budget", node_budget, "max distinct states (default 10^6)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (translate->parsed())
      return run_translate(input, output, states, bitwidth, scopes, assert_name);
    return run_check(input, depth, bitwidth, scopes, trace_format, node_budget);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
}
