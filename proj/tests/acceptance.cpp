// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion enforces its own runtime budget.

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>
#include <vector>

#include "differential_util.hpp"
#include "eb2alloy/alloy_parse.hpp"
#include "eb2alloy/alloy_printer.hpp"
#include "eb2alloy/alloy_validate.hpp"
#include "eb2alloy/checker.hpp"
#include "eb2alloy/encoder.hpp"
#include "eb2alloy/parser.hpp"
#include "eb2alloy/printer.hpp"
#include "eb2alloy/typing.hpp"
#include "eb2alloy/validate.hpp"
#include "test_util.hpp"

using namespace eb2alloy;

namespace {

struct Failure : std::runtime_error {
  explicit Failure(const std::string& msg) : std::runtime_error(msg) {}
};

void require(bool cond, const std::string& msg) {
  if (!cond) throw Failure(msg);
}

struct LoadedMachine {
  Machine machine;
  std::optional<Context> context;
  TypeEnv types;
  const Context* ctx() const { return context ? &*context : nullptr; }
};

LoadedMachine load(const std::string& file) {
  auto parsed = testutil::load_corpus(file);
  LoadedMachine out;
  out.machine = std::move(parsed.machine);
  out.context = std::move(parsed.context);
  require(validate(out.machine, out.ctx()).empty(), file + " failed validation");
  out.types = infer_types(out.machine, out.ctx());
  return out;
}

AlloyModule encode_mutex_module() {
  LoadedMachine mutex = load("mutex.ebm");
  EncodeOptions options;
  options.num_states = 6;
  options.bitwidth = 4;
  options.scopes = {{"Process", 2}, {"Mutex", 2}};
  options.assert_name = "NoDeadlock";
  return encode(mutex.machine, mutex.ctx(), mutex.types, options).module;
}

// ---- criterion 1: golden encoding of the worked example -------------------

void criterion_golden_encoding() {
  AlloyModule mod = encode_mutex_module();
  require(validate_module(mod).empty(), "generated module has validation diagnostics");

  // whitespace-insensitive: compare the reparse of the printed text
  AlloyModule back = parse_alloy_module(print_module(mod));

  std::set<std::string> sig_names;
  for (const SigDecl* s : back.sigs())
    for (const auto& n : s->names) sig_names.insert(n);
  std::set<std::string> expected_sigs = {"Process", "Mutex", "Events", "Undef", "HoldOnMutexE",
                                         "WaitOnMutexE", "ReleaseMutexE", "HoldsRel", "WaitsRel",
                                         "State"};
  require(sig_names == expected_sigs, "signature set differs from the documented encoding");

  auto expect_sig = [&](const char* text) {
    Decl d = parse_alloy_decl(text);
    const SigDecl& want = std::get<SigDecl>(d);
    const SigDecl* got = back.find_sig(want.names.front());
    require(got != nullptr, std::string("missing sig ") + want.names.front());
    require(sig_equal(*got, want), std::string("sig mismatch: ") + text);
  };
  expect_sig("sig Process {}");
  expect_sig("sig Mutex {}");
  expect_sig("abstract sig Events {}");
  expect_sig("one sig Undef, HoldOnMutexE, WaitOnMutexE, ReleaseMutexE extends Events {}");
  expect_sig("sig HoldsRel { rel : Process -> Mutex }");
  expect_sig("sig WaitsRel { rel : Process -> Mutex }");
  expect_sig("sig State { Holds : HoldsRel, Waits : WaitsRel, Ev : Events }");

  const FactDecl* init = nullptr;
  const FactDecl* trigger = nullptr;
  for (const FactDecl* f : back.facts()) {
    if (f->name == "Initial") init = f;
    if (f->name == "EventTrigger") trigger = f;
  }
  require(init && trigger, "Initial or EventTrigger fact missing");
  Decl want_init = parse_alloy_decl(
      "fact Initial { let s0 = ord/first { s0.Holds.rel = none -> none "
      "s0.Waits.rel = none -> none s0.Ev = Undef } }");
  require(fact_equal(*init, std::get<FactDecl>(want_init)), "Initial fact differs");
  Decl want_trigger = parse_alloy_decl(
      "fact EventTrigger { all s : State - ord/last { let s' = ord/next[s] { "
      "HoldOnMutex[s, s'] or WaitOnMutex[s, s'] or ReleaseMutex[s, s'] } } }");
  require(fact_equal(*trigger, std::get<FactDecl>(want_trigger)), "EventTrigger fact differs");

  auto expect_pred = [&](const char* name, const char* text) {
    const PredDecl* got = back.find_pred(name);
    require(got != nullptr, std::string("missing pred ") + name);
    Decl d = parse_alloy_decl(text);
    require(pred_decl_equal(*got, std::get<PredDecl>(d)), std::string("pred mismatch: ") + name);
  };
  expect_pred("HoldOnMutex",
              "pred HoldOnMutex[s, s' : State] { some p : Process, m : Mutex {"
              " !(p in dom[s.Waits.rel])"
              " !(m in ran[s.Holds.rel])"
              " s'.Holds.rel = s.Holds.rel + (p -> m)"
              " s'.Waits = s.Waits"
              " s'.Ev = HoldOnMutexE } }");
  expect_pred("WaitOnMutex",
              "pred WaitOnMutex[s, s' : State] { some p : Process, m : Mutex {"
              " !(p in dom[s.Waits.rel])"
              " m in ran[(dom[s.Holds.rel] - p) <: s.Holds.rel]"
              " s'.Waits.rel = s.Waits.rel + (p -> m)"
              " s'.Holds = s.Holds"
              " s'.Ev = WaitOnMutexE } }");
  expect_pred("ReleaseMutex",
              "pred ReleaseMutex[s, s' : State] { some p : Process, m : Mutex {"
              " !(p in dom[s.Waits.rel])"
              " m in ran[p <: s.Holds.rel]"
              " s'.Holds.rel = s.Holds.rel - (p -> m)"
              " s'.Waits = s.Waits"
              " s'.Ev = ReleaseMutexE } }");

  require(back.asserts().size() == 1, "expected one assertion");
  Decl want_assert =
      parse_alloy_decl("assert NoDeadlock { all s : State | !(dom[s.Waits.rel] = Process) }");
  require(assert_equal(*back.asserts()[0], std::get<AssertDecl>(want_assert)),
          "NoDeadlock assertion differs");

  require(back.checks().size() == 1, "expected one check command");
  const CheckCmd& cmd = *back.checks()[0];
  std::vector<std::pair<std::string, int>> want_bounds = {
      {"State", 6}, {"Process", 2}, {"Mutex", 2}, {"HoldsRel", 6}, {"WaitsRel", 6}};
  require(cmd.assert_name == "NoDeadlock" && cmd.exact_bounds == want_bounds && cmd.bitwidth == 4,
          "check command bounds differ");
}

// ---- criterion 2: the paper-level model-checking result -------------------

void criterion_checker_result() {
  LoadedMachine mutex = load("mutex.ebm");
  Scope scope;
  scope.carrier_counts = {{"Process", 2}, {"Mutex", 2}};
  scope.depth = 6;
  Verdict v = check(mutex.machine, mutex.ctx(), mutex.types, scope);
  require(v.kind == Verdict::Kind::Violation, "expected a deadlock within depth 6");
  require(v.invariant_index == 2, "expected violation of dom(Waits) /= Process");
  require(v.depth == 4, "BFS-minimal violation depth must be 4 transitions, got " +
                            std::to_string(v.depth));
  require(v.states_explored < 10000,
          "explored " + std::to_string(v.states_explored) + " states (limit 10^4)");

  Scope shallow = scope;
  shallow.depth = 3;
  Verdict v3 = check(mutex.machine, mutex.ctx(), mutex.types, shallow);
  require(v3.kind == Verdict::Kind::NoViolationWithinDepth, "depth-3 run must be clean");
}

// ---- criterion 3: differential encoder semantics ---------------------------

void criterion_differential() {
  testutil::DiffGen gen(0x5eed5eed);
  int compared = 0;
  int attempts = 0;
  while (compared < 1000) {
    require(++attempts < 5000, "generator failed to produce enough evaluable expressions");
    testutil::DiffCase c = gen.make_case();
    Relation eventb;
    try {
      eventb = eval_eventb_expr(c.expr, c.env, c.universe, 4);
    } catch (const EvalError&) {
      continue;
    }
    Relation alloy = eval_alloy_expr(encode_expr(c.expr, c.ctx), c.env, c.atoms, 4);
    require(eventb == alloy, "semantics diverge on: " + print_expr(c.expr) + "\n  event-b: " +
                                 relation_to_string(eventb) + "\n  alloy:   " +
                                 relation_to_string(alloy));
    ++compared;
  }
}

// ---- criterion 4: power expansion ------------------------------------------

void criterion_power() {
  EncodeContext ctx;
  ctx.bitwidth = 4;
  ctx.locals = {"a", "b"};
  AlloyExprPtr chain = encode_expr(parse_expression("a ^ b"), ctx);
  for (long long a = 0; a <= 7; ++a) {
    for (long long b = 0; b <= 7; ++b) {
      long long want = 1;
      bool fits = true;
      for (long long i = 0; i < b && fits; ++i) {
        want *= a;
        if (want >= 8) fits = false;
      }
      if (!fits) continue;
      std::map<std::string, Relation> env;
      env["a"] = singleton(Elem{a});
      env["b"] = singleton(Elem{b});
      Relation got = eval_alloy_expr(chain, env, {}, 4);
      require(got == singleton(Elem{want}), "a^b wrong for a=" + std::to_string(a) +
                                                " b=" + std::to_string(b));
    }
  }
}

// ---- criterion 5: frame completeness over the corpus -----------------------

void criterion_frames() {
  int machines = 0;
  for (const auto& entry : testutil::corpus()) {
    LoadedMachine l = load(entry.file);
    EncodeOptions options;
    options.num_states = 6;
    options.scopes = entry.scopes;
    AlloyModule mod = encode(l.machine, l.ctx(), l.types, options).module;
    std::vector<std::string> fields = l.machine.variables;
    fields.push_back("Ev");
    for (const Event& ev : l.machine.events) {
      const PredDecl* pred = mod.find_pred(ev.name);
      require(pred != nullptr, entry.file + ": missing predicate " + ev.name);
      for (const auto& [field, n] : count_field_constraints(*pred, fields)) {
        require(n == 1, entry.file + ": event " + ev.name + " constrains field " + field + " " +
                            std::to_string(n) + " times");
      }
    }
    ++machines;
  }
  require(machines >= 10, "corpus must contain at least 10 machines");
}

// ---- criterion 6: trace soundness -------------------------------------------

void criterion_trace_soundness() {
  int violations_checked = 0;
  for (const auto& entry : testutil::corpus()) {
    if (!entry.checker_runs) continue;
    LoadedMachine l = load(entry.file);
    Scope scope;
    scope.carrier_counts = entry.scopes;
    scope.depth = 6;
    Verdict v = check(l.machine, l.ctx(), l.types, scope);
    if (v.kind != Verdict::Kind::Violation) continue;
    ++violations_checked;

    CheckerUniverse universe = build_universe(l.ctx(), scope);

    // replay step by step through successors
    for (std::size_t i = 1; i < v.trace.size(); ++i) {
      auto succs = successors(v.trace[i - 1].state, l.machine, l.ctx(), l.types, scope);
      bool found = false;
      for (const auto& s : succs)
        found = found || (s.event == v.trace[i].event && s.params == v.trace[i].params &&
                          s.state == v.trace[i].state);
      require(found, entry.file + ": trace step " + std::to_string(i) + " does not replay");
    }
    Env final_env(v.trace.back().state.vars.begin(), v.trace.back().state.vars.end());
    require(!eval_eventb_pred(l.machine.invariants[v.invariant_index], final_env, universe,
                              scope.bitwidth),
            entry.file + ": final state does not falsify the cited invariant");

    // consecutive pairs satisfy the generated event predicates
    EncodeOptions options;
    options.num_states = static_cast<int>(v.trace.size());
    options.scopes = entry.scopes;
    AlloyModule mod = encode(l.machine, l.ctx(), l.types, options).module;
    std::vector<ConcreteState> states;
    std::vector<std::string> step_events;
    for (const TraceStep& step : v.trace) {
      states.push_back(step.state);
      step_events.push_back(step.event);
    }
    testutil::TraceModel model =
        testutil::build_trace_model(l.machine, l.ctx(), l.types, universe, states, step_events);
    for (std::size_t i = 1; i < states.size(); ++i) {
      bool holds = eval_alloy_formula(
          a_call(step_events[i],
                 {a_name(model.state_atoms[i - 1]), a_name(model.state_atoms[i])}),
          model.env, model.atoms, scope.bitwidth, &mod);
      require(holds, entry.file + ": generated predicate rejects trace step " + std::to_string(i));
      // no other event explains the same transition
      for (const Event& other : l.machine.events) {
        if (other.name == step_events[i]) continue;
        bool wrong = eval_alloy_formula(
            a_call(other.name,
                   {a_name(model.state_atoms[i - 1]), a_name(model.state_atoms[i])}),
            model.env, model.atoms, scope.bitwidth, &mod);
        require(!wrong, entry.file + ": predicate " + other.name + " wrongly accepts step " +
                            std::to_string(i));
      }
    }
    const FactDecl* trig = mod.find_fact("EventTrigger");
    for (const auto& f : trig->body)
      require(eval_alloy_formula(f, model.env, model.atoms, scope.bitwidth, &mod),
              entry.file + ": trigger fact rejects the trace");
  }
  require(violations_checked >= 3, "expected at least three violating machines in the corpus");
}

// ---- criterion 7: round-trip parsing ----------------------------------------

void criterion_round_trip() {
  for (const auto& entry : testutil::corpus()) {
    auto first = testutil::load_corpus(entry.file);
    std::string printed;
    if (first.context) printed += print_context(*first.context) + "\n";
    printed += print_machine(first.machine);
    auto second = parse_machine(printed);
    require(machine_equal(first.machine, second.machine), entry.file + ": machine round-trip differs");
    require(first.context.has_value() == second.context.has_value(),
            entry.file + ": context presence differs");
    if (first.context)
      require(context_equal(*first.context, *second.context), entry.file + ": context differs");
    std::string reprinted;
    if (second.context) reprinted += print_context(*second.context) + "\n";
    reprinted += print_machine(second.machine);
    require(printed == reprinted, entry.file + ": printing is not a fixpoint");
  }
}

}  // namespace

int main() {
  struct Criterion {
    std::string name;
    std::function<void()> body;
    long long budget_ms;
  };
  const std::vector<Criterion> criteria = {
      {"1 golden mutex encoding (Tables 2-6, check bounds)", criterion_golden_encoding, 1000},
      {"2 deadlock found at depth 6, minimal depth 4, depth 3 clean", criterion_checker_result, 1000},
      {"3 differential semantics on 1000 random expressions", criterion_differential, 30000},
      {"4 power chain equals exponentiation at bitwidth 4", criterion_power, 30000},
      {"5 frame completeness across the corpus", criterion_frames, 30000},
      {"6 trace soundness and generated-predicate agreement", criterion_trace_soundness, 30000},
      {"7 parse-print-parse fixpoint across the corpus", criterion_round_trip, 30000},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    std::string error;
    try {
      c.body();
    } catch (const std::exception& e) {
      error = e.what();
    }
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - start)
                  .count();
    bool ok = error.empty() && ms <= c.budget_ms;
    if (!ok) ++failures;
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << "criterion " << c.name << " (" << ms << " ms)"
              << std::endl;
    if (!error.empty()) std::cout << "       " << error << std::endl;
    if (error.empty() && ms > c.budget_ms)
      std::cout << "       exceeded budget of " << c.budget_ms << " ms" << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
