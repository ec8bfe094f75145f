#include "doctest.h"

#include <functional>

#include "eb2alloy/parser.hpp"
#include "eb2alloy/typing.hpp"
#include "test_util.hpp"

using namespace eb2alloy;

TEST_CASE("infer_types on the mutex machine") {
  auto parsed = testutil::load_corpus("mutex.ebm");
  TypeEnv env = infer_types(parsed.machine, &*parsed.context);
  REQUIRE(env.types.count("Holds"));
  REQUIRE(env.types.count("Waits"));
  const TypeTermPtr& t = env.types.at("Holds");
  REQUIRE(t->kind == TypeTerm::Kind::Rel);
  CHECK(t->fn_class == FnClass::Relation);
  CHECK(t->left->set_name == "Process");
  CHECK(t->right->set_name == "Mutex");
  CHECK(env.typing_invariant.at("Holds") == 0);
  CHECK(env.typing_invariant.at("Waits") == 1);
}

TEST_CASE("scalar typing and missing typing invariant") {
  auto scalar = parse_machine(
      "CONTEXT C\n  SETS Process\nEND\nMACHINE M\n  SEES C\n  VARIABLES v w\n"
      "  INVARIANTS\n    v : Process\n    w : INT\n  INITIALISATION\n    v := v\n    w := 0\nEND\n");
  TypeEnv env = infer_types(scalar.machine, &*scalar.context);
  CHECK(env.types.at("v")->kind == TypeTerm::Kind::Given);
  CHECK(env.types.at("v")->set_name == "Process");
  CHECK(env.types.at("w")->kind == TypeTerm::Kind::Integer);

  auto untyped = parse_machine(
      "CONTEXT C\n  SETS Process\nEND\nMACHINE M\n  SEES C\n  VARIABLES Waits\n"
      "  INVARIANTS\n    Waits <: Process\n  INITIALISATION\n    Waits := {}\nEND\n");
  CHECK_THROWS_WITH_AS(infer_types(untyped.machine, &*untyped.context),
                       doctest::Contains("Waits"), TranslateError);
}

TEST_CASE("non-type membership right-hand side is not a typing invariant") {
  auto parsed = parse_machine(
      "CONTEXT C\n  SETS S\nEND\nMACHINE M\n  SEES C\n  VARIABLES a b\n"
      "  INVARIANTS\n    a : S <-> S\n    b : dom(a)\n    b : S\n  INITIALISATION\n"
      "    a := {}\n    b := b\nEND\n");
  TypeEnv env = infer_types(parsed.machine, &*parsed.context);
  // the first pure-type membership wins; `b : dom(a)` is a plain invariant
  CHECK(env.typing_invariant.at("b") == 2);
}

TEST_CASE("flatten_type follows the worked examples") {
  SUBCASE("flat relation") {
    FlattenResult flat = flatten_type(
        type_rel(type_given("Process"), type_given("Mutex"), FnClass::Relation), "Holds");
    REQUIRE(flat.sigs.size() == 1);
    CHECK(flat.sigs[0].name == "HoldsRel");
    CHECK(flat.sigs[0].field_name == "rel");
    CHECK(flat.sigs[0].left == "Process");
    CHECK(flat.sigs[0].right == "Mutex");
    CHECK(flat.sigs[0].side_facts.empty());
    CHECK(flat.state_field_type == "HoldsRel");
  }
  SUBCASE("nested: (A --> B) <-> C") {
    auto nested = type_rel(type_rel(type_given("A"), type_given("B"), FnClass::TotalFn),
                           type_given("C"), FnClass::Relation);
    FlattenResult flat = flatten_type(nested, "F");
    REQUIRE(flat.sigs.size() == 2);
    CHECK(flat.sigs[0].name == "FRel0");
    CHECK(flat.sigs[0].left == "A");
    CHECK(flat.sigs[0].right == "B");
    CHECK(flat.sigs[0].side_facts ==
          std::vector<ClassFact>{ClassFact::Functional, ClassFact::Total});
    CHECK(flat.sigs[1].name == "FRel");
    CHECK(flat.sigs[1].left == "FRel0");
    CHECK(flat.sigs[1].right == "C");
    CHECK(flat.sigs[1].side_facts.empty());
    CHECK(flat.state_field_type == "FRel");
  }
  SUBCASE("scalar needs no signatures") {
    FlattenResult flat = flatten_type(type_given("Process"), "v");
    CHECK(flat.sigs.empty());
    CHECK(flat.state_field_type == "Process");
    CHECK(flatten_type(type_int(), "n").state_field_type == "Int");
  }
  SUBCASE("one SigSpec per Rel constructor, unique names") {
    auto deep = type_rel(type_rel(type_given("A"), type_given("B"), FnClass::PartialFn),
                         type_rel(type_given("C"), type_given("D"), FnClass::TotalInj),
                         FnClass::PartialSurj);
    FlattenResult flat = flatten_type(deep, "G");
    REQUIRE(flat.sigs.size() == 3);
    CHECK(flat.sigs[0].name == "GRel0");
    CHECK(flat.sigs[1].name == "GRel1");
    CHECK(flat.sigs[2].name == "GRel");
    CHECK(flat.sigs[2].left == "GRel0");
    CHECK(flat.sigs[2].right == "GRel1");
  }
}

namespace {

// independent set-theoretic definitions used as the differential oracle
bool brute_total_fn(const Relation& r, const std::vector<Elem>& dom, const std::vector<Elem>& ran) {
  for (const Tuple& t : r) {
    if (t.size() != 2) return false;
    bool okd = false, okr = false;
    for (const Elem& d : dom) okd = okd || d == t[0];
    for (const Elem& e : ran) okr = okr || e == t[1];
    if (!okd || !okr) return false;
  }
  for (const Elem& d : dom) {
    int n = 0;
    for (const Tuple& t : r)
      if (t[0] == d) ++n;
    if (n != 1) return false;
  }
  return true;
}

bool brute_functional(const Relation& r) {
  for (const Tuple& a : r)
    for (const Tuple& b : r)
      if (a[0] == b[0] && a[1] != b[1]) return false;
  return true;
}

bool brute_surjective(const Relation& r, const std::vector<Elem>& ran) {
  for (const Elem& e : ran) {
    bool hit = false;
    for (const Tuple& t : r) hit = hit || t[1] == e;
    if (!hit) return false;
  }
  return true;
}

bool brute_injective(const Relation& r) {
  for (const Tuple& a : r)
    for (const Tuple& b : r)
      if (a[1] == b[1] && a[0] != b[0]) return false;
  return true;
}

bool brute_total(const Relation& r, const std::vector<Elem>& dom) {
  for (const Elem& d : dom) {
    bool hit = false;
    for (const Tuple& t : r) hit = hit || t[0] == d;
    if (!hit) return false;
  }
  return true;
}

bool brute_subset(const Relation& r, const std::vector<Elem>& dom, const std::vector<Elem>& ran) {
  for (const Tuple& t : r) {
    if (t.size() != 2) return false;
    bool okd = false, okr = false;
    for (const Elem& d : dom) okd = okd || d == t[0];
    for (const Elem& e : ran) okr = okr || e == t[1];
    if (!okd || !okr) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("satisfies_class agrees with direct definitions on every relation over small universes") {
  const std::vector<Elem> dom = {Elem{std::string("a0")}, Elem{std::string("a1")}};
  const std::vector<Elem> ran = {Elem{std::string("b0")}, Elem{std::string("b1")},
                                 Elem{std::string("b2")}};
  Relation dom_rel, ran_rel;
  for (const Elem& d : dom) dom_rel.insert({d});
  for (const Elem& e : ran) ran_rel.insert({e});

  std::vector<Tuple> pairs;
  for (const Elem& d : dom)
    for (const Elem& e : ran) pairs.push_back({d, e});

  // exhaustive: all 2^6 relations over a 2x3 universe
  for (unsigned mask = 0; mask < (1u << pairs.size()); ++mask) {
    Relation r;
    for (std::size_t i = 0; i < pairs.size(); ++i)
      if (mask & (1u << i)) r.insert(pairs[i]);

    bool sub = brute_subset(r, dom, ran);
    CHECK(satisfies_class(r, dom_rel, ran_rel, FnClass::Relation) == sub);
    CHECK(satisfies_class(r, dom_rel, ran_rel, FnClass::TotalFn) == brute_total_fn(r, dom, ran));
    CHECK(satisfies_class(r, dom_rel, ran_rel, FnClass::PartialFn) == (sub && brute_functional(r)));
    CHECK(satisfies_class(r, dom_rel, ran_rel, FnClass::TotalSurj) ==
          (brute_total_fn(r, dom, ran) && brute_surjective(r, ran)));
    CHECK(satisfies_class(r, dom_rel, ran_rel, FnClass::PartialSurj) ==
          (sub && brute_functional(r) && brute_surjective(r, ran)));
    CHECK(satisfies_class(r, dom_rel, ran_rel, FnClass::TotalInj) ==
          (brute_total_fn(r, dom, ran) && brute_injective(r)));
    CHECK(fact_holds(r, dom_rel, ran_rel, ClassFact::Functional) == brute_functional(r));
    CHECK(fact_holds(r, dom_rel, ran_rel, ClassFact::Total) == brute_total(r, dom));
    CHECK(fact_holds(r, dom_rel, ran_rel, ClassFact::Surjective) == brute_surjective(r, ran));
    CHECK(fact_holds(r, dom_rel, ran_rel, ClassFact::Injective) == brute_injective(r));
  }
}
