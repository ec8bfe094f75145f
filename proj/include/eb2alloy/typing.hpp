#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "eb2alloy/ast.hpp"
#include "eb2alloy/value.hpp"

namespace eb2alloy {

enum class FnClass { Relation, TotalFn, PartialFn, TotalSurj, PartialSurj, TotalInj };

struct TypeTerm;
using TypeTermPtr = std::shared_ptr<const TypeTerm>;

// Relational type of a variable: a carrier/enumerated set, INT, or a
// (possibly nested) relation constructor.
struct TypeTerm {
  enum class Kind { Given, Integer, Rel };
  Kind kind;
  std::string set_name;          // Given
  TypeTermPtr left, right;       // Rel
  FnClass fn_class = FnClass::Relation;
};

TypeTermPtr type_given(std::string set_name);
TypeTermPtr type_int();
TypeTermPtr type_rel(TypeTermPtr left, TypeTermPtr right, FnClass cls);
bool type_equal(const TypeTermPtr& a, const TypeTermPtr& b);
std::string type_to_string(const TypeTermPtr& t);

struct TypeEnv {
  std::map<std::string, TypeTermPtr> types;
  std::map<std::string, std::size_t> typing_invariant;  // variable -> invariant index
};

// Per-sig constraints imposed by a function class.
enum class ClassFact { Functional, Total, Surjective, Injective };

std::vector<ClassFact> class_facts(FnClass cls);

// One flat auxiliary signature: `sig <name> { rel : <left> -> <right> }`
// plus the facts making its field respect the function class.
struct SigSpec {
  std::string name;
  std::string field_name;  // always "rel"
  std::string left;
  std::string right;
  std::vector<ClassFact> side_facts;
};

// The first invariant of shape `v : T`, with T built purely from type
// constructors, carrier/enumerated sets and INT, types the variable v.
// Throws TranslateError if some variable has no typing invariant.
TypeEnv infer_types(const Machine& machine, const Context* context);

// Recognizes pure type expressions; returns null if e is not one.
TypeTermPtr type_from_expr(const ExprPtr& e, const Context* context);

struct FlattenResult {
  std::vector<SigSpec> sigs;    // innermost first; empty for scalars
  std::string state_field_type; // outermost sig name, or the scalar type name
};

// Flattens nested relational types into a chain of flat signatures. The
// outermost one is named `<base>Rel`; inner ones append a depth index in
// emission order.
FlattenResult flatten_type(const TypeTermPtr& t, const std::string& base_name);

// Set-theoretic check of a single class fact for r against domain/range
// extents (unary relations).
bool fact_holds(const Relation& r, const Relation& domain, const Relation& range, ClassFact fact);

// r inhabits the class cls as a relation from domain to range.
bool satisfies_class(const Relation& r, const Relation& domain, const Relation& range, FnClass cls);

}  // namespace eb2alloy
