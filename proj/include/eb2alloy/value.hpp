#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace eb2alloy {

// One tuple component: a bounded integer or a named atom.
using Elem = std::variant<std::int64_t, std::string>;

using Tuple = std::vector<Elem>;

// Finite relation: set of equal-arity tuples. The empty relation has
// indeterminate arity and combines with anything.
using Relation = std::set<Tuple>;

inline std::size_t arity(const Relation& r) { return r.empty() ? 0 : r.begin()->size(); }

inline Relation singleton(Elem e) { return Relation{Tuple{std::move(e)}}; }
inline Relation singleton(Tuple t) { return Relation{std::move(t)}; }

std::string elem_to_string(const Elem& e);
std::string tuple_to_string(const Tuple& t);
std::string relation_to_string(const Relation& r);

// Two's-complement wraparound at the given bit width.
std::int64_t wrap_int(std::int64_t v, int bitwidth);

}  // namespace eb2alloy
