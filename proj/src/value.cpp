#include "eb2alloy/value.hpp"

#include <sstream>

namespace eb2alloy {

std::string elem_to_string(const Elem& e) {
  if (std::holds_alternative<std::int64_t>(e)) return std::to_string(std::get<std::int64_t>(e));
  return std::get<std::string>(e);
}

std::string tuple_to_string(const Tuple& t) {
  std::ostringstream os;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) os << " |-> ";
    os << elem_to_string(t[i]);
  }
  return os.str();
}

std::string relation_to_string(const Relation& r) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (const auto& t : r) {
    if (!first) os << ", ";
    first = false;
    os << tuple_to_string(t);
  }
  os << '}';
  return os.str();
}

std::int64_t wrap_int(std::int64_t v, int bitwidth) {
  const std::uint64_t span = std::uint64_t{1} << bitwidth;
  std::uint64_t u = static_cast<std::uint64_t>(v) & (span - 1);
  if (u >= span / 2) return static_cast<std::int64_t>(u) - static_cast<std::int64_t>(span);
  return static_cast<std::int64_t>(u);
}

}  // namespace eb2alloy
