#pragma once

#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace ddnnf {

// Exact, unbounded model count.
using Count = boost::multiprecision::cpp_int;

inline Count pow2(std::size_t k) {
  Count c = 1;
  c <<= k;
  return c;
}

inline std::string to_string(const Count& c) { return c.str(); }

}  // namespace ddnnf
