#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include <boost/rational.hpp>

// Under C++20 rewritten comparisons, boost's templated rational == integer
// overloads call themselves. Exact non-template overloads win resolution.
namespace boost {
#define QAFOLD_RATIONAL_EQ(T)                                                                             \
  inline bool operator==(const rational<std::int64_t>& a, T b) {                                          \
    return a.denominator() == 1 && a.numerator() == static_cast<std::int64_t>(b);                        \
  }                                                                                                       \
  inline bool operator==(T b, const rational<std::int64_t>& a) { return a == b; }
QAFOLD_RATIONAL_EQ(int)
QAFOLD_RATIONAL_EQ(long)
QAFOLD_RATIONAL_EQ(long long)
#undef QAFOLD_RATIONAL_EQ
}  // namespace boost

namespace qafold {

/// Exact coefficient type for the compiler side. Bundled fixtures stay far
/// from int64 overflow; boost::rational keeps every value in lowest terms.
using Rational = boost::rational<std::int64_t>;

inline std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

inline double to_double(const Rational& r) {
  return boost::rational_cast<double>(r);
}

inline Rational abs(const Rational& r) { return r < 0 ? -r : r; }

inline std::int64_t lcm_denominator(std::int64_t acc, const Rational& r) {
  return std::lcm(acc, r.denominator());
}

}  // namespace qafold
