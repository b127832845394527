#pragma once

#include <cmath>
#include <cstdint>

#include <boost/multiprecision/cpp_int.hpp>

#include "ewens/detail/extended_real.hpp"

namespace ewens {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

namespace detail {

/// Natural log of a positive big integer, accurate to a few ulp of the
/// result. Large values are reduced to their top 64 bits plus a power of two.
inline double log_big(const BigInt& v) {
  const std::size_t bits = boost::multiprecision::msb(v);  // floor(log2 v)
  if (bits <= 992) {
    return std::log(v.convert_to<double>());
  }
  const unsigned shift = static_cast<unsigned>(bits - 64);
  const BigInt top = v >> shift;
  const double e = static_cast<double>(shift);
  return e * kLn2Hi + (e * kLn2Lo + std::log(top.convert_to<double>()));
}

}  // namespace detail
}  // namespace ewens
