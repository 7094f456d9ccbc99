#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

namespace ldorb {

// 50 decimal digits, about 166 bits of mantissa.
using Real = boost::multiprecision::cpp_bin_float_50;
using Complex = boost::multiprecision::cpp_complex_50;

inline constexpr int kRealMantissaBits = 166;

inline Real real_pi() { return boost::math::constants::pi<Real>(); }

}  // namespace ldorb
