#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "ldorb/real.hpp"

namespace ldorb {

using Integer = mpz_class;
using Rational = mpq_class;

// Parses "p", "-p" or "p/q"; throws Error(ConfigInvalid) on malformed input.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

// p-adic valuation of a nonzero integer / rational.
int padic_valuation(const Integer& x, unsigned long p);
int padic_valuation(const Rational& x, unsigned long p);

Real to_real(const Rational& q);
Real to_real(const Integer& z);
double to_double(const Rational& q);

// Best rational approximation with denominator <= max_den whose error is
// below tol; empty if no convergent qualifies.
std::optional<Rational> recognize_rational(const Real& x, const Integer& max_den,
                                           const Real& tol);

bool is_integer(const Rational& q);

Integer floor_to_integer(const Real& x);

}  // namespace ldorb
