#pragma once

#include <string>
#include <vector>

#include "ldorb/rational.hpp"

namespace ldorb {

// Dense univariate polynomial over Q, coefficients in ascending degree.
// The zero polynomial has an empty coefficient list.
class QPoly {
 public:
  QPoly() = default;
  explicit QPoly(std::vector<Rational> ascending);
  static QPoly monomial(const Rational& c, int degree);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<Rational>& coeffs() const { return coeffs_; }
  Rational coeff(int i) const;
  const Rational& leading() const { return coeffs_.back(); }

  QPoly operator+(const QPoly& o) const;
  QPoly operator-(const QPoly& o) const;
  QPoly operator*(const QPoly& o) const;
  QPoly operator*(const Rational& c) const;
  bool operator==(const QPoly& o) const { return coeffs_ == o.coeffs_; }

  QPoly derivative() const;
  QPoly monic() const;
  Complex eval(const Complex& z) const;
  Rational eval(const Rational& x) const;

  std::string str() const;

 private:
  void trim();
  std::vector<Rational> coeffs_;
};

struct PolyDivision {
  QPoly quotient;
  QPoly remainder;
};

PolyDivision divmod(const QPoly& a, const QPoly& b);
// Monic gcd; gcd(0, 0) = 0.
QPoly gcd(const QPoly& a, const QPoly& b);

// Returns s with s*a = g (mod m), where g = gcd(a, m) monic.
struct ExtGcd {
  QPoly g;
  QPoly s;
};
ExtGcd ext_gcd_mod(const QPoly& a, const QPoly& m);

}  // namespace ldorb
