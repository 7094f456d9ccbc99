#include "ldorb/polynomial.hpp"

#include <sstream>

#include "ldorb/errors.hpp"

namespace ldorb {

QPoly::QPoly(std::vector<Rational> ascending) : coeffs_(std::move(ascending)) { trim(); }

QPoly QPoly::monomial(const Rational& c, int degree) {
  std::vector<Rational> v(degree + 1, Rational(0));
  v[degree] = c;
  return QPoly(std::move(v));
}

void QPoly::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Rational QPoly::coeff(int i) const {
  if (i < 0 || i > degree()) return Rational(0);
  return coeffs_[i];
}

QPoly QPoly::operator+(const QPoly& o) const {
  std::vector<Rational> r(std::max(coeffs_.size(), o.coeffs_.size()), Rational(0));
  for (std::size_t i = 0; i < coeffs_.size(); ++i) r[i] += coeffs_[i];
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) r[i] += o.coeffs_[i];
  return QPoly(std::move(r));
}

QPoly QPoly::operator-(const QPoly& o) const {
  std::vector<Rational> r(std::max(coeffs_.size(), o.coeffs_.size()), Rational(0));
  for (std::size_t i = 0; i < coeffs_.size(); ++i) r[i] += coeffs_[i];
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) r[i] -= o.coeffs_[i];
  return QPoly(std::move(r));
}

QPoly QPoly::operator*(const QPoly& o) const {
  if (is_zero() || o.is_zero()) return {};
  std::vector<Rational> r(coeffs_.size() + o.coeffs_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0) continue;
    for (std::size_t j = 0; j < o.coeffs_.size(); ++j) r[i + j] += coeffs_[i] * o.coeffs_[j];
  }
  return QPoly(std::move(r));
}

QPoly QPoly::operator*(const Rational& c) const {
  std::vector<Rational> r = coeffs_;
  for (auto& x : r) x *= c;
  return QPoly(std::move(r));
}

QPoly QPoly::derivative() const {
  if (degree() < 1) return {};
  std::vector<Rational> r(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) r[i - 1] = coeffs_[i] * static_cast<long>(i);
  return QPoly(std::move(r));
}

QPoly QPoly::monic() const {
  if (is_zero()) return {};
  Rational inv = 1 / leading();
  return (*this) * inv;
}

Complex QPoly::eval(const Complex& z) const {
  Complex acc(0);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + Complex(to_real(*it));
  return acc;
}

Rational QPoly::eval(const Rational& x) const {
  Rational acc(0);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::string QPoly::str() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    const Rational& c = coeffs_[i];
    if (c == 0) continue;
    if (!first) os << (c > 0 ? " + " : " - ");
    else if (c < 0) os << "-";
    Rational a = abs(c);
    if (a != 1 || i == 0) os << a.get_str();
    if (i >= 1) os << "x";
    if (i >= 2) os << "^" << i;
    first = false;
  }
  return os.str();
}

PolyDivision divmod(const QPoly& a, const QPoly& b) {
  if (b.is_zero()) throw Error(ErrorKind::DivisionByZero, "polynomial division by zero");
  std::vector<Rational> rem = a.coeffs();
  int db = b.degree();
  int da = a.degree();
  if (da < db) return {QPoly(), a};
  std::vector<Rational> quo(da - db + 1, Rational(0));
  Rational inv = 1 / b.leading();
  for (int k = da; k >= db; --k) {
    Rational c = rem[k] * inv;
    quo[k - db] = c;
    if (c == 0) continue;
    for (int j = 0; j <= db; ++j) rem[k - db + j] -= c * b.coeffs()[j];
  }
  rem.resize(db);
  return {QPoly(std::move(quo)), QPoly(std::move(rem))};
}

QPoly gcd(const QPoly& a, const QPoly& b) {
  QPoly x = a, y = b;
  while (!y.is_zero()) {
    QPoly r = divmod(x, y).remainder;
    x = std::move(y);
    y = std::move(r);
  }
  return x.monic();
}

ExtGcd ext_gcd_mod(const QPoly& a, const QPoly& m) {
  // Invariant: s0*a = r0, s1*a = r1 (mod m).
  QPoly r0 = m, r1 = divmod(a, m).remainder;
  QPoly s0, s1(std::vector<Rational>{Rational(1)});
  while (!r1.is_zero()) {
    PolyDivision qr = divmod(r0, r1);
    QPoly s2 = s0 - qr.quotient * s1;
    r0 = std::move(r1);
    r1 = std::move(qr.remainder);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  if (r0.is_zero()) return {QPoly(), QPoly()};
  Rational inv = 1 / r0.leading();
  return {r0 * inv, divmod(s0 * inv, m).remainder};
}

}  // namespace ldorb
