#include "ldorb/rational.hpp"

#include <cctype>

#include "ldorb/errors.hpp"

namespace ldorb {

namespace {

bool valid_integer_text(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

std::string strip_plus(std::string_view s) {
  if (!s.empty() && s[0] == '+') s.remove_prefix(1);
  return std::string(s);
}

}  // namespace

Integer floor_to_integer(const Real& x) {
  Real fl = floor(x);
  if (abs(fl) < Real(9e18)) return Integer(static_cast<long>(fl.convert_to<long long>()));
  std::string text = fl.str(0, std::ios_base::fixed);
  auto dot = text.find('.');
  if (dot != std::string::npos) text.resize(dot);
  return Integer(text);
}

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!valid_integer_text(num) || !valid_integer_text(den) || den[0] == '-')
    throw Error(ErrorKind::ConfigInvalid, "malformed rational '" + std::string(text) + "'");
  Integer n(strip_plus(num)), d(strip_plus(den));
  if (d == 0) throw Error(ErrorKind::ConfigInvalid, "zero denominator in '" + std::string(text) + "'");
  Rational q(n, d);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

int padic_valuation(const Integer& x, unsigned long p) {
  if (x == 0) throw Error(ErrorKind::DomainError, "valuation of zero");
  Integer y = abs(x);
  int v = 0;
  while (mpz_divisible_ui_p(y.get_mpz_t(), p)) {
    mpz_divexact_ui(y.get_mpz_t(), y.get_mpz_t(), p);
    ++v;
  }
  return v;
}

int padic_valuation(const Rational& x, unsigned long p) {
  return padic_valuation(Integer(x.get_num()), p) - padic_valuation(Integer(x.get_den()), p);
}

Real to_real(const Integer& z) {
  if (z.fits_slong_p()) return Real(z.get_si());
  return Real(z.get_str());
}

Real to_real(const Rational& q) {
  return to_real(Integer(q.get_num())) / to_real(Integer(q.get_den()));
}

double to_double(const Rational& q) { return q.get_d(); }

bool is_integer(const Rational& q) { return q.get_den() == 1; }

std::optional<Rational> recognize_rational(const Real& x, const Integer& max_den, const Real& tol) {
  // Continued-fraction convergents h/k of x.
  Integer h1(1), h2(0), k1(0), k2(1);
  Real rest = x;
  for (int iter = 0; iter < 256; ++iter) {
    Real fl = floor(rest);
    Integer a = floor_to_integer(fl);
    Integer h = a * h1 + h2;
    Integer k = a * k1 + k2;
    if (k > max_den) break;
    Rational cand(h, k);
    cand.canonicalize();
    if (abs(to_real(cand) - x) <= tol) return cand;
    h2 = h1;
    h1 = h;
    k2 = k1;
    k1 = k;
    Real frac = rest - fl;
    if (frac == 0) break;
    rest = 1 / frac;
  }
  return std::nullopt;
}

}  // namespace ldorb
