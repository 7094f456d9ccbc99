#include "ldorb/numfield.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "ldorb/errors.hpp"
#include "ldorb/qlinalg.hpp"

namespace ldorb {

namespace detail {

struct FieldData {
  int degree = 1;
  QPoly minpoly;
  // reduction[k] = coordinates of x^{degree + k} mod minpoly, k < degree - 1.
  std::vector<std::vector<Rational>> reduction;
  std::vector<Complex> roots;
  std::vector<Real> radii;
  std::vector<std::complex<double>> roots_double;
  int r1 = 0;
  int r2 = 0;
  int precision_bits = NumberField::kDefaultPrecisionBits;
  bool irreducibility_verified = true;
  bool has_integral_basis = false;
  std::vector<std::vector<Rational>> integral_basis;      // power coords
  std::vector<std::vector<Rational>> integral_basis_inv;  // power -> basis coords
};

}  // namespace detail

using detail::FieldData;

namespace {

Real pow2(int e) { return ldexp(Real(1), e); }

// Durand-Kerner iteration followed by Weierstrass inclusion disks: if the
// disks D(z_i, n |W_i|) are pairwise disjoint, each holds exactly one root.
struct IsolatedRoots {
  std::vector<Complex> z;
  std::vector<Real> radius;
};

IsolatedRoots isolate_roots(const QPoly& p, int precision_bits) {
  const int n = p.degree();
  std::vector<Complex> c(n + 1);
  for (int i = 0; i <= n; ++i) c[i] = Complex(to_real(p.coeff(i)));
  auto eval = [&](const Complex& z) {
    Complex acc(0);
    for (int i = n; i >= 0; --i) acc = acc * z + c[i];
    return acc;
  };
  Real bound(1);
  for (int i = 0; i < n; ++i) bound = std::max(bound, Real(1) + abs(c[i]));
  std::vector<Complex> z(n);
  Complex seed(Real("0.4"), Real("0.9"));
  Complex w(1);
  for (int k = 0; k < n; ++k) {
    w *= seed;
    z[k] = w * bound;
  }
  auto weierstrass = [&](int k) {
    Complex denom(1);
    for (int j = 0; j < n; ++j)
      if (j != k) denom *= (z[k] - z[j]);
    return eval(z[k]) / denom;
  };
  const Real target = pow2(-(precision_bits + 8));
  bool converged = false;
  for (int iter = 0; iter < 20000 && !converged; ++iter) {
    converged = true;
    for (int k = 0; k < n; ++k) {
      Complex corr = weierstrass(k);
      z[k] -= corr;
      if (abs(corr) > target * std::max(Real(1), abs(z[k]))) converged = false;
    }
  }
  if (!converged) throw Error(ErrorKind::RootIsolationFailed, "Durand-Kerner did not converge");
  IsolatedRoots out;
  out.z = z;
  out.radius.resize(n);
  for (int k = 0; k < n; ++k) out.radius[k] = 2 * n * abs(weierstrass(k)) + pow2(-(kRealMantissaBits - 8)) * (1 + abs(z[k]));
  for (int k = 0; k < n; ++k) {
    if (out.radius[k] > pow2(-precision_bits) * std::max(Real(1), abs(z[k])))
      throw Error(ErrorKind::RootIsolationFailed, "inclusion radius above precision target");
    for (int j = k + 1; j < n; ++j)
      if (abs(z[k] - z[j]) <= out.radius[k] + out.radius[j])
        throw Error(ErrorKind::RootIsolationFailed, "inclusion disks overlap");
  }
  return out;
}

Integer lcm_of_denominators(const QPoly& p) {
  Integer l(1);
  for (const auto& x : p.coeffs()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  return l;
}

// Monic integer polynomial P(y) = D^n m(y / D).
QPoly integral_scaling(const QPoly& m, const Integer& d) {
  const int n = m.degree();
  std::vector<Rational> c(n + 1);
  Integer pw(1);
  for (int i = n; i >= 0; --i) {
    c[i] = m.coeff(i) * Rational(pw);
    pw *= d;
  }
  return QPoly(c);
}

Integer round_real(const Real& x) { return floor_to_integer(x + Real("0.5")); }

void check_irreducible(const QPoly& m, const IsolatedRoots& roots, bool& verified) {
  const int n = m.degree();
  verified = true;
  if (n == 1) return;
  if (gcd(m, m.derivative()).degree() != 0) throw Error(ErrorKind::Reducible, "minimal polynomial is not squarefree");
  Integer d = lcm_of_denominators(m);
  QPoly scaled = integral_scaling(m, d);
  const Real dr = to_real(d);
  // Rational roots of m correspond to integer roots of the scaled polynomial.
  for (int k = 0; k < n; ++k) {
    if (abs(roots.z[k].imag()) > Real(1) / 4) continue;
    Integer y = round_real(roots.z[k].real() * dr);
    if (scaled.eval(Rational(y)) == 0) throw Error(ErrorKind::Reducible, "rational root " + Rational(y, d).get_str());
  }
  if (n == 4) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        Complex s = (roots.z[i] + roots.z[j]) * Complex(dr);
        Complex p = roots.z[i] * roots.z[j] * Complex(dr * dr);
        if (abs(s.imag()) > Real(1) / 4 || abs(p.imag()) > Real(1) / 4) continue;
        QPoly quad(std::vector<Rational>{Rational(round_real(p.real())), Rational(-round_real(s.real())), Rational(1)});
        if (divmod(scaled, quad).remainder.is_zero())
          throw Error(ErrorKind::Reducible, "quadratic factor " + quad.str() + " of the scaled polynomial");
      }
  } else if (n > 4) {
    verified = false;
  }
}

std::shared_ptr<FieldData> build_field(const std::vector<Rational>& ascending, int precision_bits) {
  QPoly m(ascending);
  if (m.degree() < 1) throw Error(ErrorKind::NotMonic, "minimal polynomial must have degree >= 1");
  if (m.leading() != 1) throw Error(ErrorKind::NotMonic, "leading coefficient is " + m.leading().get_str());
  if (precision_bits < 16 || precision_bits > kRealMantissaBits - 24)
    throw Error(ErrorKind::RootIsolationFailed, "precision target outside the supported range [16, " +
                                                    std::to_string(kRealMantissaBits - 24) + "]");
  auto f = std::make_shared<FieldData>();
  f->degree = m.degree();
  f->minpoly = m;
  f->precision_bits = precision_bits;
  const int n = f->degree;
  // x^{n+k} mod m for k = 0 .. n-2.
  std::vector<Rational> cur(n);
  for (int i = 0; i < n; ++i) cur[i] = -m.coeff(i);
  for (int k = 0; k + 1 < n; ++k) {
    f->reduction.push_back(cur);
    std::vector<Rational> next(n, Rational(0));
    Rational top = cur[n - 1];
    for (int i = n - 1; i >= 1; --i) next[i] = cur[i - 1];
    for (int i = 0; i < n; ++i) next[i] -= top * m.coeff(i);
    cur = std::move(next);
  }

  IsolatedRoots iso;
  if (n == 1) {
    iso.z = {Complex(to_real(-m.coeff(0)))};
    iso.radius = {Real(0)};
  } else {
    iso = isolate_roots(m, precision_bits);
  }
  check_irreducible(m, iso, f->irreducibility_verified);

  std::vector<std::pair<Complex, Real>> reals, uppers;
  for (int k = 0; k < n; ++k) {
    const Complex& z = iso.z[k];
    const Real& r = iso.radius[k];
    if (abs(z.imag()) <= r) {
      // The conjugate disk must miss every other disk for the root to be real.
      Complex zc(z.real(), -z.imag());
      for (int j = 0; j < n; ++j)
        if (j != k && abs(zc - iso.z[j]) <= r + iso.radius[j])
          throw Error(ErrorKind::RootIsolationFailed, "cannot decide whether a root is real");
      reals.emplace_back(Complex(z.real(), Real(0)), r);
    } else if (z.imag() > 0) {
      uppers.emplace_back(z, r);
    }
  }
  if (reals.size() + 2 * uppers.size() != static_cast<std::size_t>(n))
    throw Error(ErrorKind::RootIsolationFailed, "root classification does not account for the degree");
  std::sort(reals.begin(), reals.end(), [](const auto& a, const auto& b) { return a.first.real() < b.first.real(); });
  std::sort(uppers.begin(), uppers.end(), [](const auto& a, const auto& b) {
    if (a.first.real() != b.first.real()) return a.first.real() < b.first.real();
    return a.first.imag() < b.first.imag();
  });
  f->r1 = static_cast<int>(reals.size());
  f->r2 = static_cast<int>(uppers.size());
  for (auto& [z, r] : reals) {
    f->roots.push_back(z);
    f->radii.push_back(r);
  }
  for (auto& [z, r] : uppers) {
    f->roots.push_back(z);
    f->radii.push_back(r);
    f->roots.emplace_back(z.real(), -z.imag());
    f->radii.push_back(r);
  }
  for (const auto& z : f->roots)
    f->roots_double.emplace_back(z.real().convert_to<double>(), z.imag().convert_to<double>());
  return f;
}

}  // namespace

NumberField NumberField::create(const std::vector<Rational>& minpoly_ascending, int precision_bits,
                                const std::optional<std::vector<std::vector<Rational>>>& integral_basis) {
  auto f = build_field(minpoly_ascending, precision_bits);
  const int n = f->degree;
  if (integral_basis) {
    const auto& b = *integral_basis;
    if (static_cast<int>(b.size()) != n)
      throw Error(ErrorKind::ConfigInvalid, "integral basis must have degree elements");
    QMatrix cols(n, QVector(n));
    for (int j = 0; j < n; ++j) {
      if (static_cast<int>(b[j].size()) != n)
        throw Error(ErrorKind::ConfigInvalid, "integral basis element has wrong length");
      for (int i = 0; i < n; ++i) cols[i][j] = b[j][i];
    }
    if (det(cols) == 0) throw Error(ErrorKind::ConfigInvalid, "integral basis is linearly dependent");
    // Inverse by solving against unit vectors.
    QMatrix inv(n, QVector(n));
    for (int j = 0; j < n; ++j) {
      QVector e(n, Rational(0));
      e[j] = 1;
      auto x = solve(cols, e);
      for (int i = 0; i < n; ++i) inv[i][j] = x[i];
    }
    f->has_integral_basis = true;
    f->integral_basis = b;
    f->integral_basis_inv = std::move(inv);
  }
  return NumberField(std::move(f));
}

NumberField NumberField::rationals() { return create({Rational(0), Rational(1)}); }

int NumberField::degree() const { return data_->degree; }
const QPoly& NumberField::minpoly() const { return data_->minpoly; }
int NumberField::precision_bits() const { return data_->precision_bits; }
int NumberField::real_places() const { return data_->r1; }
int NumberField::complex_places() const { return data_->r2; }
bool NumberField::irreducibility_verified() const { return data_->irreducibility_verified; }
const std::vector<Complex>& NumberField::roots() const { return data_->roots; }
const std::vector<Real>& NumberField::root_radii() const { return data_->radii; }
const std::vector<std::complex<double>>& NumberField::roots_double() const { return data_->roots_double; }

FieldElement NumberField::zero() const { return FieldElement(data_, std::vector<Rational>(degree(), Rational(0))); }
FieldElement NumberField::one() const { return from_rational(Rational(1)); }

FieldElement NumberField::generator() const {
  if (degree() == 1) return from_rational(-data_->minpoly.coeff(0));
  std::vector<Rational> c(degree(), Rational(0));
  c[1] = 1;
  return FieldElement(data_, std::move(c));
}

FieldElement NumberField::from_rational(const Rational& q) const {
  std::vector<Rational> c(degree(), Rational(0));
  c[0] = q;
  return FieldElement(data_, std::move(c));
}

FieldElement NumberField::element(std::vector<Rational> coords) const {
  if (static_cast<int>(coords.size()) > degree())
    throw Error(ErrorKind::ConfigInvalid, "element has more coordinates than the field degree");
  coords.resize(degree(), Rational(0));
  return FieldElement(data_, std::move(coords));
}

bool NumberField::has_integral_basis() const { return data_->has_integral_basis; }

std::vector<FieldElement> NumberField::integral_basis() const {
  std::vector<FieldElement> cache;
  for (int j = 0; j < degree(); ++j) {
    if (data_->has_integral_basis) {
      cache.push_back(element(data_->integral_basis[j]));
    } else {
      std::vector<Rational> c(degree(), Rational(0));
      c[j] = 1;
      cache.push_back(element(std::move(c)));
    }
  }
  return cache;
}

std::vector<Rational> NumberField::integral_coords(const FieldElement& x) const {
  if (!data_->has_integral_basis) return x.coords();
  const int n = degree();
  std::vector<Rational> out(n, Rational(0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out[i] += data_->integral_basis_inv[i][j] * x.coords()[j];
  return out;
}

bool NumberField::is_integral(const FieldElement& x) const {
  for (const auto& c : integral_coords(x))
    if (!is_integer(c)) return false;
  return true;
}

Rational NumberField::norm(const FieldElement& x) const {
  const int n = degree();
  QMatrix m(n, QVector(n));
  FieldElement basis = one();
  FieldElement gen = generator();
  for (int j = 0; j < n; ++j) {
    FieldElement col = x * basis;
    for (int i = 0; i < n; ++i) m[i][j] = col.coords()[i];
    basis = basis * gen;
  }
  return det(std::move(m));
}

Complex NumberField::embed(const FieldElement& x, int root_index) const {
  const Complex& z = data_->roots.at(root_index);
  Complex acc(0);
  const auto& c = x.coords();
  for (int i = degree() - 1; i >= 0; --i) acc = acc * z + Complex(to_real(c[i]));
  return acc;
}

std::complex<double> NumberField::embed_double(const FieldElement& x, int root_index) const {
  const std::complex<double> z = data_->roots_double.at(root_index);
  std::complex<double> acc(0);
  const auto& c = x.coords();
  for (int i = degree() - 1; i >= 0; --i) acc = acc * z + c[i].get_d();
  return acc;
}

// ---------------------------------------------------------------------------
// FieldElement

void FieldElement::check_same(const FieldElement& o) const {
  if (field_ != o.field_) throw Error(ErrorKind::DomainError, "elements of different fields");
}

bool FieldElement::is_zero() const {
  for (const auto& c : coords_)
    if (c != 0) return false;
  return true;
}

bool FieldElement::is_one() const {
  if (coords_.empty() || coords_[0] != 1) return false;
  for (std::size_t i = 1; i < coords_.size(); ++i)
    if (coords_[i] != 0) return false;
  return true;
}

bool FieldElement::is_rational() const {
  for (std::size_t i = 1; i < coords_.size(); ++i)
    if (coords_[i] != 0) return false;
  return true;
}

Rational FieldElement::rational_value() const {
  if (!is_rational()) throw Error(ErrorKind::DomainError, "element is not rational");
  return coords_[0];
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
  FieldElement r = *this;
  r += o;
  return r;
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
  FieldElement r = *this;
  r -= o;
  return r;
}

FieldElement& FieldElement::operator+=(const FieldElement& o) {
  check_same(o);
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += o.coords_[i];
  return *this;
}

FieldElement& FieldElement::operator-=(const FieldElement& o) {
  check_same(o);
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= o.coords_[i];
  return *this;
}

FieldElement FieldElement::operator-() const {
  FieldElement r = *this;
  for (auto& c : r.coords_) c = -c;
  return r;
}

FieldElement FieldElement::operator*(const Rational& c) const {
  FieldElement r = *this;
  for (auto& x : r.coords_) x *= c;
  return r;
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
  check_same(o);
  const int n = static_cast<int>(coords_.size());
  if (n == 1) return FieldElement(field_, {coords_[0] * o.coords_[0]});
  std::vector<Rational> full(2 * n - 1, Rational(0));
  for (int i = 0; i < n; ++i) {
    if (coords_[i] == 0) continue;
    for (int j = 0; j < n; ++j)
      if (o.coords_[j] != 0) full[i + j] += coords_[i] * o.coords_[j];
  }
  std::vector<Rational> out(full.begin(), full.begin() + n);
  for (int k = n; k < 2 * n - 1; ++k) {
    if (full[k] == 0) continue;
    const auto& red = field_->reduction[k - n];
    for (int i = 0; i < n; ++i)
      if (red[i] != 0) out[i] += full[k] * red[i];
  }
  return FieldElement(field_, std::move(out));
}

FieldElement& FieldElement::operator*=(const FieldElement& o) {
  *this = *this * o;
  return *this;
}

FieldElement FieldElement::inverse() const {
  if (is_zero()) throw Error(ErrorKind::DivisionByZero, "inverse of zero");
  if (coords_.size() == 1) return FieldElement(field_, {1 / coords_[0]});
  ExtGcd eg = ext_gcd_mod(QPoly(coords_), field_->minpoly);
  if (eg.g.degree() != 0) throw Error(ErrorKind::DivisionByZero, "element shares a factor with the minimal polynomial");
  std::vector<Rational> c(coords_.size(), Rational(0));
  for (int i = 0; i <= eg.s.degree(); ++i) c[i] = eg.s.coeff(i);
  return FieldElement(field_, std::move(c));
}

FieldElement FieldElement::operator/(const FieldElement& o) const {
  check_same(o);
  return *this * o.inverse();
}

bool FieldElement::operator==(const FieldElement& o) const {
  return field_ == o.field_ && coords_ == o.coords_;
}

FieldElement FieldElement::pow(long e) const {
  if (e < 0) return inverse().pow(-e);
  FieldElement base = *this;
  FieldElement acc = NumberField(field_).one();
  while (e > 0) {
    if (e & 1) acc *= base;
    base *= base;
    e >>= 1;
  }
  return acc;
}

std::string FieldElement::str() const {
  if (coords_.size() == 1) return coords_[0].get_str();
  return QPoly(coords_).str();
}

// ---------------------------------------------------------------------------
// Places

int Place::root_index(const NumberField& k) const {
  switch (kind) {
    case PlaceKind::Real:
      return index;
    case PlaceKind::Complex:
      return k.real_places() + 2 * index;
    case PlaceKind::Finite:
      break;
  }
  throw Error(ErrorKind::DomainError, "finite place has no root index");
}

std::string Place::label() const {
  switch (kind) {
    case PlaceKind::Real:
      return "real" + std::to_string(index);
    case PlaceKind::Complex:
      return "complex" + std::to_string(index);
    case PlaceKind::Finite:
      return "p" + std::to_string(prime);
  }
  return "?";
}

bool Place::operator==(const Place& o) const {
  if (kind != o.kind) return false;
  return kind == PlaceKind::Finite ? prime == o.prime : index == o.index;
}

namespace {

bool is_prime(unsigned long p) {
  if (p < 2) return false;
  for (unsigned long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

}  // namespace

PlaceSet::PlaceSet(const NumberField& k, std::vector<Place> places) : field_(k), places_(std::move(places)) {
  int real_seen = 0, complex_seen = 0;
  for (std::size_t i = 0; i < places_.size(); ++i) {
    const Place& p = places_[i];
    for (std::size_t j = 0; j < i; ++j)
      if (places_[j] == p) throw Error(ErrorKind::ConfigInvalid, "duplicate place " + p.label());
    switch (p.kind) {
      case PlaceKind::Real:
        if (p.index < 0 || p.index >= k.real_places())
          throw Error(ErrorKind::ConfigInvalid, "no real embedding " + std::to_string(p.index));
        ++real_seen;
        break;
      case PlaceKind::Complex:
        if (p.index < 0 || p.index >= k.complex_places())
          throw Error(ErrorKind::ConfigInvalid, "no complex place " + std::to_string(p.index));
        ++complex_seen;
        break;
      case PlaceKind::Finite:
        if (k.degree() != 1) throw Error(ErrorKind::ConfigInvalid, "finite places are supported only over Q");
        if (!is_prime(p.prime)) throw Error(ErrorKind::ConfigInvalid, std::to_string(p.prime) + " is not prime");
        break;
    }
  }
  if (real_seen != k.real_places() || complex_seen != k.complex_places())
    throw Error(ErrorKind::ConfigInvalid, "place set must contain every archimedean place");
}

PlaceSet PlaceSet::archimedean(const NumberField& k) {
  std::vector<Place> p;
  for (int i = 0; i < k.real_places(); ++i) p.push_back(Place::real(i));
  for (int j = 0; j < k.complex_places(); ++j) p.push_back(Place::complex(j));
  return PlaceSet(k, std::move(p));
}

std::vector<unsigned long> PlaceSet::finite_primes() const {
  std::vector<unsigned long> out;
  for (const auto& p : places_)
    if (p.kind == PlaceKind::Finite) out.push_back(p.prime);
  return out;
}

bool PlaceSet::is_s_integral(const FieldElement& x) const {
  if (field_.degree() > 1) return field_.is_integral(x);
  Integer den(x.coords()[0].get_den());
  for (auto p : finite_primes())
    while (mpz_divisible_ui_p(den.get_mpz_t(), p)) mpz_divexact_ui(den.get_mpz_t(), den.get_mpz_t(), p);
  return den == 1;
}

Real abs_value(const FieldElement& x, const Place& v) {
  if (v.kind == PlaceKind::Finite) {
    if (x.is_zero()) return Real(0);
    if (!x.is_rational()) throw Error(ErrorKind::DomainError, "finite places require K = Q");
    int e = padic_valuation(x.rational_value(), v.prime);
    return pow(Real(v.prime), -e);
  }
  NumberField k = x.field();
  Complex z = k.embed(x, v.root_index(k));
  Real a = abs(z);
  return v.kind == PlaceKind::Complex ? a * a : a;
}

double abs_value_double(const FieldElement& x, const Place& v) {
  if (v.kind == PlaceKind::Finite) return abs_value(x, v).convert_to<double>();
  NumberField k = x.field();
  std::complex<double> z = k.embed_double(x, v.root_index(k));
  double a = std::abs(z);
  return v.kind == PlaceKind::Complex ? a * a : a;
}

Real product_formula_check(const FieldElement& x, const PlaceSet& s) {
  Real prod(1);
  for (const auto& v : s.places()) prod *= abs_value(x, v);
  return prod;
}

// ---------------------------------------------------------------------------
// CM fields

std::string to_string(CmVerdict v) {
  switch (v) {
    case CmVerdict::Yes:
      return "yes";
    case CmVerdict::No:
      return "no";
    case CmVerdict::Unknown:
      return "unknown";
  }
  return "unknown";
}

std::optional<FieldElement> recognize_element(const NumberField& k, const std::vector<Complex>& values) {
  const int n = k.degree();
  // Vandermonde system sum_i c_i z_k^i = values_k.
  std::vector<std::vector<Complex>> a(n, std::vector<Complex>(n + 1));
  for (int r = 0; r < n; ++r) {
    Complex p(1);
    for (int i = 0; i < n; ++i) {
      a[r][i] = p;
      p *= k.roots()[r];
    }
    a[r][n] = values[r];
  }
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (abs(a[r][col]) > abs(a[piv][col])) piv = r;
    std::swap(a[col], a[piv]);
    if (abs(a[col][col]) == 0) return std::nullopt;
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      Complex f = a[r][col] / a[col][col];
      for (int j = col; j <= n; ++j) a[r][j] -= f * a[col][j];
    }
  }
  std::vector<Rational> coords(n);
  const Real tol = ldexp(Real(1), -(k.precision_bits() - 24));
  for (int i = 0; i < n; ++i) {
    Complex c = a[i][n] / a[i][i];
    if (abs(c.imag()) > tol * (1 + abs(c.real()))) return std::nullopt;
    auto q = recognize_rational(c.real(), Integer("1000000000000"), tol * (1 + abs(c.real())));
    if (!q) return std::nullopt;
    coords[i] = *q;
  }
  return k.element(std::move(coords));
}

FieldElement map_from_subfield(const std::vector<Rational>& coords, const FieldElement& beta) {
  NumberField k = beta.field();
  FieldElement acc = k.zero();
  FieldElement p = k.one();
  for (const auto& c : coords) {
    acc += p * c;
    p *= beta;
  }
  return acc;
}

namespace {

// Enumerates assignments of candidate values to the roots of K that respect
// complex conjugation: one choice per real root and per complex pair.
template <typename Candidates, typename Visit>
bool enumerate_conjugate_assignments(const NumberField& k, Candidates&& candidates, Visit&& visit) {
  const int r1 = k.real_places(), r2 = k.complex_places();
  const int slots = r1 + r2;
  std::vector<std::vector<Complex>> choice(slots);
  for (int s = 0; s < slots; ++s) {
    int root = s < r1 ? s : r1 + 2 * (s - r1);
    choice[s] = candidates(root, s < r1);
    if (choice[s].empty()) return false;
  }
  std::vector<std::size_t> idx(slots, 0);
  while (true) {
    std::vector<Complex> values(k.degree());
    for (int s = 0; s < slots; ++s) {
      const Complex& v = choice[s][idx[s]];
      if (s < r1) {
        values[s] = v;
      } else {
        values[r1 + 2 * (s - r1)] = v;
        values[r1 + 2 * (s - r1) + 1] = Complex(v.real(), -v.imag());
      }
    }
    if (visit(values)) return true;
    int s = 0;
    while (s < slots && ++idx[s] == choice[s].size()) idx[s++] = 0;
    if (s == slots) return false;
  }
}

}  // namespace

std::vector<FieldElement> nth_roots(const FieldElement& c, int e) {
  if (e < 1) throw Error(ErrorKind::DomainError, "root exponent must be positive");
  NumberField k = c.field();
  std::vector<FieldElement> out;
  if (c.is_zero()) return {k.zero()};
  if (k.degree() == 1) {
    Rational q = c.rational_value();
    if (q < 0 && e % 2 == 0) return out;
    Integer num = abs(q.get_num()), den = q.get_den(), rn, rd;
    if (!mpz_root(rn.get_mpz_t(), num.get_mpz_t(), e) || !mpz_root(rd.get_mpz_t(), den.get_mpz_t(), e)) return out;
    Rational r(rn, rd);
    r.canonicalize();
    if (q < 0) r = -r;
    out.push_back(k.from_rational(r));
    if (e % 2 == 0) out.push_back(k.from_rational(-r));
    return out;
  }
  const Real two_pi = 2 * real_pi();
  enumerate_conjugate_assignments(
      k,
      [&](int root, bool real_root) {
        Complex v = k.embed(c, root);
        std::vector<Complex> cand;
        Real mod = pow(abs(v), Real(1) / e);
        Real arg = atan2(v.imag(), v.real());
        for (int j = 0; j < e; ++j) {
          Real phi = (arg + two_pi * j) / e;
          Complex z(mod * cos(phi), mod * sin(phi));
          if (real_root) {
            if (abs(z.imag()) > mod * Real("1e-30")) continue;
            z = Complex(z.real(), Real(0));
          }
          cand.push_back(z);
        }
        return cand;
      },
      [&](const std::vector<Complex>& values) {
        auto cand = recognize_element(k, values);
        if (cand && cand->pow(e) == c && std::find(out.begin(), out.end(), *cand) == out.end()) out.push_back(*cand);
        return false;
      });
  return out;
}

CmStructure cm_structure(const NumberField& k, const CmWitness& w) {
  NumberField f = NumberField::create(w.subfield_minpoly, k.precision_bits());
  if (2 * f.degree() != k.degree())
    throw Error(ErrorKind::BadWitness, "degree of K is not twice the degree of the subfield");
  if (static_cast<int>(w.d.size()) > f.degree()) throw Error(ErrorKind::BadWitness, "d has too many coordinates");
  const Real tol = ldexp(Real(1), -(k.precision_bits() / 2));
  std::optional<FieldElement> beta;
  enumerate_conjugate_assignments(
      k,
      [&](int, bool real_root) {
        std::vector<Complex> c;
        for (const auto& z : f.roots())
          if (!real_root || abs(z.imag()) < tol) c.push_back(z);
        return c;
      },
      [&](const std::vector<Complex>& values) {
        auto cand = recognize_element(k, values);
        if (!cand) return false;
        // Exact check: minpoly_F(beta) = 0 in K.
        if (!map_from_subfield(f.minpoly().coeffs(), *cand).is_zero()) return false;
        beta = *cand;
        return true;
      });
  if (!beta) throw Error(ErrorKind::BadWitness, "subfield does not embed in K");
  FieldElement d = map_from_subfield(w.d, *beta);
  if (d.is_zero()) throw Error(ErrorKind::BadWitness, "d is zero");
  FieldElement minus_d = -d;
  std::optional<FieldElement> s;
  enumerate_conjugate_assignments(
      k,
      [&](int root, bool real_root) {
        Complex v = k.embed(minus_d, root);
        Complex r = sqrt(v);
        std::vector<Complex> c;
        if (real_root && abs(r.imag()) > tol) return c;
        c.push_back(r);
        c.push_back(-r);
        return c;
      },
      [&](const std::vector<Complex>& values) {
        auto cand = recognize_element(k, values);
        if (!cand || *cand * *cand != minus_d) return false;
        s = *cand;
        return true;
      });
  if (!s) throw Error(ErrorKind::BadWitness, "-d is not a square in K");

  CmStructure out{f, *beta, d, *s};
  out.subfield_totally_real = f.real_places() == f.degree();
  out.d_totally_positive = true;
  FieldElement d_in_f = f.element(w.d);
  for (int i = 0; i < f.degree(); ++i) {
    Complex v = f.embed(d_in_f, i);
    if (abs(v.imag()) > tol || v.real() <= 0) out.d_totally_positive = false;
  }
  return out;
}

CmVerdict is_cm_field(const NumberField& k, const std::optional<CmWitness>& w) {
  if (k.real_places() > 0) return CmVerdict::No;
  if (w) {
    CmStructure s = cm_structure(k, *w);
    if (s.subfield_totally_real && s.d_totally_positive) return CmVerdict::Yes;
    return CmVerdict::Unknown;
  }
  if (k.degree() == 2) return CmVerdict::Yes;
  return CmVerdict::Unknown;
}

}  // namespace ldorb
