#include <random>

#include "doctest.h"
#include "ldorb/errors.hpp"
#include "ldorb/numfield.hpp"
#include "ldorb/qlinalg.hpp"

using namespace ldorb;

namespace {

std::vector<Rational> qs(std::initializer_list<long> v) {
  std::vector<Rational> out;
  for (long x : v) out.emplace_back(x);
  return out;
}

// Res(m, a) via the Sylvester matrix; for monic m this is N(a(theta)).
Rational resultant(const QPoly& m, const QPoly& a) {
  const int dm = m.degree(), da = a.degree();
  if (da <= 0) {
    Rational r(1);
    for (int i = 0; i < dm; ++i) r *= a.coeff(0);
    return r;
  }
  const int size = dm + da;
  QMatrix s(size, QVector(size, Rational(0)));
  for (int r = 0; r < da; ++r)
    for (int i = 0; i <= dm; ++i) s[r][r + i] = m.coeff(dm - i);
  for (int r = 0; r < dm; ++r)
    for (int i = 0; i <= da; ++i) s[da + r][r + i] = a.coeff(da - i);
  return det(s);
}

FieldElement random_element(const NumberField& k, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 4);
  std::vector<Rational> c;
  for (int i = 0; i < k.degree(); ++i) {
    Rational q(num(rng), den(rng));
    q.canonicalize();
    c.push_back(q);
  }
  return k.element(c);
}

}  // namespace

TEST_CASE("field creation classifies embeddings") {
  auto k = NumberField::create(qs({-2, 0, 1}));
  CHECK(k.degree() == 2);
  CHECK(k.real_places() == 2);
  CHECK(k.complex_places() == 0);
  CHECK(abs(k.roots()[1].real() - sqrt(Real(2))) < Real("1e-35"));
  CHECK(abs(k.roots()[0].real() + sqrt(Real(2))) < Real("1e-35"));

  auto q4 = NumberField::create(qs({1, -2, 1, -2, 1}));
  CHECK(q4.real_places() == 2);
  CHECK(q4.complex_places() == 1);
  for (int i = 0; i < 4; ++i) CHECK(abs(q4.minpoly().eval(q4.roots()[i])) < Real("1e-30"));

  auto gauss = NumberField::create(qs({1, 0, 1}), 64);
  CHECK(gauss.complex_places() == 1);
  CHECK(abs(gauss.roots()[0].imag() - 1) < Real("1e-18"));
}

TEST_CASE("field creation rejects bad polynomials") {
  CHECK_THROWS_AS(NumberField::create(qs({1, 0, 2})), Error);
  try {
    NumberField::create(qs({1, 0, 2}));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotMonic);
  }
  auto kind_of = [](std::vector<Rational> m) {
    try {
      NumberField::create(m);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::InternalError;
  };
  CHECK(kind_of(qs({-1, 0, 1})) == ErrorKind::Reducible);
  CHECK(kind_of(qs({1, 2, 1})) == ErrorKind::Reducible);
  // (x^2 + 1)(x^2 + 2): no rational roots, a quadratic factor.
  CHECK(kind_of(qs({2, 0, 3, 0, 1})) == ErrorKind::Reducible);
  // (x^2 - 2)(x^2 - 3)
  CHECK(kind_of(qs({6, 0, -5, 0, 1})) == ErrorKind::Reducible);
  CHECK(kind_of({Rational(-1, 4), Rational(0), Rational(1)}) == ErrorKind::Reducible);
  CHECK(kind_of(qs({-3, 0, 0, 1})) == ErrorKind::InternalError);
}

TEST_CASE("exact arithmetic") {
  auto k = NumberField::create(qs({-2, 0, 1}));
  auto t = k.generator();
  CHECK(t * t == k.from_rational(2));
  auto inv = (k.one() + t).inverse();
  CHECK(inv == k.element(qs({-1, 1})));
  CHECK(t + k.zero() == t);
  CHECK_THROWS_AS(k.zero().inverse(), Error);

  auto q4 = NumberField::create(qs({1, -2, 1, -2, 1}));
  std::mt19937_64 rng(7);
  for (int i = 0; i < 1000; ++i) {
    auto a = random_element(q4, rng), b = random_element(q4, rng), c = random_element(q4, rng);
    CHECK((a + b) + c == a + (b + c));
    CHECK(a * (b + c) == a * b + a * c);
    if (!a.is_zero()) CHECK(a * a.inverse() == q4.one());
  }
}

TEST_CASE("norm matches resultant and archimedean product") {
  std::mt19937_64 rng(11);
  for (auto m : {qs({-2, 0, 1}), qs({-1, -3, 0, 1}), qs({1, -2, 1, -2, 1}), qs({9, 0, -2, 0, 1})}) {
    auto k = NumberField::create(m);
    auto s = PlaceSet::archimedean(k);
    for (int i = 0; i < 50; ++i) {
      auto x = random_element(k, rng);
      Rational n = k.norm(x);
      CHECK(n == resultant(k.minpoly(), QPoly(x.coords())));
      Real prod = product_formula_check(x, s);
      Real exact = abs(to_real(n));
      CHECK(abs(prod - exact) <= Real("1e-9") * (exact + Real("1e-30")));
    }
  }
}

TEST_CASE("absolute values") {
  auto k = NumberField::create(qs({-2, 0, 1}));
  auto x = k.one() + k.generator();
  CHECK(abs(abs_value(x, Place::real(1)) - (1 + sqrt(Real(2)))) < Real("1e-30"));
  auto s = PlaceSet::archimedean(k);
  CHECK(abs(product_formula_check(x, s) - 1) < Real("1e-12"));

  auto g = NumberField::create(qs({1, 0, 1}));
  CHECK(abs(abs_value(g.element(qs({1, 1})), Place::complex(0)) - 2) < Real("1e-30"));
  // Either member of the pair gives the same value.
  auto z = g.element(qs({3, -5}));
  CHECK(abs(abs(g.embed(z, 0)) - abs(g.embed(z, 1))) < Real("1e-30"));

  auto q = NumberField::rationals();
  CHECK(abs_value(q.from_rational(12), Place::finite(2)) == Real(1) / 4);
  PlaceSet s2(q, {Place::real(0), Place::finite(2)});
  CHECK(abs(product_formula_check(q.from_rational(2), s2) - 1) < Real("1e-30"));
  CHECK(abs(product_formula_check(q.from_rational(3), s2) - 3) < Real("1e-30"));
  CHECK(s2.is_s_integral(q.from_rational(Rational(5, 8))));
  CHECK(!s2.is_s_integral(q.from_rational(Rational(5, 6))));
  CHECK_THROWS_AS(PlaceSet(q, {Place::finite(2)}), Error);
  CHECK_THROWS_AS(PlaceSet(q, {Place::real(0), Place::finite(4)}), Error);
}

TEST_CASE("CM verdicts") {
  CHECK(is_cm_field(NumberField::create(qs({1, 0, 1}))) == CmVerdict::Yes);
  CHECK(is_cm_field(NumberField::create(qs({-2, 0, 1}))) == CmVerdict::No);
  auto k = NumberField::create(qs({9, 0, -2, 0, 1}));  // theta = sqrt2 + i
  CHECK(is_cm_field(k) == CmVerdict::Unknown);
  CmWitness w{qs({-2, 0, 1}), qs({1})};
  CHECK(is_cm_field(k, w) == CmVerdict::Yes);
  auto st = cm_structure(k, w);
  CHECK(st.beta * st.beta == k.from_rational(2));
  CHECK(st.sqrt_minus_d * st.sqrt_minus_d == k.from_rational(-1));
  CHECK_THROWS_AS(cm_structure(k, CmWitness{qs({-3, 0, 1}), qs({1})}), Error);
  CHECK_THROWS_AS(cm_structure(k, CmWitness{qs({-2, 0, 1}), qs({3})}), Error);
  // sqrt(-2) = sqrt2 * i lies in K as well.
  CHECK(is_cm_field(k, CmWitness{qs({-2, 0, 1}), qs({2})}) == CmVerdict::Yes);
}
