#include <set>

#include "doctest.h"
#include "ldorb/errors.hpp"
#include "ldorb/weyl.hpp"

using namespace ldorb;

TEST_CASE("n_psi counts agree with flag enumeration") {
  for (int n = 1; n <= 5; ++n)
    for (const auto& psi : PsiSet::all(n)) {
      auto flags = flags_with_sizes(psi.composition());
      CHECK(Integer(flags.size()) == n_psi_count(psi));
      CHECK(Integer(coset_reps(psi).size()) == n_psi_count(psi));
      // The parabolics conjugate to P_psi are exactly the flags w(P_psi).
      std::set<FlagType> conj;
      for (const auto& w : coset_reps(psi)) conj.insert(parabolic_flag(w, psi));
      CHECK(conj == std::set<FlagType>(flags.begin(), flags.end()));
    }
  CHECK(n_psi_count(PsiSet::empty(2)) == 2);
  CHECK(n_psi_count(PsiSet(3, 0b01)) == 3);
  CHECK(n_psi_count(PsiSet::full(3)) == 1);
  for (auto [n, expect] : {std::pair{2, 5}, std::pair{3, 55}}) {
    Integer sum(0);
    for (const auto& psi : PsiSet::all(n)) sum += n_psi_count(psi) * n_psi_count(psi);
    CHECK(sum == expect);
  }
}

TEST_CASE("psi set structure") {
  PsiSet psi(4, 0b101);  // roots 1 and 3
  CHECK(psi.composition() == std::vector<int>{2, 2});
  CHECK(psi.block_count() == 2);
  CHECK(psi.block_of(2) == 1);
  CHECK(PsiSet::from_composition({2, 2}) == psi);
  CHECK(psi.str() == "{1,3}");
  CHECK_THROWS_AS(PsiSet(3, 0b100), Error);
}

TEST_CASE("weyl representatives") {
  auto k = NumberField::rationals();
  for (int n = 1; n <= 4; ++n)
    for (const auto& w : WeylPerm::all(n)) {
      MatrixK m = w.matrix(k);
      CHECK(m.is_monomial());
      CHECK(m.det().is_one());
      CHECK((m * m.transpose()).is_identity());
      for (int j = 0; j < n; ++j) CHECK(!m(w[j], j).is_zero());
      CHECK((w * w.inverse()) == WeylPerm::identity(n));
    }
}

TEST_CASE("cell conditions agree exhaustively") {
  for (int n = 1; n <= 5; ++n)
    for (const auto& psi : PsiSet::all(n))
      for (const auto& w : WeylPerm::all(n)) {
        auto r = cell_conditions(w, psi);
        CHECK(r.cond_i == r.cond_iii);
      }
  auto w0 = WeylPerm::longest(3);
  auto r = cell_conditions(w0, PsiSet::empty(3));
  CHECK((r.cond_i && r.cond_iii));
  r = cell_conditions(WeylPerm::identity(3), PsiSet::empty(3));
  CHECK((!r.cond_i && !r.cond_iii));
}

TEST_CASE("flag refinement is a partial order") {
  for (int n = 1; n <= 4; ++n) {
    std::vector<FlagType> flags;
    for (const auto& psi : PsiSet::all(n))
      for (const auto& f : flags_with_sizes(psi.composition())) flags.push_back(f);
    for (const auto& a : flags) {
      CHECK(a.refines(a));
      for (const auto& b : flags) {
        if (a.refines(b) && b.refines(a)) CHECK(a == b);
        for (const auto& c : flags)
          if (a.refines(b) && b.refines(c)) CHECK(a.refines(c));
      }
    }
  }
  // A Borel refines G, not conversely.
  FlagType borel({{0}, {1}, {2}}), whole({{0, 1, 2}}), mid({{0, 1}, {2}}), other({{1}, {0, 2}});
  CHECK(borel.refines(whole));
  CHECK(borel.refines(mid));
  CHECK(!whole.refines(borel));
  CHECK(!borel.refines(other));
}

TEST_CASE("horospherical data") {
  auto q = NumberField::rationals();
  auto diag = [&](std::vector<Rational> d) {
    std::vector<FieldElement> e;
    for (auto& x : d) e.push_back(q.from_rational(x));
    return MatrixK::diagonal(e);
  };
  auto h = horospherical_data(diag({4, 1, Rational(1, 4)}), Place::real(0));
  CHECK(h.w == WeylPerm::identity(3));
  CHECK(h.psi == PsiSet::empty(3));
  h = horospherical_data(diag({1, 1, 1}), Place::real(0));
  CHECK(h.psi.is_full());
  auto t = diag({Rational(1, 4), 4, 1});
  h = horospherical_data(t, Place::real(0));
  CHECK(h.w == WeylPerm({1, 2, 0}));
  CHECK(h.psi == PsiSet::empty(3));
  // Conjugation by t^-1 shrinks every root space of the radical of w P w^-1.
  MatrixK tinv = t.inverse();
  auto flag = parabolic_flag(h.w, h.psi);
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b) {
      int i = flag.blocks()[a][0], j = flag.blocks()[b][0];
      MatrixK u = MatrixK::identity(q, 3);
      u(i, j) = q.one();
      MatrixK c = tinv * u * t;
      CHECK(abs_value(c(i, j), Place::real(0)) < 1);
    }
  h = horospherical_data(diag({2, -2, Rational(1, 4)}), Place::real(0));
  CHECK(h.psi == PsiSet(3, 0b01));
  h = horospherical_data(diag({3, 12, Rational(1, 36)}), Place::finite(2));
  CHECK(h.w == WeylPerm({2, 0, 1}));
}

TEST_CASE("cone split") {
  auto vec = [](std::initializer_list<long> v) {
    QVector out;
    for (long x : v) out.emplace_back(x);
    return out;
  };
  auto check_split = [&](const std::vector<QVector>& vs, const QVector& v) {
    auto s = cone_split(vs, v);
    CHECK(dot(s.w, vs[s.i0]) < 0);
    QMatrix others;
    for (int i = 0; i < static_cast<int>(vs.size()); ++i)
      if (i != s.i0) {
        CHECK(dot(s.w, vs[i]) > 0);
        others.push_back(vs[i]);
      }
    CHECK(rank(others) == static_cast<int>(v.size()));
  };
  CHECK_THROWS_AS(cone_split({vec({1}), vec({2})}, vec({1})), Error);
  check_split({vec({1, 0}), vec({0, 1}), vec({1, 1})}, vec({1, 1}));
  check_split({vec({1, 0}), vec({0, 1}), vec({2, 1}), vec({1, 2})}, vec({1, 1}));
  check_split({vec({1, 0, 0}), vec({0, 1, 0}), vec({0, 0, 1}), vec({1, 1, 1}), vec({2, 1, 3})}, vec({1, 1, 1}));
  CHECK_THROWS_AS(cone_split({vec({1, 0}), vec({-1, 1}), vec({0, 1})}, vec({1, 0})), Error);
}

TEST_CASE("Fourier-Motzkin") {
  QMatrix a{{Rational(1), Rational(0)}, {Rational(-1), Rational(0)}};
  CHECK(!fourier_motzkin_feasible(a, {Rational(1), Rational(0)}));
  auto x = fourier_motzkin_feasible(a, {Rational(1, 3), Rational(-1, 2)});
  REQUIRE(x);
  CHECK((*x)[0] >= Rational(1, 3));
  CHECK((*x)[0] <= Rational(1, 2));
}
