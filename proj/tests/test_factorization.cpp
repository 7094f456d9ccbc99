#include "doctest.h"
#include "ldorb/errors.hpp"
#include "ldorb/factorization.hpp"
#include "ldorb/sampling.hpp"

using namespace ldorb;

namespace {

NumberField sqrt2() { return NumberField::create({Rational(-2), Rational(0), Rational(1)}); }

MatrixK qmat(const NumberField& k, std::initializer_list<std::initializer_list<long>> rows) {
  QMatrix q;
  for (auto r : rows) {
    QVector v;
    for (long x : r) v.emplace_back(x);
    q.push_back(v);
  }
  return MatrixK::from_rational(k, q);
}

}  // namespace

TEST_CASE("bruhat decomposition") {
  auto q = NumberField::rationals();
  auto up = qmat(q, {{1, 2, 3}, {0, 1, 4}, {0, 0, 1}});
  CHECK(bruhat(up).w == WeylPerm::identity(3));
  auto anti = qmat(q, {{0, -1}, {1, 0}});
  CHECK(bruhat(anti).w == WeylPerm::longest(2));
  CHECK_THROWS_AS(bruhat(qmat(q, {{2, 0}, {0, 1}})), Error);

  auto k = sqrt2();
  Rng rng(5);
  auto perms = WeylPerm::all(3);
  for (int s = 0; s < 300; ++s) {
    MatrixK g = random_sl(k, 3, rng);
    auto d = bruhat(g);
    CHECK(d.b1.is_upper_triangular());
    CHECK(d.b2.is_upper_triangular());
    CHECK(d.b1 * d.w.matrix(k) * d.b2 == g);
    if (s < 50) {
      int hits = 0;
      for (const auto& w : perms)
        if (in_bruhat_cell(g, w)) {
          ++hits;
          CHECK(w == d.w);
        }
      CHECK(hits == 1);
      // Invariance under multiplication by upper triangular matrices.
      MatrixK b = qmat(k, {{2, 1, -1}, {0, 1, 3}, {0, 0, 1}});
      b(0, 0) = k.generator();
      b(2, 2) = (k.generator() * k.from_rational(Rational(1, 2)));
      CHECK(bruhat(b * g * b).w == d.w);
    }
  }
}

TEST_CASE("big cell factorization") {
  auto q = NumberField::rationals();
  auto id = MatrixK::identity(q, 3);
  auto f = big_cell_factor(id, PsiSet::empty(3));
  REQUIRE(f);
  CHECK(f->v_minus.is_identity());
  CHECK(f->z.is_identity());
  CHECK(f->v_plus.is_identity());
  CHECK(!big_cell_factor(qmat(q, {{0, -1}, {1, 0}}), PsiSet::empty(2)));
  auto g = qmat(q, {{1, 1, 0}, {1, 2, 1}, {0, 1, 2}});
  f = big_cell_factor(g, PsiSet::empty(3));
  REQUIRE(f);
  CHECK(f->v_minus * f->z * f->v_plus == g);

  auto lu = big_cell_factor(qmat(q, {{1, 1}, {1, 2}}), PsiSet::empty(2));
  REQUIRE(lu);
  CHECK(lu->v_minus == qmat(q, {{1, 0}, {1, 1}}));
  CHECK(lu->z.is_identity());
  CHECK(lu->v_plus == qmat(q, {{1, 1}, {0, 1}}));

  auto k = sqrt2();
  Rng rng(9);
  for (int s = 0; s < 200; ++s) {
    MatrixK m = random_sl(k, 3, rng);
    for (const auto& psi : PsiSet::all(3)) {
      auto a = big_cell_factor(m, psi);
      CHECK(bool(a) == in_big_cell(m, psi));
      if (!a) continue;
      CHECK(is_block_lower_unipotent(a->v_minus, psi));
      CHECK(is_block_diagonal(a->z, psi));
      CHECK(is_block_upper_unipotent(a->v_plus, psi));
      auto b = big_cell_factor_transposed(m, psi);
      REQUIRE(b);
      CHECK(a->v_minus == b->v_minus);
      CHECK(a->z == b->z);
      CHECK(a->v_plus == b->v_plus);
    }
  }
}

TEST_CASE("generalized membership") {
  auto q = NumberField::rationals();
  auto w1 = WeylPerm({1, 0, 2}), w2 = WeylPerm({2, 0, 1});
  MatrixK g = w1.matrix(q) * w2.matrix(q).transpose();
  auto f = generalized_membership(g, w1, w2, PsiSet::full(3));
  REQUIRE(f);
  CHECK(f->left.is_identity());
  CHECK(f->right.is_identity());

  auto m = qmat(q, {{1, 1}, {1, 2}});
  int count = 0;
  for (const auto& a : WeylPerm::all(2))
    for (const auto& b : WeylPerm::all(2)) {
      MatrixK x = a.matrix(q).transpose() * m * b.matrix(q);
      bool expect = !x(0, 0).is_zero();
      auto r = generalized_membership(m, a, b, PsiSet::empty(2));
      CHECK(bool(r) == expect);
      if (r) {
        ++count;
        MatrixK core = a.matrix(q) * r->inner.z * b.matrix(q).transpose();
        CHECK(r->left * m * r->right.inverse() == core);
      }
    }
  CHECK(count == 4);

  Rng rng(3);
  for (int s = 0; s < 30; ++s) {
    MatrixK x = random_sl(q, 3, rng);
    auto id = WeylPerm::identity(3);
    for (const auto& psi : PsiSet::all(3)) {
      auto a = generalized_membership(x, id, id, psi);
      auto b = big_cell_factor(x, psi);
      CHECK(bool(a) == bool(b));
      if (a) CHECK(a->inner.v_plus == b->v_plus);
    }
  }
}

TEST_CASE("relative bruhat") {
  auto q = NumberField::rationals();
  std::vector<FieldElement> d{q.from_rational(2), q.from_rational(3), q.from_rational(Rational(1, 6))};
  auto r = relative_bruhat(MatrixK::diagonal(d), PsiSet::empty(3));
  CHECK(r.w == WeylPerm::identity(3));
  CHECK(r.v_plus.is_identity());
  CHECK(r.v_minus.is_identity());
  auto anti = qmat(q, {{0, -1}, {1, 0}});
  r = relative_bruhat(anti, PsiSet::empty(2));
  CHECK(r.w == WeylPerm::longest(2));
  CHECK((r.z * r.v_plus * r.v_minus).is_identity());

  Rng rng(17);
  for (int s = 0; s < 100; ++s) {
    MatrixK g = random_integer_sl(q, 3, rng);
    for (const auto& psi : PsiSet::all(3)) {
      for (const auto& x : relative_bruhat_all(g, psi)) {
        CHECK(is_coset_rep(x.w, psi));
        CHECK(is_block_diagonal(x.z, psi));
        CHECK(is_block_upper_unipotent(x.v_plus, psi));
        CHECK(is_block_lower_unipotent(x.v_minus, psi));
        CHECK(x.w.matrix(q) * x.z * x.v_plus * x.v_minus == g);
      }
    }
  }
}
