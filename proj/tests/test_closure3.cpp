#include <cmath>
#include <random>

#include "doctest.h"
#include "ldorb/closure3.hpp"
#include "ldorb/errors.hpp"
#include "ldorb/sampling.hpp"

using namespace ldorb;

namespace {

std::vector<Rational> qs(std::initializer_list<long> v) {
  std::vector<Rational> out;
  for (long x : v) out.emplace_back(x);
  return out;
}

MatrixK qmat(const NumberField& k, std::initializer_list<std::initializer_list<long>> rows) {
  QMatrix q;
  for (auto r : rows) q.push_back(qs(r));
  return MatrixK::from_rational(k, q);
}

// Dimension of {t diagonal, trace 0 : t x_i = x_i t for all i}, from the
// linear equations (t_a - t_b) x_ab = 0.
int centralizer_dim_exact(const std::vector<MatrixK>& xs) {
  const int n = xs[0].size();
  QMatrix eqs;
  for (const auto& x : xs)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (a != b && !x(a, b).is_zero()) {
          QVector row(n, Rational(0));
          row[a] = 1;
          row[b] = -1;
          eqs.push_back(row);
        }
  QVector tr(n, Rational(1));
  eqs.push_back(tr);
  return n - rank(eqs);
}

MatrixK block_diag(const NumberField& k, const std::vector<MatrixK>& blocks) {
  int n = 0;
  for (const auto& b : blocks) n += b.size();
  MatrixK m(k, n);
  int off = 0;
  for (const auto& b : blocks) {
    for (int i = 0; i < b.size(); ++i)
      for (int j = 0; j < b.size(); ++j) m(off + i, off + j) = b(i, j);
    off += b.size();
  }
  return m;
}

}  // namespace

TEST_CASE("index partitions form a lattice") {
  for (int n = 1; n <= 4; ++n) {
    auto all = IndexPartition::all(n);
    const int bell[] = {1, 1, 2, 5, 15, 52};
    CHECK(static_cast<int>(all.size()) == bell[n]);
    for (const auto& a : all)
      for (const auto& b : all) {
        CHECK(a.join(b) == b.join(a));
        CHECK(a.meet(b) == b.meet(a));
        CHECK(a.join(a.meet(b)) == a);
        CHECK(a.meet(a.join(b)) == a);
        CHECK(a.refines(a.join(b)));
        CHECK(a.meet(b).refines(a));
        CHECK(a.refines(b) == (a.join(b) == b));
        for (const auto& c : all) CHECK(a.join(b).join(c) == a.join(b.join(c)));
      }
  }
  CHECK(IndexPartition::all(5).size() == 52);
  CHECK(IndexPartition({{2, 3}, {0, 1}}).str() == "{{1,2},{3,4}}");
}

TEST_CASE("centralizer partitions") {
  auto q = NumberField::rationals();
  auto id = MatrixK::identity(q, 4);
  CHECK(centralizer_partition(id) == IndexPartition::singletons(4));
  CHECK(centralizer_partition(id).torus_dim() == 3);
  auto dense = qmat(q, {{1, 1, 1, 1}, {1, 2, 1, 1}, {1, 1, 2, 1}, {1, 1, 1, 2}});
  CHECK(centralizer_partition(dense).block_count() == 1);
  auto bd = block_diag(q, {qmat(q, {{2, 1}, {1, 1}}), qmat(q, {{1, 1}, {1, 2}})});
  CHECK(centralizer_partition(bd).str() == "{{1,2},{3,4}}");
  CHECK(centralizer_dim_exact({bd}) == 1);

  Rng rng(17);
  std::uniform_int_distribution<int> split(0, 3);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<MatrixK> blocks;
    for (int left = 4; left > 0;) {
      int s = std::min(left, 1 + split(rng) % 3);
      blocks.push_back(random_integer_sl(q, s, rng, 3));
      left -= s;
    }
    auto perms = WeylPerm::all(4);
    auto w = perms[rng() % perms.size()].matrix(q);
    auto x = w * block_diag(q, blocks) * w.inverse();
    CHECK(x.det().is_one());
    CHECK(centralizer_partition(x).torus_dim() == centralizer_dim_exact({x}));
  }
}

TEST_CASE("omega search on the block fixture") {
  auto q = NumberField::rationals();
  auto e = MatrixK::identity(q, 4);
  auto g1 = block_diag(q, {qmat(q, {{2, 1}, {1, 1}}), qmat(q, {{1, 1}, {1, 2}})});
  auto pred = maximize_centralizer({g1, e, e}, CmVerdict::No);
  CHECK(pred.partition.str() == "{{1,2},{3,4}}");
  CHECK_FALSE(pred.dense);
  CHECK(pred.max_dim == 1);
  CHECK(pred.tuples_searched == 576);
  CHECK(pred.h.size() == 3);
  CHECK(pred.warnings.empty());

  // Oracle: the best dimension over all tuples from the exact linear system.
  int best = -1;
  for (const auto& a : WeylPerm::all(4))
    for (const auto& b : WeylPerm::all(4))
      best = std::max(best, centralizer_dim_exact({a.matrix(q) * g1, b.matrix(q) * e}));
  CHECK(best == pred.max_dim);

  // Twisting any g_i by a monomial matrix is absorbed by the search.
  auto w = WeylPerm({2, 0, 3, 1}).matrix(q);
  auto twisted = maximize_centralizer({w * g1, e, e}, CmVerdict::No);
  CHECK(twisted.partition == pred.partition);
  auto parallel = maximize_centralizer({g1, e, e}, CmVerdict::No, 2000000, 3);
  CHECK(parallel.partition == pred.partition);
  CHECK(parallel.omegas == pred.omegas);
}

TEST_CASE("omega search: dense and closed cases") {
  auto q = NumberField::rationals();
  auto e2 = MatrixK::identity(q, 2);
  auto g1 = qmat(q, {{1, 1}, {1, 2}});
  auto g2 = qmat(q, {{2, 1}, {1, 1}});
  auto pred = maximize_centralizer({g1, g2, e2}, CmVerdict::No);
  CHECK(pred.dense);
  CHECK(pred.max_dim == 0);
  for (const auto& a : WeylPerm::all(2))
    for (const auto& b : WeylPerm::all(2)) CHECK(centralizer_dim_exact({a.matrix(q) * g1, b.matrix(q) * g2}) == 0);

  auto e3 = MatrixK::identity(q, 3);
  auto closed = maximize_centralizer({e3, e3, e3});
  CHECK(closed.orbit_closed);
  CHECK(closed.max_dim == 2);
  CHECK_FALSE(closed.dense);
  CHECK(closed.warnings.size() == 2);

  CHECK_THROWS_AS(maximize_centralizer({e3, e3}), Error);
  try {
    maximize_centralizer({e3, e3, e3}, CmVerdict::No, 10);
    FAIL("expected budget error");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::SearchBudgetExceeded);
  }
}

TEST_CASE("block subgroups") {
  auto q = NumberField::rationals();
  for (int n = 2; n <= 4; ++n)
    for (const auto& p : IndexPartition::all(n)) {
      if (p.block_count() < 2) continue;
      auto h = block_subgroup(q, p);
      CHECK(h.torus_rank() == n - 1);
      CHECK(h.center_dim() == p.block_count() - 1);
      CHECK(h.derived_is_block_sl());
      for (const auto& x : h.unipotent_generators) CHECK(h.contains(x));
    }
  auto h = block_subgroup(q, IndexPartition({{0, 1}, {2, 3}}));
  CHECK_FALSE(h.contains(qmat(q, {{1, 0, 1, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}})));
}

TEST_CASE("boundedness predicate") {
  auto q = NumberField::rationals();
  auto e = MatrixK::identity(q, 2);
  PsiSet empty = PsiSet::empty(2);
  SequenceSpec pinched{{Rational(1)}, {Rational(-1)}};
  SequenceSpec growing{{Rational(1)}, {Rational(-1, 2)}};
  CHECK(sequence_bounded(e, e, empty, pinched));
  CHECK_FALSE(sequence_bounded(WeylPerm::longest(2).matrix(q), e, empty, pinched));
  CHECK_FALSE(sequence_bounded(qmat(q, {{1, 1}, {1, 2}}), e, empty, growing));
  CHECK(sequence_bounded(qmat(q, {{1, 1}, {1, 2}}), e, empty, pinched));
  try {
    sequence_bounded(e, e, empty, SequenceSpec{{Rational(-1)}, {Rational(-1)}});
    FAIL("expected hypothesis error");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::SpecViolatesHypotheses);
  }
  CHECK_THROWS_AS(sequence_bounded(e, e, PsiSet::full(2), pinched), Error);

  auto e3 = MatrixK::identity(q, 3);
  SequenceSpec mixed{{Rational(0), Rational(2)}, {Rational(0), Rational(-2)}};
  CHECK(sequence_bounded(e3, e3, PsiSet(3, 1), mixed));
  CHECK_THROWS_AS(sequence_bounded(e3, e3, PsiSet::empty(3), mixed), Error);
}

TEST_CASE("limit representative delegates to the orbit representative") {
  auto k = NumberField::create(qs({-2, 0, 1}));
  auto g1 = qmat(k, {{1, 1}, {1, 2}});
  auto g2 = MatrixK::identity(k, 2);
  auto id = WeylPerm::identity(2);
  auto rep = limit_representative(g1, g2, id, id, PsiSet::empty(2));
  CHECK(rep.core.is_monomial());
  CHECK(rep.point1() * rep.point2().inverse() == rep.core);
  auto w0 = WeylPerm::longest(2);
  CHECK_THROWS_AS(limit_representative(w0.matrix(k), g2, id, id, PsiSet::empty(2)), Error);
}

TEST_CASE("systole along diagonal paths") {
  auto q = NumberField::rationals();
  auto s = PlaceSet::archimedean(q);
  auto e = MatrixK::identity(q, 2);
  std::vector<TorusStep> path;
  for (int st = 0; st <= 3; ++st) path.push_back({double(st), {{Real(st), Real(-st)}}});
  auto rep = systole_scan(s, {e}, path, 50);
  REQUIRE(rep.size() == 4);
  for (int st = 0; st <= 3; ++st) CHECK(std::abs(rep[st].systole - std::exp(-st)) < 1e-9);
  CHECK(rep[3].argmin == std::vector<std::string>{"0", "-1"});

  // Monotone in the height.
  Rng rng(3);
  auto g = random_integer_sl(q, 2, rng, 4);
  std::vector<TorusStep> one{{0.5, {{Real("0.5"), Real("-0.5")}}}};
  double prev = 1e300;
  for (int h : {1, 2, 4, 8}) {
    double cur = systole_scan(s, {g}, one, h)[0].systole;
    CHECK(cur <= prev);
    prev = cur;
  }
  CHECK_THROWS_AS(systole_scan(s, {e}, path, 50, 100), Error);
}

TEST_CASE("systole with finite places matches exact enumeration") {
  auto q = NumberField::rationals();
  PlaceSet s(q, {Place::real(0), Place::finite(2), Place::finite(3)});
  auto units = unit_group_build(s);
  auto path = unit_torus_path(units, 2, 0, {1, 0}, 4);
  auto e = MatrixK::identity(q, 2);
  auto g = qmat(q, {{1, 1}, {1, 2}});
  const int h = 6;
  auto rep = systole_scan(s, {e, g, e}, path, h, 50000000, 2);
  auto elems = small_integers(s, h);
  double prev = 1e300;
  for (std::size_t st = 0; st < path.size(); ++st) {
    Real best(-1);
    std::vector<MatrixK> mats{e, g, e};
    for (const auto& a : elems)
      for (const auto& b : elems) {
        if (a.is_zero() && b.is_zero()) continue;
        Real norm(0);
        for (int v = 0; v < 3; ++v)
          for (int i = 0; i < 2; ++i) {
            FieldElement y = mats[v](i, 0) * a + mats[v](i, 1) * b;
            norm = std::max(norm, abs_value(y, s[v]) * exp(path[st].log_abs[v][i]));
          }
        if (best < 0 || norm < best) best = norm;
      }
    CHECK(std::abs(rep[st].systole - best.convert_to<double>()) < 1e-12);
    CHECK(rep[st].systole <= prev * (1 + 1e-12));
    prev = rep[st].systole;
  }
}
