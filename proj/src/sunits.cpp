#include "ldorb/sunits.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ldorb/errors.hpp"
#include "ldorb/lattice.hpp"
#include "ldorb/qlinalg.hpp"

namespace ldorb {

Rational trace(const FieldElement& x) {
  NumberField k = x.field();
  Rational t(0);
  FieldElement basis = k.one();
  for (int j = 0; j < k.degree(); ++j) {
    t += (x * basis).coords()[j];
    basis = basis * k.generator();
  }
  return t;
}

namespace {

int euler_phi(int n) {
  int result = n;
  for (int p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      result -= result / p;
    }
  if (n > 1) result -= result / n;
  return result;
}

std::optional<Rational> rational_sqrt(const Rational& q) {
  if (q < 0) return std::nullopt;
  Integer a, b;
  if (!mpz_root(a.get_mpz_t(), q.get_num_mpz_t(), 2) || !mpz_root(b.get_mpz_t(), q.get_den_mpz_t(), 2)) return std::nullopt;
  Rational r(a, b);
  r.canonicalize();
  return r;
}

bool is_integer_square_minus(const Integer& d, const Integer& u, int sign, Integer& t) {
  Integer v = d * u * u + 4 * sign;
  if (v < 0) return false;
  if (!mpz_perfect_square_p(v.get_mpz_t())) return false;
  mpz_sqrt(t.get_mpz_t(), v.get_mpz_t());
  return true;
}

}  // namespace

int torsion_order(const NumberField& k) {
  if (k.degree() == 1 || k.real_places() > 0) return 2;
  int best = 2;
  for (int n = 3; n <= 16 * k.degree() * k.degree() + 2; ++n) {
    if (k.degree() % euler_phi(n) != 0) continue;
    best = std::max(best, static_cast<int>(nth_roots(k.one(), n).size()));
  }
  return best;
}

FieldElement real_quadratic_fundamental_unit(const NumberField& k) {
  if (k.degree() != 2 || k.real_places() != 2)
    throw Error(ErrorKind::NeedSuppliedUnits, "built-in fundamental units cover real quadratic fields only");
  const Rational b = k.minpoly().coeff(1), c = k.minpoly().coeff(0);
  Rational disc;
  if (k.has_integral_basis()) {
    auto basis = k.integral_basis();
    QMatrix tr(2, QVector(2));
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) tr[i][j] = trace(basis[i] * basis[j]);
    disc = det(tr);
  } else {
    if (!is_integer(b) || !is_integer(c))
      throw Error(ErrorKind::NeedSuppliedUnits, "Z[theta] is not an order; supply an integral basis or units");
    disc = b * b - 4 * c;
  }
  if (!is_integer(disc)) throw Error(ErrorKind::NeedSuppliedUnits, "integral basis has a non-integral discriminant");
  const Integer d = disc.get_num();
  // sqrt(disc) = r (2 theta + b), positive at the larger real root.
  auto r = rational_sqrt(disc / (b * b - 4 * c));
  if (!r) throw Error(ErrorKind::NeedSuppliedUnits, "integral basis does not define an order of K");
  const FieldElement sqrt_d = (k.generator() * Rational(2) + k.from_rational(b)) * *r;

  // Smallest u > 0 with t^2 - d u^2 = +-4. Small u by direct search, then
  // the convergents p/q of sqrt(d): every solution with u > 1000 has t/u or
  // (t/2)/(u/2) among them.
  std::optional<std::pair<Integer, Integer>> best;
  Integer t;
  for (long u = 1; u <= 1000 && !best; ++u)
    for (int sign : {-1, 1})
      if (!best && is_integer_square_minus(d, Integer(u), sign, t)) best = {t, Integer(u)};
  if (!best) {
    Integer a0;
    mpz_sqrt(a0.get_mpz_t(), d.get_mpz_t());
    Integer p_prev(1), p = a0, q_prev(0), q(1);
    Integer P(0), Q(1), a = a0;
    for (int step = 0; step < 200000 && !best; ++step) {
      Integer norm = p * p - d * q * q;
      if (norm == 4 || norm == -4)
        best = {p, q};
      else if (norm == 1 || norm == -1)
        best = {2 * p, 2 * q};
      P = a * Q - P;
      Q = (d - P * P) / Q;
      a = (a0 + P) / Q;
      Integer pn = a * p + p_prev, qn = a * q + q_prev;
      p_prev = p;
      q_prev = q;
      p = pn;
      q = qn;
    }
    if (!best) throw Error(ErrorKind::NeedSuppliedUnits, "fundamental unit search exceeded its budget");
  }
  FieldElement eps = (k.from_rational(Rational(best->first)) + sqrt_d * Rational(best->second)) * Rational(1, 2);
  if (!k.is_integral(eps) || !k.is_integral(eps.inverse()))
    throw Error(ErrorKind::InternalError, "computed fundamental unit is not a unit");
  return eps;
}

UnitGroup unit_group_build(const PlaceSet& s, const std::optional<std::vector<FieldElement>>& supplied) {
  const NumberField& k = s.field();
  UnitGroup g{s, {}, 2, {}};
  if (supplied) {
    g.fundamental_units = *supplied;
  } else if (k.degree() == 1) {
    for (auto p : s.finite_primes()) g.fundamental_units.push_back(k.from_rational(Rational(static_cast<long>(p))));
  } else if (k.degree() == 2 && k.real_places() == 2) {
    g.fundamental_units.push_back(real_quadratic_fundamental_unit(k));
  } else {
    throw Error(ErrorKind::NeedSuppliedUnits, "supply fundamental units for this field");
  }
  g.torsion_order = torsion_order(k);
  const int r = static_cast<int>(s.size());
  if (g.rank() != r - 1)
    throw Error(ErrorKind::NotAUnit, "expected " + std::to_string(r - 1) + " units (Dirichlet rank), got " +
                                         std::to_string(g.rank()));
  for (const auto& u : g.fundamental_units) {
    if (u.is_zero() || !s.is_s_integral(u) || !s.is_s_integral(u.inverse()))
      throw Error(ErrorKind::NotAUnit, u.str() + " is not an S-unit");
    std::vector<Real> row;
    Real sum(0);
    for (const auto& v : s.places()) {
      row.push_back(log(abs_value(u, v)));
      sum += row.back();
    }
    if (abs(sum) > Real("1e-9")) throw Error(ErrorKind::NotAUnit, u.str() + " violates the product formula");
    g.log_matrix.push_back(std::move(row));
  }
  if (g.rank() > 0) {
    auto gs = gram_schmidt(g.log_matrix);
    for (const auto& n2 : gs.norms2)
      if (sqrt(n2) < Real("1e-9")) throw Error(ErrorKind::NotAUnit, "units are multiplicatively dependent");
  }
  return g;
}

namespace {

UnitReduction finish_reduction(const std::vector<Real>& loga, const UnitGroup& u, std::vector<std::int64_t> e) {
  UnitReduction out;
  out.exponents = std::move(e);
  out.kappa = 1;
  Real worst(0);
  for (std::size_t v = 0; v < loga.size(); ++v) {
    Real y = loga[v];
    for (int j = 0; j < u.rank(); ++j) y += Real(out.exponents[j]) * u.log_matrix[j][v];
    out.reduced.push_back(exp(y));
    worst = std::max(worst, abs(y));
  }
  out.kappa = exp(worst);
  return out;
}

std::vector<Real> checked_logs(const std::vector<Real>& a, const UnitGroup& u) {
  if (a.size() != u.places.size()) throw Error(ErrorKind::DomainError, "one value per place is required");
  std::vector<Real> loga;
  Real sum(0);
  for (const auto& x : a) {
    if (x <= 0) throw Error(ErrorKind::DomainError, "values must be positive");
    loga.push_back(log(x));
    sum += loga.back();
  }
  if (abs(sum) > Real("1e-6")) throw Error(ErrorKind::DomainError, "product of the values is not 1");
  return loga;
}

}  // namespace

UnitReduction unit_reduce(const std::vector<Real>& a, const UnitGroup& u, int m) {
  if (m < 1) throw Error(ErrorKind::DomainError, "m must be positive");
  auto loga = checked_logs(a, u);
  const int rank = u.rank();
  if (rank == 0) return finish_reduction(loga, u, {});
  RealMatrix<Real> basis(rank);
  for (int j = 0; j < rank; ++j)
    for (const auto& x : u.log_matrix[j]) basis[j].push_back(x * m);
  auto gs = gram_schmidt(basis);
  for (const auto& n2 : gs.norms2)
    if (n2 < Real("1e-24")) throw Error(ErrorKind::DegenerateLattice, "log lattice is degenerate");
  std::vector<std::vector<std::int64_t>> transform;
  auto reduced = lll_reduce(basis, &transform);
  std::vector<Real> target;
  for (const auto& x : loga) target.push_back(-x);
  auto c = babai_nearest_plane(reduced, target);
  std::vector<std::int64_t> e(rank, 0);
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < rank; ++j) e[j] += c[i] * transform[i][j];
  for (auto& x : e) x *= m;
  return finish_reduction(loga, u, std::move(e));
}

UnitReduction unit_reduce_brute_force(const std::vector<Real>& a, const UnitGroup& u, int m, int bound) {
  auto loga = checked_logs(a, u);
  const int rank = u.rank();
  std::vector<std::int64_t> k(rank, -bound), best_e;
  Real best(-1);
  while (true) {
    std::vector<std::int64_t> e(k);
    for (auto& x : e) x *= m;
    Real worst(0);
    for (std::size_t v = 0; v < loga.size(); ++v) {
      Real y = loga[v];
      for (int j = 0; j < rank; ++j) y += Real(e[j]) * u.log_matrix[j][v];
      worst = std::max(worst, abs(y));
    }
    if (best < 0 || worst < best) {
      best = worst;
      best_e = e;
    }
    int j = 0;
    while (j < rank && ++k[j] > bound) k[j++] = -bound;
    if (j == rank) break;
  }
  return finish_reduction(loga, u, best_e);
}

std::string to_string(ClosureKind k) {
  switch (k) {
    case ClosureKind::Discrete:
      return "discrete";
    case ClosureKind::Ray:
      return "ray";
    case ClosureKind::CircleTimesCyclic:
      return "circle_times_cyclic";
    case ClosureKind::Spiral:
      return "spiral";
    case ClosureKind::Full:
      return "full";
  }
  return "discrete";
}

namespace {

// Orthonormal basis of the span of the rows (Gram-Schmidt with a relative
// cutoff).
RealMatrix<Real> orthonormal_rows(const RealMatrix<Real>& rows, const Real& cutoff) {
  RealMatrix<Real> out;
  for (auto v : rows) {
    for (const auto& q : out) {
      Real c = dot_rows(v, q);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * q[i];
    }
    Real n = sqrt(dot_rows(v, v));
    if (n <= cutoff) continue;
    for (auto& x : v) x /= n;
    out.push_back(std::move(v));
  }
  return out;
}

Integer to_integer(const Real& x) { return floor_to_integer(x + Real("0.5")); }

std::vector<Integer> primitive(const QVector& v) {
  Integer l(1), g(0);
  for (const auto& x : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  std::vector<Integer> out;
  for (const auto& x : v) {
    Rational y = x * Rational(l);
    out.push_back(y.get_num());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), y.get_num_mpz_t());
  }
  if (g != 0)
    for (auto& x : out) x /= g;
  return out;
}

}  // namespace

UnitClosure unit_closure_classify(const UnitGroup& u, const Place& v1, const ClosureOptions& opt) {
  const NumberField& k = u.places.field();
  if (std::find(u.places.places().begin(), u.places.places().end(), v1) == u.places.places().end())
    throw Error(ErrorKind::DomainError, "v1 is not in S");
  const int r = static_cast<int>(u.places.size());
  UnitClosure out;
  const bool complex_place = v1.kind == PlaceKind::Complex;
  const int d = complex_place ? 2 : 1;

  // Generators of the image in R (real: log|x|) or R x R/2piZ (complex:
  // (log|x|, arg x)); at complex places the torsion generator is appended.
  RealMatrix<Real> gens;
  for (const auto& x : u.fundamental_units) {
    if (v1.kind == PlaceKind::Finite) {
      gens.push_back({log(abs_value(x, v1))});
      continue;
    }
    Complex z = k.embed(x, v1.root_index(k));
    if (complex_place)
      gens.push_back({log(abs(z)), atan2(z.imag(), z.real())});
    else
      gens.push_back({log(abs(z))});
  }
  if (complex_place) gens.push_back({Real(0), 2 * real_pi() / u.torsion_order});
  const int m = static_cast<int>(gens.size());
  if (m == 0) {
    out.notes.push_back("trivial unit group");
    return out;
  }
  const Real noise = ldexp(Real(1), -(k.precision_bits() - 8));
  Real scale(1);
  for (const auto& g : gens)
    for (const auto& x : g) scale = std::max(scale, abs(x));

  // Columns of G are the generators; W = Im G^T inside R^m.
  RealMatrix<Real> g_rows(d, std::vector<Real>(m));
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < d; ++i) g_rows[i][j] = gens[j][i];
  auto w_basis = orthonormal_rows(g_rows, noise * scale * m);
  const int s = static_cast<int>(w_basis.size());
  RealMatrix<Real> unit_rows(m, std::vector<Real>(m, Real(0)));
  for (int j = 0; j < m; ++j) unit_rows[j][j] = 1;
  RealMatrix<Real> span = w_basis;
  span.insert(span.end(), unit_rows.begin(), unit_rows.end());
  auto full = orthonormal_rows(span, Real("1e-20"));
  RealMatrix<Real> ker(full.begin() + s, full.end());  // orthonormal basis of ker G

  const Real h = opt.height_bound;
  std::vector<std::vector<Integer>> relations;
  RealMatrix<Real> lattice;
  if (ker.empty()) {
    // Every integer vector lies in W.
    for (int j = 0; j < m; ++j) {
      std::vector<Integer> e(m, 0);
      e[j] = 1;
      relations.push_back(e);
    }
    out.certificate_margin = std::numeric_limits<double>::infinity();
  } else {
    const int kd = static_cast<int>(ker.size());
    const Real big = pow(10 * sqrt(Real(m)) * h, Real(m) / Real(kd));
    if (big * h * noise * scale * m > Real("0.01"))
      throw Error(ErrorKind::InconclusivePrecision, "precision too low for the requested height bound");
    for (int j = 0; j < m; ++j) {
      std::vector<Real> row(m + kd, Real(0));
      row[j] = 1;
      for (int c = 0; c < kd; ++c) row[m + c] = big * ker[c][j];
      lattice.push_back(std::move(row));
    }
    auto reduced = lll_reduce(lattice);
    RealMatrix<Real> rel_rows, other_rows;
    for (const auto& row : reduced) {
      Real tail(0);
      for (int c = 0; c < kd; ++c) tail += row[m + c] * row[m + c];
      if (sqrt(tail) < Real("0.5")) {
        std::vector<Integer> z;
        for (int j = 0; j < m; ++j) z.push_back(to_integer(row[j]));
        relations.push_back(std::move(z));
        rel_rows.push_back(row);
      } else {
        other_rows.push_back(row);
      }
    }
    RealMatrix<Real> ordered = rel_rows;
    ordered.insert(ordered.end(), other_rows.begin(), other_rows.end());
    auto gs = gram_schmidt(ordered);
    Real min_other(-1);
    for (std::size_t i = rel_rows.size(); i < ordered.size(); ++i) {
      Real n = sqrt(gs.norms2[i]);
      if (min_other < 0 || n < min_other) min_other = n;
    }
    if (min_other >= 0) {
      out.certificate_margin = (min_other / h).convert_to<double>();
      if (min_other <= h)
        throw Error(ErrorKind::InconclusivePrecision, "integer relation search is inconclusive at height " +
                                                          std::to_string(opt.height_bound));
    } else {
      out.certificate_margin = std::numeric_limits<double>::infinity();
    }
  }
  out.relations = relations;
  out.relation_rank = static_cast<int>(relations.size());
  out.identity_component_dim = std::max(0, s - out.relation_rank);

  // Direction of the identity component when it is a line.
  std::vector<Real> direction;
  if (out.identity_component_dim == 1) {
    // Column space of G: orthonormal basis E (d-dim vectors).
    RealMatrix<Real> cols;
    for (int j = 0; j < m; ++j) cols.push_back(gens[j]);
    auto e = orthonormal_rows(cols, noise * scale * m);
    // phi' solves G'^T phi' = lambda with G' = E^T G; V' is the complement.
    RealMatrix<Real> phis;
    for (const auto& lam : relations) {
      const std::size_t sd = e.size();
      RealMatrix<Real> gp(sd, std::vector<Real>(m));
      for (std::size_t a = 0; a < sd; ++a)
        for (int j = 0; j < m; ++j) gp[a][j] = dot_rows(e[a], gens[j]);
      // Normal equations (G' G'^T) phi = G' lambda.
      RealMatrix<Real> nm(sd, std::vector<Real>(sd + 1, Real(0)));
      for (std::size_t a = 0; a < sd; ++a) {
        for (std::size_t b = 0; b < sd; ++b) nm[a][b] = dot_rows(gp[a], gp[b]);
        for (int j = 0; j < m; ++j) nm[a][sd] += gp[a][j] * Real(lam[j].get_str());
      }
      for (std::size_t c = 0; c < sd; ++c) {
        std::size_t piv = c;
        for (std::size_t rr = c + 1; rr < sd; ++rr)
          if (abs(nm[rr][c]) > abs(nm[piv][c])) piv = rr;
        std::swap(nm[c], nm[piv]);
        for (std::size_t rr = 0; rr < sd; ++rr) {
          if (rr == c) continue;
          Real f = nm[rr][c] / nm[c][c];
          for (std::size_t cc = c; cc <= sd; ++cc) nm[rr][cc] -= f * nm[c][cc];
        }
      }
      std::vector<Real> phi_d(d, Real(0));
      for (std::size_t a = 0; a < sd; ++a)
        for (int i = 0; i < d; ++i) phi_d[i] += nm[a][sd] / nm[a][a] * e[a][i];
      phis.push_back(std::move(phi_d));
    }
    RealMatrix<Real> all = orthonormal_rows(phis, Real("1e-30"));
    const std::size_t nphi = all.size();
    all.insert(all.end(), e.begin(), e.end());
    auto basis = orthonormal_rows(all, Real("1e-20"));
    if (basis.size() > nphi) direction = basis[nphi];
  }

  if (d == 1) {
    out.kind = out.identity_component_dim == 0 ? ClosureKind::Discrete : ClosureKind::Ray;
  } else if (out.identity_component_dim == 0) {
    out.kind = ClosureKind::Discrete;
  } else if (out.identity_component_dim == 2) {
    out.kind = ClosureKind::Full;
  } else {
    const Real tol("1e-12");
    if (abs(direction[0]) < tol) {
      out.kind = ClosureKind::CircleTimesCyclic;
    } else if (abs(direction[1]) < tol) {
      out.kind = ClosureKind::Ray;
    } else {
      out.kind = ClosureKind::Spiral;
      if (direction[1] < 0)
        for (auto& x : direction) x = -x;
      out.alpha = direction[0].convert_to<double>();
      out.beta = direction[1].convert_to<double>();
    }
  }

  // Witness: two elements of the image inside the identity component.
  if (out.identity_component_dim >= 1) {
    QMatrix rel;
    for (const auto& z : relations) {
      QVector row;
      for (const auto& x : z) row.emplace_back(x);
      rel.push_back(std::move(row));
    }
    QMatrix kernel = rel.empty() ? QMatrix{} : nullspace(rel, m);
    if (rel.empty())
      for (int j = 0; j < m; ++j) {
        QVector e(m, Rational(0));
        e[j] = 1;
        kernel.push_back(e);
      }
    auto coordinate = [&](const std::vector<Integer>& z) {
      std::vector<Real> y(d, Real(0));
      for (int j = 0; j < m; ++j)
        for (int i = 0; i < d; ++i) y[i] += Real(z[j].get_str()) * gens[j][i];
      if (direction.empty()) return y[0];
      return dot_rows(y, direction);
    };
    std::vector<std::pair<std::vector<Integer>, Real>> elems;
    for (const auto& kv : kernel) {
      auto z = primitive(kv);
      Real t = coordinate(z);
      if (abs(t) > Real("1e-20")) elems.emplace_back(z, t);
    }
    if (elems.size() >= 2) {
      ClosureWitness w;
      w.elements = {elems[0].first, elems[1].first};
      w.multiples = 10000;
      const Real ratio = elems[1].second / elems[0].second;
      std::vector<double> fr;
      double min_ret = 1;
      for (int q = 1; q <= w.multiples; ++q) {
        Real x = q * ratio;
        x -= floor(x);
        double xd = x.convert_to<double>();
        fr.push_back(xd);
        min_ret = std::min(min_ret, std::min(xd, 1 - xd));
      }
      std::sort(fr.begin(), fr.end());
      double gap = fr.front() + (1 - fr.back());
      for (std::size_t i = 1; i < fr.size(); ++i) gap = std::max(gap, fr[i] - fr[i - 1]);
      w.min_return = min_ret;
      w.max_gap = gap;
      out.witness = w;
      if (min_ret <= 1e-6) out.notes.push_back("witness returns within 1e-6; density evidence is weak");
    }
  }

  // The known cases act as runtime assertions.
  if (r == 2 && out.kind != ClosureKind::Discrete)
    throw TheoremViolation(ErrorKind::InternalError, "rank one unit group with non-discrete closure");
  if (r >= 3 && v1.kind == PlaceKind::Real && out.kind != ClosureKind::Ray)
    throw TheoremViolation(ErrorKind::InternalError, "real place with r >= 3 must give a ray");
  if (complex_place && out.kind == ClosureKind::Ray) {
    if (opt.cm == CmVerdict::No) throw TheoremViolation(ErrorKind::InternalError, "ray at a complex place of a non-CM field");
    if (opt.cm == CmVerdict::Unknown) out.notes.push_back("ray at a complex place forces K to be CM");
  }
  if (out.kind == ClosureKind::Spiral && opt.cm != CmVerdict::Yes) {
    if (r != 3) throw TheoremViolation(ErrorKind::InternalError, "spiral closure for r != 3 on a field not known to be CM");
    out.notes.push_back("spiral with r = 3: the case left open; reported as found");
  }
  return out;
}

}  // namespace ldorb
