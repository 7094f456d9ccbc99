#include "ldorb/strata.hpp"

#include <sstream>

#include "ldorb/errors.hpp"
#include "ldorb/parallel.hpp"

namespace ldorb {

ParabolicPair ParabolicPair::make(const WeylPerm& w1, const PsiSet& psi, const WeylPerm& w2) {
  ParabolicPair p;
  p.w1 = coset_rep(w1, psi);
  p.psi = psi;
  p.w2 = coset_rep(w2, psi);
  p.left_flag = opposite_parabolic_flag(p.w1, psi);
  p.right_flag = parabolic_flag(p.w2, psi);
  return p;
}

bool ParabolicPair::contained_in(const ParabolicPair& o) const {
  return left_flag.refines(o.left_flag) && right_flag.refines(o.right_flag);
}

std::string ParabolicPair::label() const { return "(" + w1.str() + "; " + psi.str() + "; " + w2.str() + ")"; }

bool ParabolicPair::operator==(const ParabolicPair& o) const { return w1 == o.w1 && psi == o.psi && w2 == o.w2; }

bool is_locally_divergent(const std::vector<LocalComponent>& g) {
  for (const auto& c : g)
    if (!c.rational_part) return false;
  return true;
}

bool is_orbit_closed(const std::vector<MatrixK>& g) {
  if (g.empty()) return true;
  MatrixK last_inv = g.back().inverse();
  for (const auto& x : g)
    if (!(x * last_inv).is_monomial()) return false;
  return true;
}

namespace {

struct Triple {
  PsiSet psi;
  WeylPerm w1, w2;
};

std::vector<Triple> all_triples(int n) {
  std::vector<Triple> out;
  for (const auto& psi : PsiSet::all(n)) {
    auto reps = coset_reps(psi);
    for (const auto& a : reps)
      for (const auto& b : reps) out.push_back({psi, a, b});
  }
  return out;
}

}  // namespace

std::vector<ParabolicPair> admissible_set(const MatrixK& g1, const MatrixK& g2, int workers) {
  if (!g1.det().is_one() || !g2.det().is_one()) throw Error(ErrorKind::Singular, "components must lie in SL_n(K)");
  const MatrixK g = g1 * g2.inverse();
  const auto triples = all_triples(g.size());
  auto hits = parallel_map(triples.size(), workers, [&](std::size_t i) {
    const auto& t = triples[i];
    return generalized_membership(g, t.w1, t.w2, t.psi).has_value();
  });
  std::vector<ParabolicPair> out;
  bool has_top = false, has_bottom = false;
  for (std::size_t i = 0; i < triples.size(); ++i) {
    if (!hits[i]) continue;
    out.push_back(ParabolicPair::make(triples[i].w1, triples[i].psi, triples[i].w2));
    has_top |= triples[i].psi.is_full();
    has_bottom |= triples[i].psi.is_empty();
  }
  if (!has_top || !has_bottom)
    throw TheoremViolation(ErrorKind::InternalError, "admissible set misses G x G or every minimal pair");
  return out;
}

OrbitRep orbit_rep(const MatrixK& g1, const MatrixK& g2, const ParabolicPair& pair) {
  const MatrixK g = g1 * g2.inverse();
  auto f = generalized_membership(g, pair.w1, pair.w2, pair.psi);
  if (!f) throw Error(ErrorKind::NotAdmissible, pair.label() + " is not admissible");
  const NumberField& k = g.field();
  OrbitRep r{pair, f->left, f->right, pair.w1.matrix(k) * f->inner.z * pair.w2.matrix(k).transpose(), g1, g2};
  if (r.left * g * r.right.inverse() != r.core) throw Error(ErrorKind::InternalError, "orbit representative check failed");
  return r;
}

ClosurePoset closure_poset(const MatrixK& g1, const MatrixK& g2, int workers) {
  ClosurePoset p;
  auto pairs = admissible_set(g1, g2, workers);
  p.nodes = parallel_map(pairs.size(), workers, [&](std::size_t i) { return orbit_rep(g1, g2, pairs[i]); });
  const int m = static_cast<int>(p.nodes.size());
  std::vector<std::vector<bool>> below(m, std::vector<bool>(m, false));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      if (a != b && p.nodes[a].pair.contained_in(p.nodes[b].pair)) {
        below[a][b] = true;
        p.edges.emplace_back(a, b);
      }
  for (auto [a, b] : p.edges) {
    bool covering = true;
    for (int c = 0; c < m && covering; ++c)
      if (below[a][c] && below[c][b]) covering = false;
    if (covering) p.hasse.emplace_back(a, b);
  }
  for (int a = 0; a < m; ++a) {
    bool minimal = true;
    for (int c = 0; c < m; ++c)
      if (below[c][a]) minimal = false;
    if (minimal) {
      if (!p.nodes[a].pair.psi.is_empty())
        throw TheoremViolation(ErrorKind::InternalError, "minimal stratum " + p.nodes[a].pair.label() + " is not minimal parabolic");
      p.closed_nodes.push_back(a);
    }
    if (p.nodes[a].pair.psi.is_full()) p.top = a;
  }
  p.bound_total = 0;
  for (const auto& psi : PsiSet::all(g1.size())) p.bound_total += n_psi_count(psi) * n_psi_count(psi);
  Integer n0 = n_psi_count(PsiSet::empty(g1.size()));
  p.bound_closed = n0 * n0;
  if (Integer(m) > p.bound_total || Integer(p.closed_nodes.size()) > p.bound_closed)
    throw TheoremViolation(ErrorKind::InternalError, "stratum count exceeds the upper bound");
  return p;
}

std::string poset_to_dot(const ClosurePoset& p) {
  std::ostringstream os;
  os << "digraph strata {\n  rankdir=BT;\n";
  for (std::size_t i = 0; i < p.nodes.size(); ++i) {
    bool closed = std::find(p.closed_nodes.begin(), p.closed_nodes.end(), static_cast<int>(i)) != p.closed_nodes.end();
    os << "  n" << i << " [label=\"" << p.nodes[i].pair.label() << "\", shape=" << (closed ? "doublecircle" : "ellipse")
       << "];\n";
  }
  for (auto [a, b] : p.hasse) os << "  n" << a << " -> n" << b << ";\n";
  os << "}\n";
  return os.str();
}

bool generic_position(const MatrixK& g) {
  const NumberField& k = g.field();
  const PsiSet borel = PsiSet::empty(g.size());
  auto perms = WeylPerm::all(g.size());
  for (const auto& a : perms) {
    MatrixK left = a.matrix(k).transpose() * g;
    for (const auto& b : perms)
      if (!in_big_cell(left * b.matrix(k), borel)) return false;
  }
  return true;
}

std::string to_string(OrbitVerdict v) {
  switch (v) {
    case OrbitVerdict::Equal:
      return "equal";
    case OrbitVerdict::Distinct:
      return "distinct";
    case OrbitVerdict::Undecided:
      return "undecided";
  }
  return "undecided";
}

bool is_o_integral(const MatrixK& x, const std::vector<unsigned long>& primes) {
  const NumberField& k = x.field();
  for (int i = 0; i < x.size(); ++i)
    for (int j = 0; j < x.size(); ++j) {
      const FieldElement& e = x(i, j);
      if (k.degree() > 1) {
        if (!k.is_integral(e)) return false;
        continue;
      }
      Integer den(e.coords()[0].get_den());
      for (auto p : primes)
        while (mpz_divisible_ui_p(den.get_mpz_t(), p)) mpz_divexact_ui(den.get_mpz_t(), den.get_mpz_t(), p);
      if (den != 1) return false;
    }
  return true;
}

namespace {

// Candidate gamma for the torus solution x = (d, d') scaled to determinant 1.
std::optional<OrbitComparison> try_solution(const OrbitRep& a, const OrbitRep& b, const std::vector<FieldElement>& x,
                                            const std::vector<unsigned long>& primes) {
  const int n = a.g1.size();
  for (const auto& e : x)
    if (e.is_zero()) return std::nullopt;
  std::vector<FieldElement> d(x.begin(), x.begin() + n), dp(x.begin() + n, x.end());
  MatrixK c = a.point1().inverse() * MatrixK::diagonal(d) * b.point1();
  FieldElement det = c.det();
  for (const auto& lambda : nth_roots(det.inverse(), n)) {
    MatrixK gamma = c;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) gamma(i, j) *= lambda;
    if (!is_o_integral(gamma, primes)) continue;
    std::vector<FieldElement> t1, t2;
    for (int i = 0; i < n; ++i) {
      t1.push_back((d[i] * lambda).inverse());
      t2.push_back((dp[i] * lambda).inverse());
    }
    OrbitComparison r;
    r.verdict = OrbitVerdict::Equal;
    r.t1 = MatrixK::diagonal(t1);
    r.t2 = MatrixK::diagonal(t2);
    if (*r.t1 * a.point1() * gamma != b.point1() || *r.t2 * a.point2() * gamma != b.point2())
      throw Error(ErrorKind::InternalError, "orbit equality witness failed its recheck");
    r.gamma = gamma;
    r.reason = "explicit gamma in SL_n(O)";
    return r;
  }
  return std::nullopt;
}

}  // namespace

OrbitComparison orbit_equal_heuristic(const OrbitRep& a, const OrbitRep& b, int height_bound,
                                      const std::vector<unsigned long>& primes) {
  const NumberField& k = a.g1.field();
  const int n = a.g1.size();
  OrbitComparison out;
  if (a.point1() == b.point1() && a.point2() == b.point2()) {
    out.verdict = OrbitVerdict::Equal;
    out.gamma = MatrixK::identity(k, n);
    out.t1 = out.gamma;
    out.t2 = out.gamma;
    out.reason = "identical representatives";
    return out;
  }
  // t1 a1 gamma = b1 and t2 a2 gamma = b2 force M D = D' N with
  // M = a2 a1^-1, N = b2 b1^-1, D = t1^-1, D' = t2^-1, all over K.
  MatrixK m = a.point2() * a.point1().inverse();
  MatrixK nn = b.point2() * b.point1().inverse();
  std::vector<std::vector<FieldElement>> rows;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      std::vector<FieldElement> row(2 * n, k.zero());
      row[j] = m(i, j);
      row[n + i] = -nn(i, j);
      rows.push_back(std::move(row));
    }
  auto basis = nullspace_of(rows, k, 2 * n);
  if (basis.empty()) {
    out.verdict = OrbitVerdict::Distinct;
    out.reason = "no diagonal solution of the torus equation";
    return out;
  }
  if (basis.size() == 1) {
    if (auto r = try_solution(a, b, basis[0], primes)) return *r;
    out.verdict = OrbitVerdict::Distinct;
    out.reason = "the unique torus solution admits no gamma in SL_n(O)";
    return out;
  }
  // Several independent solutions: bounded search over integer combinations.
  const int dim = static_cast<int>(basis.size());
  const long bound = std::max(1, std::min(height_bound, dim <= 2 ? 50 : (dim <= 3 ? 10 : 3)));
  std::vector<long> coef(dim, -bound);
  while (true) {
    bool nonzero = false;
    for (long c : coef) nonzero |= c != 0;
    if (nonzero) {
      std::vector<FieldElement> x(2 * n, k.zero());
      for (int t = 0; t < dim; ++t)
        if (coef[t] != 0)
          for (int i = 0; i < 2 * n; ++i) x[i] += basis[t][i] * Rational(coef[t]);
      if (auto r = try_solution(a, b, x, primes)) return *r;
    }
    int t = 0;
    while (t < dim && ++coef[t] > bound) coef[t++] = -bound;
    if (t == dim) break;
  }
  const MatrixK g = a.g1 * a.g2.inverse();
  if (!(a.pair == b.pair) && generic_position(g)) {
    out.verdict = OrbitVerdict::Distinct;
    out.reason = "distinct pairs in generic position; no gamma up to the height bound";
  } else {
    out.reason = "no gamma up to the height bound";
  }
  return out;
}

}  // namespace ldorb
