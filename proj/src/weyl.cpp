#include "ldorb/weyl.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "ldorb/errors.hpp"

namespace ldorb {

WeylPerm::WeylPerm(std::vector<int> perm) : p_(std::move(perm)) {
  std::vector<bool> seen(p_.size(), false);
  for (int x : p_) {
    if (x < 0 || x >= size() || seen[x]) throw Error(ErrorKind::ConfigInvalid, "not a permutation");
    seen[x] = true;
  }
}

WeylPerm WeylPerm::identity(int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  return WeylPerm(std::move(p));
}

WeylPerm WeylPerm::longest(int n) {
  std::vector<int> p(n);
  for (int j = 0; j < n; ++j) p[j] = n - 1 - j;
  return WeylPerm(std::move(p));
}

std::vector<WeylPerm> WeylPerm::all(int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<WeylPerm> out;
  do {
    out.emplace_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

WeylPerm WeylPerm::operator*(const WeylPerm& o) const {
  if (size() != o.size()) throw Error(ErrorKind::DomainError, "size mismatch");
  std::vector<int> r(size());
  for (int j = 0; j < size(); ++j) r[j] = p_[o.p_[j]];
  return WeylPerm(std::move(r));
}

WeylPerm WeylPerm::inverse() const {
  std::vector<int> r(size());
  for (int j = 0; j < size(); ++j) r[p_[j]] = j;
  return WeylPerm(std::move(r));
}

int WeylPerm::length() const {
  int inv = 0;
  for (int i = 0; i < size(); ++i)
    for (int j = i + 1; j < size(); ++j)
      if (p_[i] > p_[j]) ++inv;
  return inv;
}

int WeylPerm::sign() const { return length() % 2 ? -1 : 1; }

QMatrix WeylPerm::rational_matrix() const {
  const int n = size();
  QMatrix m(n, QVector(n, Rational(0)));
  for (int j = 0; j < n; ++j) m[p_[j]][j] = 1;
  if (sign() < 0) m[p_[n - 1]][n - 1] = -1;
  return m;
}

MatrixK WeylPerm::matrix(const NumberField& k) const { return MatrixK::from_rational(k, rational_matrix()); }

std::string WeylPerm::str() const {
  std::ostringstream os;
  for (int j = 0; j < size(); ++j) os << (j ? " " : "") << p_[j] + 1;
  return os.str();
}

PsiSet::PsiSet(int n, std::uint32_t mask) : n_(n), mask_(mask) {
  if (n < 1 || n > 31) throw Error(ErrorKind::ConfigInvalid, "rank out of range");
  if (mask >> (n - 1)) throw Error(ErrorKind::ConfigInvalid, "simple root index out of range");
}

PsiSet PsiSet::empty(int n) { return PsiSet(n, 0); }
PsiSet PsiSet::full(int n) { return PsiSet(n, (1u << (n - 1)) - 1); }

PsiSet PsiSet::from_composition(const std::vector<int>& sizes) {
  int n = 0;
  std::uint32_t mask = 0;
  for (int c : sizes) {
    if (c < 1) throw Error(ErrorKind::ConfigInvalid, "composition parts must be positive");
    for (int i = 1; i < c; ++i) mask |= 1u << (n + i - 1);
    n += c;
  }
  return PsiSet(n, mask);
}

std::vector<PsiSet> PsiSet::all(int n) {
  std::vector<PsiSet> out;
  for (std::uint32_t m = 0; m < (1u << (n - 1)); ++m) out.emplace_back(n, m);
  return out;
}

std::vector<int> PsiSet::roots() const {
  std::vector<int> r;
  for (int i = 1; i < n_; ++i)
    if (contains(i)) r.push_back(i);
  return r;
}

std::vector<int> PsiSet::composition() const {
  std::vector<int> c{1};
  for (int i = 1; i < n_; ++i) {
    if (contains(i))
      ++c.back();
    else
      c.push_back(1);
  }
  return c;
}

std::vector<std::vector<int>> PsiSet::blocks() const {
  std::vector<std::vector<int>> b{{0}};
  for (int i = 1; i < n_; ++i) {
    if (!contains(i)) b.emplace_back();
    b.back().push_back(i);
  }
  return b;
}

int PsiSet::block_of(int i) const {
  int b = 0;
  for (int k = 1; k <= i; ++k)
    if (!contains(k)) ++b;
  return b;
}

int PsiSet::block_count() const { return n_ - __builtin_popcount(mask_); }
bool PsiSet::is_full() const { return *this == full(n_); }

std::string PsiSet::str() const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (int r : roots()) {
    os << (first ? "" : ",") << r;
    first = false;
  }
  os << '}';
  return os.str();
}

FlagType::FlagType(std::vector<std::vector<int>> blocks) : blocks_(std::move(blocks)) {
  for (auto& b : blocks_) std::sort(b.begin(), b.end());
}

bool FlagType::refines(const FlagType& coarser) const {
  std::size_t i = 0;
  for (const auto& big : coarser.blocks_) {
    std::vector<int> merged;
    while (merged.size() < big.size() && i < blocks_.size()) {
      merged.insert(merged.end(), blocks_[i].begin(), blocks_[i].end());
      ++i;
    }
    std::sort(merged.begin(), merged.end());
    if (merged != big) return false;
  }
  return i == blocks_.size();
}

std::string FlagType::str() const {
  std::ostringstream os;
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    os << (b ? "|" : "");
    for (std::size_t i = 0; i < blocks_[b].size(); ++i) os << (i ? "," : "") << blocks_[b][i] + 1;
  }
  return os.str();
}

FlagType parabolic_flag(const WeylPerm& w, const PsiSet& psi) {
  auto blocks = psi.blocks();
  for (auto& b : blocks)
    for (int& i : b) i = w[i];
  return FlagType(std::move(blocks));
}

FlagType opposite_parabolic_flag(const WeylPerm& w, const PsiSet& psi) {
  auto blocks = psi.blocks();
  std::reverse(blocks.begin(), blocks.end());
  for (auto& b : blocks)
    for (int& i : b) i = w[i];
  return FlagType(std::move(blocks));
}

std::vector<FlagType> flags_with_sizes(const std::vector<int>& sizes) {
  const int n = std::accumulate(sizes.begin(), sizes.end(), 0);
  // Assign a block label to every index; labels listed in each valid pattern.
  std::vector<int> labels;
  for (std::size_t b = 0; b < sizes.size(); ++b) labels.insert(labels.end(), sizes[b], static_cast<int>(b));
  std::vector<FlagType> out;
  do {
    std::vector<std::vector<int>> blocks(sizes.size());
    for (int i = 0; i < n; ++i) blocks[labels[i]].push_back(i);
    out.emplace_back(std::move(blocks));
  } while (std::next_permutation(labels.begin(), labels.end()));
  return out;
}

Integer n_psi_count(const PsiSet& psi) {
  Integer num, den(1), f;
  mpz_fac_ui(num.get_mpz_t(), psi.n());
  for (int c : psi.composition()) {
    mpz_fac_ui(f.get_mpz_t(), c);
    den *= f;
  }
  return num / den;
}

bool in_weyl_subgroup(const WeylPerm& w, const PsiSet& psi) {
  for (int j = 0; j < w.size(); ++j)
    if (psi.block_of(w[j]) != psi.block_of(j)) return false;
  return true;
}

WeylPerm coset_rep(const WeylPerm& w, const PsiSet& psi) {
  std::vector<int> p = w.perm();
  for (const auto& b : psi.blocks()) std::sort(p.begin() + b.front(), p.begin() + b.back() + 1);
  return WeylPerm(std::move(p));
}

bool is_coset_rep(const WeylPerm& w, const PsiSet& psi) { return coset_rep(w, psi) == w; }

std::vector<WeylPerm> coset_reps(const PsiSet& psi) {
  std::vector<WeylPerm> out;
  for (const auto& w : WeylPerm::all(psi.n()))
    if (is_coset_rep(w, psi)) out.push_back(w);
  return out;
}

CellConditions cell_conditions(const WeylPerm& w, const PsiSet& psi) {
  const WeylPerm pi = WeylPerm::longest(w.size()) * w;
  CellConditions r;
  r.cond_i = in_weyl_subgroup(pi, psi);
  r.cond_iii = true;
  for (int i = 0; i < w.size() && r.cond_iii; ++i)
    for (int j = 0; j < w.size(); ++j)
      if (psi.block_of(i) < psi.block_of(j) && pi[i] > pi[j]) {
        r.cond_iii = false;
        break;
      }
  if (r.cond_i != r.cond_iii)
    throw TheoremViolation(ErrorKind::InternalError, "conditions (i) and (iii) disagree for w = " + w.str());
  return r;
}

HorosphericalData horospherical_data(const MatrixK& t, const Place& v) {
  if (!t.is_diagonal()) throw Error(ErrorKind::DomainError, "torus element must be diagonal");
  const int n = t.size();
  HorosphericalData out;
  std::vector<Real> vals(n);
  for (int i = 0; i < n; ++i) vals[i] = abs_value(t(i, i), v);
  // Equality of |.|_v is exact at real and finite places; complex places
  // compare numerically.
  auto equal = [&](int i, int j) {
    switch (v.kind) {
      case PlaceKind::Real:
        return t(i, i) == t(j, j) || t(i, i) == -t(j, j);
      case PlaceKind::Finite:
        return padic_valuation(t(i, i).rational_value(), v.prime) == padic_valuation(t(j, j).rational_value(), v.prime);
      case PlaceKind::Complex:
        break;
    }
    const Real tol = ldexp(Real(1), -(t.field().precision_bits() / 2));
    return abs(vals[i] - vals[j]) <= tol * (vals[i] + vals[j]);
  };
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return !equal(a, b) && vals[a] > vals[b]; });
  std::uint32_t mask = 0;
  for (int i = 1; i < n; ++i)
    if (equal(order[i - 1], order[i])) mask |= 1u << (i - 1);
  out.psi = PsiSet(n, mask);
  out.w = WeylPerm(order);
  for (int i : order) out.values.push_back(vals[i]);
  return out;
}

namespace {

Rational ceil_q(const Rational& q) {
  Integer c;
  mpz_cdiv_q(c.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return Rational(c);
}

Rational floor_q(const Rational& q) {
  Integer f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return Rational(f);
}

// Rows (a | b) meaning a.x >= b.
using Constraint = std::pair<QVector, Rational>;

}  // namespace

std::optional<QVector> fourier_motzkin_feasible(const QMatrix& a, const QVector& b) {
  if (a.empty()) return QVector{};
  const int n = static_cast<int>(a[0].size());
  std::vector<std::vector<Constraint>> stages(n + 1);
  for (std::size_t i = 0; i < a.size(); ++i) stages[n].emplace_back(a[i], b[i]);
  for (int var = n - 1; var >= 0; --var) {
    std::vector<Constraint> pos, neg, next;
    for (const auto& c : stages[var + 1]) {
      if (c.first[var] > 0)
        pos.push_back(c);
      else if (c.first[var] < 0)
        neg.push_back(c);
      else
        next.push_back(c);
    }
    for (const auto& p : pos)
      for (const auto& q : neg) {
        Rational sp = -q.first[var], sq = p.first[var];
        QVector row(n);
        for (int j = 0; j < n; ++j) row[j] = sp * p.first[j] + sq * q.first[j];
        next.emplace_back(std::move(row), sp * p.second + sq * q.second);
      }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    stages[var] = std::move(next);
  }
  for (const auto& c : stages[0])
    if (c.second > 0) return std::nullopt;
  QVector x(n, Rational(0));
  for (int var = 0; var < n; ++var) {
    std::optional<Rational> lo, hi;
    for (const auto& [row, rhs] : stages[var + 1]) {
      if (row[var] == 0) continue;
      Rational rest = rhs;
      for (int j = 0; j < var; ++j) rest -= row[j] * x[j];
      Rational bound = rest / row[var];
      if (row[var] > 0) {
        if (!lo || bound > *lo) lo = bound;
      } else {
        if (!hi || bound < *hi) hi = bound;
      }
    }
    if (lo && hi && *lo > *hi) return std::nullopt;
    if (lo && hi)
      x[var] = ceil_q(*lo) <= *hi ? ceil_q(*lo) : (*lo + *hi) / 2;
    else if (lo)
      x[var] = ceil_q(*lo);
    else if (hi)
      x[var] = floor_q(*hi);
  }
  for (std::size_t i = 0; i < a.size(); ++i)
    if (dot(a[i], x) < b[i]) throw Error(ErrorKind::InternalError, "Fourier-Motzkin back substitution failed");
  return x;
}

ConeSplit cone_split(const std::vector<QVector>& vs, const QVector& v) {
  const int m = static_cast<int>(vs.size());
  const int n = static_cast<int>(v.size());
  if (m <= n) throw Error(ErrorKind::HypothesisViolated, "need more vectors than the dimension");
  for (const auto& x : vs) {
    if (static_cast<int>(x.size()) != n) throw Error(ErrorKind::HypothesisViolated, "dimension mismatch");
    if (dot(x, v) <= 0) throw Error(ErrorKind::HypothesisViolated, "vector outside the open half space");
  }
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      if (rank(QMatrix{vs[i], vs[j]}) < 2)
        throw Error(ErrorKind::HypothesisViolated, "vectors " + std::to_string(i) + " and " + std::to_string(j) + " are proportional");
  if (rank(vs) < n) throw Error(ErrorKind::HypothesisViolated, "vectors do not span");
  for (int i0 = 0; i0 < m; ++i0) {
    QMatrix others;
    for (int i = 0; i < m; ++i)
      if (i != i0) others.push_back(vs[i]);
    if (rank(others) < n) continue;
    QMatrix a;
    QVector b;
    for (int i = 0; i < m; ++i) {
      if (i == i0) {
        QVector neg(n);
        for (int j = 0; j < n; ++j) neg[j] = -vs[i][j];
        a.push_back(std::move(neg));
      } else {
        a.push_back(vs[i]);
      }
      b.emplace_back(1);
    }
    auto w = fourier_motzkin_feasible(a, b);
    if (!w) continue;
    bool ok = dot(*w, vs[i0]) < 0;
    for (int i = 0; i < m && ok; ++i)
      if (i != i0 && dot(*w, vs[i]) <= 0) ok = false;
    if (!ok) throw Error(ErrorKind::InternalError, "cone split failed exact recheck");
    return {i0, *w};
  }
  throw TheoremViolation(ErrorKind::NoSplitFound, "no vector can be split off the cone");
}

}  // namespace ldorb
