#include "ldorb/closure3.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numeric>

#include "ldorb/errors.hpp"
#include "ldorb/parallel.hpp"

namespace ldorb {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
  std::vector<std::vector<int>> blocks() {
    std::vector<std::vector<int>> by_root(parent.size());
    for (int i = 0; i < static_cast<int>(parent.size()); ++i) by_root[find(i)].push_back(i);
    std::vector<std::vector<int>> out;
    for (auto& b : by_root)
      if (!b.empty()) out.push_back(std::move(b));
    return out;
  }
};

}  // namespace

IndexPartition::IndexPartition(std::vector<std::vector<int>> blocks) : blocks_(std::move(blocks)) {
  n_ = 0;
  for (auto& b : blocks_) {
    if (b.empty()) throw Error(ErrorKind::DomainError, "empty block");
    std::sort(b.begin(), b.end());
    n_ += static_cast<int>(b.size());
  }
  std::sort(blocks_.begin(), blocks_.end());
  std::vector<bool> seen(n_, false);
  for (const auto& b : blocks_)
    for (int i : b) {
      if (i < 0 || i >= n_ || seen[i]) throw Error(ErrorKind::DomainError, "blocks do not partition 0..n-1");
      seen[i] = true;
    }
}

IndexPartition IndexPartition::singletons(int n) {
  std::vector<std::vector<int>> b;
  for (int i = 0; i < n; ++i) b.push_back({i});
  return IndexPartition(b);
}

IndexPartition IndexPartition::whole(int n) {
  std::vector<int> b(n);
  std::iota(b.begin(), b.end(), 0);
  return IndexPartition({b});
}

std::vector<IndexPartition> IndexPartition::all(int n) {
  // Restricted growth strings.
  std::vector<IndexPartition> out;
  std::vector<int> a(n, 0);
  std::function<void(int, int)> rec = [&](int i, int used) {
    if (i == n) {
      std::vector<std::vector<int>> b(used);
      for (int j = 0; j < n; ++j) b[a[j]].push_back(j);
      out.emplace_back(b);
      return;
    }
    for (int c = 0; c <= used && c < n; ++c) {
      a[i] = c;
      rec(i + 1, std::max(used, c + 1));
    }
  };
  if (n > 0) rec(0, 0);
  std::sort(out.begin(), out.end());
  return out;
}

int IndexPartition::block_of(int i) const {
  for (int b = 0; b < block_count(); ++b)
    if (std::binary_search(blocks_[b].begin(), blocks_[b].end(), i)) return b;
  throw Error(ErrorKind::DomainError, "index outside the partition");
}

IndexPartition IndexPartition::join(const IndexPartition& o) const {
  if (o.n_ != n_) throw Error(ErrorKind::DomainError, "partitions of different sets");
  UnionFind uf(n_);
  for (const auto* p : {this, &o})
    for (const auto& b : p->blocks_)
      for (std::size_t i = 1; i < b.size(); ++i) uf.unite(b[0], b[i]);
  return IndexPartition(uf.blocks());
}

IndexPartition IndexPartition::meet(const IndexPartition& o) const {
  if (o.n_ != n_) throw Error(ErrorKind::DomainError, "partitions of different sets");
  std::vector<std::vector<int>> out;
  for (const auto& a : blocks_)
    for (const auto& b : o.blocks_) {
      std::vector<int> c;
      std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(c));
      if (!c.empty()) out.push_back(std::move(c));
    }
  return IndexPartition(out);
}

bool IndexPartition::refines(const IndexPartition& o) const {
  for (const auto& b : blocks_) {
    int target = o.block_of(b[0]);
    for (int i : b)
      if (o.block_of(i) != target) return false;
  }
  return o.n_ == n_;
}

std::string IndexPartition::str() const {
  std::string s = "{";
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    if (b) s += ",";
    s += "{";
    for (std::size_t i = 0; i < blocks_[b].size(); ++i) {
      if (i) s += ",";
      s += std::to_string(blocks_[b][i] + 1);
    }
    s += "}";
  }
  return s + "}";
}

IndexPartition centralizer_partition(const MatrixK& x) {
  const int n = x.size();
  UnionFind uf(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && !x(i, j).is_zero()) uf.unite(i, j);
  return IndexPartition(uf.blocks());
}

BlockSubgroup block_subgroup(const NumberField& k, const IndexPartition& p) {
  BlockSubgroup h{p, {}, {}};
  const int n = p.n();
  for (int i = 0; i + 1 < n; ++i) {
    MatrixK d = MatrixK::identity(k, n);
    d(i, i) = k.from_rational(Rational(2));
    d(i + 1, i + 1) = k.from_rational(Rational(1, 2));
    h.torus_generators.push_back(d);
  }
  for (const auto& b : p.blocks())
    for (int i : b)
      for (int j : b)
        if (i != j) {
          MatrixK e = MatrixK::identity(k, n);
          e(i, j) = k.one();
          h.unipotent_generators.push_back(e);
        }
  return h;
}

bool BlockSubgroup::contains(const MatrixK& x) const {
  for (int i = 0; i < x.size(); ++i)
    for (int j = 0; j < x.size(); ++j)
      if (partition.block_of(i) != partition.block_of(j) && !x(i, j).is_zero()) return false;
  return x.det().is_one();
}

int BlockSubgroup::torus_rank() const {
  QMatrix exps;
  for (const auto& d : torus_generators) {
    if (!d.is_diagonal()) return -1;
    QVector row;
    for (int i = 0; i < d.size(); ++i) {
      Rational q = d(i, i).rational_value();
      Integer num = q.get_num(), den = q.get_den();
      long e = 0;
      if (num < 0) num = -num;
      while (num % 2 == 0 && num != 0) num /= 2, ++e;
      while (den % 2 == 0) den /= 2, --e;
      row.emplace_back(e);
    }
    exps.push_back(std::move(row));
  }
  return rank(exps);
}

int BlockSubgroup::center_dim() const {
  const int n = partition.n();
  if (unipotent_generators.empty()) return n - 1;
  MatrixK sum(unipotent_generators.front().field(), n);
  for (const auto& e : unipotent_generators)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j && !e(i, j).is_zero()) sum(i, j) = e.field().one();
  return centralizer_partition(sum).torus_dim();
}

bool BlockSubgroup::derived_is_block_sl() const {
  const int n = partition.n();
  std::vector<std::vector<bool>> reached(n, std::vector<bool>(n, false));
  for (const auto& e : unipotent_generators) {
    if (!contains(e)) return false;
    int gi = -1, gj = -1;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j && !e(i, j).is_zero()) gi = i, gj = j;
    if (gi < 0) return false;
    for (const auto& d : torus_generators) {
      MatrixK c = d * e * d.inverse() * e.inverse();
      if (c.is_identity()) continue;
      MatrixK off = c - MatrixK::identity(c.field(), n);
      bool elementary = true;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (!(i == gi && j == gj) && !off(i, j).is_zero()) elementary = false;
      if (elementary) {
        reached[gi][gj] = true;
        break;
      }
    }
  }
  for (const auto& b : partition.blocks())
    for (int i : b)
      for (int j : b)
        if (i != j && !reached[i][j]) return false;
  return true;
}

ClosurePrediction maximize_centralizer(const std::vector<MatrixK>& g, CmVerdict cm, std::uint64_t budget,
                                       int workers) {
  const int r = static_cast<int>(g.size());
  if (r < 3) throw Error(ErrorKind::DomainError, "closure prediction needs at least three places");
  const int n = g[0].size();
  const NumberField& k = g[0].field();
  for (const auto& x : g) {
    if (x.size() != n || x.field() != k) throw Error(ErrorKind::DomainError, "matrices of different shapes");
    if (!x.det().is_one()) throw Error(ErrorKind::Singular, "g_i must lie in SL_n(K)");
  }
  const auto perms = WeylPerm::all(n);
  const std::uint64_t per = perms.size();
  std::uint64_t total = 1;
  for (int i = 0; i + 1 < r; ++i) {
    if (total > budget / per) throw Error(ErrorKind::SearchBudgetExceeded, "omega search exceeds the budget");
    total *= per;
  }
  if (total > budget) throw Error(ErrorKind::SearchBudgetExceeded, "omega search exceeds the budget");

  const MatrixK gr_inv = g[r - 1].inverse();
  std::vector<std::vector<IndexPartition>> parts(r - 1);
  for (int i = 0; i + 1 < r; ++i) {
    MatrixK y = g[i] * gr_inv;
    for (const auto& w : perms) parts[i].push_back(centralizer_partition(w.matrix(k) * y));
  }

  struct Best {
    int blocks = -1;
    std::uint64_t index = 0;
  };
  // Parallel over the first digit; the remaining digits run sequentially.
  const std::uint64_t inner = total / per;
  auto chunk = [&](std::size_t first) {
    Best best;
    for (std::uint64_t rest = 0; rest < inner; ++rest) {
      IndexPartition p = parts[0][first];
      std::uint64_t x = rest;
      for (int i = r - 2; i >= 1; --i) {
        p = p.join(parts[i][x % per]);
        x /= per;
      }
      if (p.block_count() > best.blocks) best = {p.block_count(), first * inner + rest};
    }
    return best;
  };
  auto results = parallel_map(per, workers, chunk);
  Best best;
  for (const auto& b : results)
    if (b.blocks > best.blocks) best = b;

  ClosurePrediction out;
  out.tuples_searched = total;
  std::uint64_t x = best.index;
  std::vector<std::size_t> digits(r - 1);
  for (int i = r - 2; i >= 0; --i) {
    digits[i] = x % per;
    x /= per;
  }
  IndexPartition p = IndexPartition::singletons(n);
  for (int i = 0; i + 1 < r; ++i) {
    out.omegas.push_back(perms[digits[i]]);
    p = i == 0 ? parts[0][digits[0]] : p.join(parts[i][digits[i]]);
  }
  out.partition = p;
  out.max_dim = p.torus_dim();
  out.dense = out.max_dim == 0;
  out.orbit_closed = is_orbit_closed(g);
  for (int i = 0; i + 1 < r; ++i) out.h.push_back(out.omegas[i].matrix(k).inverse() * g[r - 1]);
  out.h.push_back(g[r - 1]);
  out.cm_guard = cm;
  if (out.orbit_closed) out.warnings.push_back("orbit is closed; the block group is degenerate");
  if (cm == CmVerdict::Yes)
    out.warnings.push_back("K is a CM field: closures need not be homogeneous, prediction not asserted");
  else if (cm == CmVerdict::Unknown)
    out.warnings.push_back("CM status unknown: prediction not asserted");
  return out;
}

bool sequence_bounded(const MatrixK& g1, const MatrixK& g2, const PsiSet& psi, const SequenceSpec& spec) {
  const int n = g1.size();
  if (g2.size() != n || psi.n() != n) throw Error(ErrorKind::DomainError, "size mismatch");
  if (static_cast<int>(spec.place1_rates.size()) != n - 1 || static_cast<int>(spec.place2_rates.size()) != n - 1)
    throw Error(ErrorKind::SpecViolatesHypotheses, "one rate per simple root is required");
  if (psi.is_full()) throw Error(ErrorKind::SpecViolatesHypotheses, "psi must be a proper subset");
  bool pinched = true;
  for (int a = 1; a < n; ++a) {
    const Rational& r1 = spec.place1_rates[a - 1];
    const Rational& r2 = spec.place2_rates[a - 1];
    if (r1 < 0) throw Error(ErrorKind::SpecViolatesHypotheses, "place-1 rates must be bounded below");
    if (psi.contains(a) ? r2 != 0 : r2 >= 0)
      throw Error(ErrorKind::SpecViolatesHypotheses, "place-2 rates must tend to 0 off psi and stay pinched on psi");
    if (r1 + r2 != 0) pinched = false;
  }
  return in_big_cell(g1 * g2.inverse(), psi) && pinched;
}

OrbitRep limit_representative(const MatrixK& g1, const MatrixK& g2, const WeylPerm& w1, const WeylPerm& w2,
                              const PsiSet& psi) {
  return orbit_rep(g1, g2, ParabolicPair::make(w1, psi, w2));
}

std::vector<TorusStep> unit_torus_path(const UnitGroup& u, int n, int row, const std::vector<int>& direction,
                                       int steps) {
  if (static_cast<int>(direction.size()) != u.rank())
    throw Error(ErrorKind::DomainError, "one exponent per fundamental unit");
  if (row < 0 || row >= n - 1) throw Error(ErrorKind::DomainError, "row must precede the last index");
  std::vector<TorusStep> out;
  for (int s = 0; s < steps; ++s) {
    TorusStep t;
    t.parameter = s;
    for (std::size_t v = 0; v < u.places.size(); ++v) {
      std::vector<Real> l(n, Real(0));
      for (int j = 0; j < u.rank(); ++j) l[row] += Real(s * direction[j]) * u.log_matrix[j][v];
      l[n - 1] = -l[row];
      t.log_abs.push_back(std::move(l));
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<FieldElement> small_integers(const PlaceSet& s, int h) {
  const NumberField& k = s.field();
  std::vector<FieldElement> out;
  if (k.degree() == 1) {
    std::vector<long> dens{1};
    for (auto p : s.finite_primes()) {
      std::vector<long> more;
      for (long d : dens)
        for (long q = d * static_cast<long>(p), e = static_cast<long>(p); e <= h; q *= static_cast<long>(p), e *= static_cast<long>(p))
          more.push_back(q);
      dens.insert(dens.end(), more.begin(), more.end());
    }
    std::sort(dens.begin(), dens.end());
    for (long d : dens)
      for (long a = -h; a <= h; ++a)
        if (std::gcd(a, d) == 1 || (d == 1)) out.push_back(k.from_rational(Rational(a, d)));
    return out;
  }
  std::vector<FieldElement> basis;
  if (k.has_integral_basis()) {
    basis = k.integral_basis();
  } else {
    FieldElement p = k.one();
    for (int i = 0; i < k.degree(); ++i, p = p * k.generator()) basis.push_back(p);
  }
  std::vector<long> c(k.degree(), -h);
  while (true) {
    FieldElement x = k.zero();
    for (int i = 0; i < k.degree(); ++i) x += basis[i] * Rational(c[i]);
    out.push_back(x);
    int i = 0;
    while (i < k.degree() && ++c[i] > h) c[i++] = -h;
    if (i == k.degree()) break;
  }
  return out;
}

std::vector<SystoleReport> systole_scan(const PlaceSet& s, const std::vector<MatrixK>& g,
                                        const std::vector<TorusStep>& path, int height, std::uint64_t budget,
                                        int workers) {
  const NumberField& k = s.field();
  const int places = static_cast<int>(s.size());
  if (static_cast<int>(g.size()) != places) throw Error(ErrorKind::DomainError, "one matrix per place is required");
  const int n = g[0].size();
  for (const auto& t : path)
    if (static_cast<int>(t.log_abs.size()) != places) throw Error(ErrorKind::DomainError, "torus step has wrong shape");
  const auto elems = small_integers(s, height);
  const std::uint64_t m = elems.size();
  std::uint64_t total = 1;
  for (int i = 0; i < n; ++i) {
    if (total > budget / m) throw Error(ErrorKind::BudgetExceeded, "systole enumeration exceeds the budget");
    total *= m;
  }

  // Archimedean data in double precision; finite places exactly.
  using C = std::complex<double>;
  std::vector<std::vector<C>> elem_embed(places), g_embed(places);
  for (int v = 0; v < places; ++v) {
    if (!s[v].archimedean()) continue;
    const int ri = s[v].root_index(k);
    for (const auto& e : elems) elem_embed[v].push_back(k.embed_double(e, ri));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g_embed[v].push_back(k.embed_double(g[v](i, j), ri));
  }

  std::vector<SystoleReport> out;
  for (std::size_t step = 0; step < path.size(); ++step) {
    std::vector<std::vector<double>> scale(places, std::vector<double>(n));
    for (int v = 0; v < places; ++v)
      for (int i = 0; i < n; ++i) scale[v][i] = exp(path[step].log_abs[v][i]).convert_to<double>();
    struct Best {
      double value = std::numeric_limits<double>::infinity();
      std::uint64_t index = 0;
    };
    const std::uint64_t inner = total / m;
    auto chunk = [&](std::size_t first) {
      Best best;
      std::vector<std::size_t> idx(n, 0);
      idx[0] = first;
      for (std::uint64_t rest = 0; rest < inner; ++rest) {
        std::uint64_t x = rest;
        bool zero = elems[first].is_zero();
        for (int j = n - 1; j >= 1; --j) {
          idx[j] = x % m;
          x /= m;
          zero = zero && elems[idx[j]].is_zero();
        }
        if (zero) continue;
        double norm = 0;
        for (int v = 0; v < places && norm < best.value; ++v) {
          for (int i = 0; i < n; ++i) {
            double a;
            if (s[v].archimedean()) {
              C y(0);
              for (int j = 0; j < n; ++j) y += g_embed[v][i * n + j] * elem_embed[v][idx[j]];
              a = std::abs(y);
              if (s[v].kind == PlaceKind::Complex) a *= a;
            } else {
              FieldElement y = k.zero();
              for (int j = 0; j < n; ++j) y += g[v](i, j) * elems[idx[j]];
              a = abs_value_double(y, s[v]);
            }
            norm = std::max(norm, a * scale[v][i]);
          }
        }
        if (norm < best.value) best = {norm, first * inner + rest};
      }
      return best;
    };
    auto results = parallel_map(m, workers, chunk);
    Best best;
    for (const auto& b : results)
      if (b.value < best.value) best = b;
    SystoleReport rep;
    rep.step = static_cast<int>(step);
    rep.parameter = path[step].parameter;
    rep.systole = best.value;
    rep.search_height = height;
    std::uint64_t x = best.index;
    std::vector<std::string> coords(n);
    for (int j = n - 1; j >= 0; --j) {
      coords[j] = elems[x % m].str();
      x /= m;
    }
    rep.argmin = coords;
    out.push_back(rep);
  }
  return out;
}

}  // namespace ldorb
