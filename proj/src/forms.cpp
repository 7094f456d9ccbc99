#include "ldorb/forms.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>

#include "ldorb/closure3.hpp"
#include "ldorb/errors.hpp"
#include "ldorb/parallel.hpp"

namespace ldorb {

DecomposableForm::DecomposableForm(const PlaceSet& s, int n_vars,
                                   std::vector<std::vector<std::vector<FieldElement>>> forms,
                                   std::optional<std::vector<FieldElement>> alpha)
    : places_(s), n_(n_vars), forms_(std::move(forms)) {
  const NumberField& k = s.field();
  if (forms_.size() != s.size()) throw Error(ErrorKind::DomainError, "one family of forms per place is required");
  m_ = forms_.empty() ? 0 : static_cast<int>(forms_[0].size());
  if (m_ < 1) throw Error(ErrorKind::DomainError, "empty form");
  if (m_ > n_) throw Error(ErrorKind::DomainError, "more forms than variables");
  for (const auto& fam : forms_) {
    if (static_cast<int>(fam.size()) != m_) throw Error(ErrorKind::DomainError, "families must have equal length");
    for (const auto& l : fam) {
      if (static_cast<int>(l.size()) != n_) throw Error(ErrorKind::DomainError, "form has wrong number of coefficients");
      for (const auto& c : l)
        if (c.field() != k) throw Error(ErrorKind::DomainError, "coefficient from another field");
    }
    if (rank_of(fam) != m_) throw Error(ErrorKind::DomainError, "linear forms are dependent over K");
  }
  if (alpha) {
    if (alpha->size() != s.size()) throw Error(ErrorKind::DomainError, "one alpha per place is required");
    alpha_ = *alpha;
  } else {
    alpha_.assign(s.size(), k.one());
  }
}

MatrixK DecomposableForm::coefficient_matrix(int v) const {
  if (m_ != n_) throw Error(ErrorKind::DomainError, "coefficient matrix needs m = n");
  MatrixK h(places_.field(), n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) h(i, j) = forms_[v][i][j];
  return h;
}

DecomposableForm DecomposableForm::normalized() const {
  auto forms = forms_;
  auto alpha = alpha_;
  for (std::size_t v = 0; v < forms.size(); ++v) {
    FieldElement det = coefficient_matrix(static_cast<int>(v)).det();
    if (det.is_zero()) throw Error(ErrorKind::NotUnimodularizable, "coefficient matrix is singular");
    FieldElement inv = det.inverse();
    for (auto& c : forms[v][0]) c = c * inv;
    alpha[v] = alpha[v] * det;
  }
  return DecomposableForm(places_, n_, forms, alpha);
}

PolyK linear_poly(const std::vector<FieldElement>& coeffs) {
  PolyK p;
  const int n = static_cast<int>(coeffs.size());
  for (int j = 0; j < n; ++j) {
    if (coeffs[j].is_zero()) continue;
    std::vector<int> e(n, 0);
    e[j] = 1;
    p.emplace(e, coeffs[j]);
  }
  return p;
}

PolyK multiply(const PolyK& a, const PolyK& b) {
  PolyK out;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      std::vector<int> e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      auto it = out.find(e);
      if (it == out.end())
        out.emplace(e, ca * cb);
      else
        it->second += ca * cb;
    }
  for (auto it = out.begin(); it != out.end();) it = it->second.is_zero() ? out.erase(it) : std::next(it);
  return out;
}

PolyK DecomposableForm::expand(int v, bool with_alpha) const {
  PolyK p;
  p.emplace(std::vector<int>(n_, 0), with_alpha ? alpha_[v] : places_.field().one());
  for (const auto& l : forms_[v]) p = multiply(p, linear_poly(l));
  return p;
}

FieldElement DecomposableForm::evaluate(int v, const std::vector<FieldElement>& z) const {
  if (static_cast<int>(z.size()) != n_) throw Error(ErrorKind::DomainError, "point has wrong dimension");
  FieldElement out = alpha_[v];
  for (const auto& l : forms_[v]) {
    FieldElement s = places_.field().zero();
    for (int j = 0; j < n_; ++j) s += l[j] * z[j];
    out = out * s;
  }
  return out;
}

namespace {

// Coefficients divided by the leading one.
PolyK monic(const PolyK& p) {
  PolyK out;
  if (p.empty()) return out;
  FieldElement inv = p.rbegin()->second.inverse();
  for (const auto& [e, c] : p) out.emplace(e, c * inv);
  return out;
}

}  // namespace

bool proportionality_test(const DecomposableForm& f) {
  PolyK first = monic(f.expand(0, false));
  for (std::size_t v = 1; v < f.places().size(); ++v) {
    PolyK p = monic(f.expand(static_cast<int>(v), false));
    if (p.size() != first.size()) return false;
    auto a = first.begin();
    for (auto b = p.begin(); b != p.end(); ++a, ++b)
      if (a->first != b->first || a->second != b->second) return false;
  }
  return true;
}

DecomposableForm reduce_to_square(const DecomposableForm& f, int trials, std::uint64_t seed) {
  if (f.m() == f.n_vars()) return f;
  if (proportionality_test(f))
    throw Error(ErrorKind::NoWitness, "all places carry proportional forms; f(O^n) is discrete");
  const NumberField& k = f.places().field();
  const int n = f.n_vars(), m = f.m();
  Rng rng(seed);
  std::uniform_int_distribution<int> entry(-2, 2);
  for (int t = 0; t < trials; ++t) {
    std::vector<std::vector<Rational>> p(n, std::vector<Rational>(m));
    for (auto& row : p)
      for (auto& x : row) x = entry(rng);
    std::vector<std::vector<std::vector<FieldElement>>> forms;
    bool independent = true;
    for (const auto& fam : f.forms()) {
      std::vector<std::vector<FieldElement>> out;
      for (const auto& l : fam) {
        std::vector<FieldElement> c(m, k.zero());
        for (int j = 0; j < m; ++j)
          for (int i = 0; i < n; ++i) c[j] += l[i] * p[i][j];
        out.push_back(std::move(c));
      }
      if (rank_of(out) != m) independent = false;
      forms.push_back(std::move(out));
    }
    if (!independent) continue;
    DecomposableForm g(f.places(), m, forms, f.alpha());
    if (!proportionality_test(g)) return g;
  }
  throw Error(ErrorKind::TrialsExhausted, "no admissible linear map found");
}

FormGroup form_to_group(const DecomposableForm& f) {
  if (f.m() != f.n_vars()) throw Error(ErrorKind::DomainError, "form_to_group needs m = n");
  DecomposableForm h = f.normalized();
  FormGroup out;
  out.alpha = h.alpha();
  const int n = f.n_vars();
  for (std::size_t v = 0; v < f.places().size(); ++v) {
    MatrixK g = h.coefficient_matrix(static_cast<int>(v));
    if (!g.det().is_one()) throw Error(ErrorKind::InternalError, "normalization failed");
    // alpha * f0(g x) must reproduce f_v.
    PolyK p;
    p.emplace(std::vector<int>(n, 0), out.alpha[v]);
    for (int i = 0; i < n; ++i) {
      std::vector<FieldElement> row;
      for (int j = 0; j < n; ++j) row.push_back(g(i, j));
      p = multiply(p, linear_poly(row));
    }
    if (p != f.expand(static_cast<int>(v))) throw Error(ErrorKind::InternalError, "form does not match alpha f0(g x)");
    out.g.push_back(std::move(g));
  }
  return out;
}

namespace {

using i128 = __int128;

int valuation(i128 x, long p) {
  if (x == 0) return std::numeric_limits<int>::max();
  int e = 0;
  while (x % p == 0) x /= p, ++e;
  return e;
}

struct FastForm {
  // l_i(z) numerators: sum_j c[i][j] a_j prod_{k != j} d_k over den[i] prod d_k.
  std::vector<std::vector<long>> c;
  std::vector<long> den;
  long alpha_num = 1, alpha_den = 1;
};

std::optional<std::vector<FastForm>> fast_forms(const DecomposableForm& f, int height) {
  if (f.places().field().degree() != 1) return std::nullopt;
  std::vector<FastForm> out;
  double bits = 0;
  for (std::size_t v = 0; v < f.places().size(); ++v) {
    FastForm ff;
    double vbits = 0;
    for (const auto& l : f.forms()[v]) {
      Integer den(1);
      for (const auto& x : l) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.rational_value().get_den_mpz_t());
      if (!den.fits_slong_p()) return std::nullopt;
      std::vector<long> row;
      double cmax = 1;
      for (const auto& x : l) {
        Rational y = x.rational_value() * Rational(den);
        if (!y.get_num().fits_slong_p()) return std::nullopt;
        row.push_back(y.get_num().get_si());
        cmax = std::max(cmax, std::abs(static_cast<double>(row.back())));
      }
      ff.c.push_back(row);
      ff.den.push_back(den.get_si());
      vbits += std::log2(cmax * f.n_vars()) + f.n_vars() * std::log2(height + 1.0) + std::log2(den.get_d());
    }
    Rational a = f.alpha()[v].rational_value();
    if (!a.get_num().fits_slong_p() || !a.get_den().fits_slong_p()) return std::nullopt;
    ff.alpha_num = a.get_num().get_si();
    ff.alpha_den = a.get_den().get_si();
    vbits += std::log2(std::abs(a.get_num().get_d()) + 1) + std::log2(a.get_den().get_d());
    bits = std::max(bits, vbits);
    out.push_back(ff);
  }
  if (bits > 90) return std::nullopt;
  return out;
}

}  // namespace

DensityResult density_probe(const DecomposableForm& f, const std::vector<PlaceTarget>& target,
                            const std::vector<double>& epsilon, int height, const DensityOptions& opt) {
  const PlaceSet& s = f.places();
  const NumberField& k = s.field();
  const int places = static_cast<int>(s.size()), n = f.n_vars();
  if (static_cast<int>(target.size()) != places || static_cast<int>(epsilon.size()) != places)
    throw Error(ErrorKind::DomainError, "one target and tolerance per place is required");
  for (double e : epsilon)
    if (!(e > 0)) throw Error(ErrorKind::DomainError, "tolerances must be positive");
  DensityResult out;
  if (places <= 2) out.warnings.push_back("two places: the values are not dense in general");
  if (opt.cm != CmVerdict::No) out.warnings.push_back("K may be a CM field: density can fail; scanning best-effort");
  if (proportionality_test(f)) out.warnings.push_back("forms are proportional: the values are discrete");

  const auto elems = small_integers(s, height);
  const std::uint64_t m = elems.size();
  std::uint64_t total = 1;
  for (int i = 0; i < n; ++i) {
    if (total > opt.budget / m) throw Error(ErrorKind::BudgetExceeded, "density scan exceeds the budget");
    total *= m;
  }
  const auto fast = fast_forms(f, height);
  std::vector<long> ea, ed;
  if (fast)
    for (const auto& e : elems) {
      Rational q = e.rational_value();
      ea.push_back(q.get_num().get_si());
      ed.push_back(q.get_den().get_si());
    }
  // Targets at finite places as p-adic data: distance is p^-v(f - t).
  std::vector<i128> tnum(places, 0), tden(places, 1);
  for (int v = 0; v < places; ++v)
    if (!s[v].archimedean() && fast) {
      if (!target[v].finite.get_num().fits_slong_p() || !target[v].finite.get_den().fits_slong_p())
        throw Error(ErrorKind::DomainError, "finite target too large");
      tnum[v] = target[v].finite.get_num().get_si();
      tden[v] = target[v].finite.get_den().get_si();
    }

  // Archimedean places first: they are cheap and usually decide the cutoff.
  std::vector<int> order;
  for (int v = 0; v < places; ++v)
    if (s[v].archimedean()) order.push_back(v);
  for (int v = 0; v < places; ++v)
    if (!s[v].archimedean()) order.push_back(v);
  std::vector<double> ev;
  for (std::size_t i = 0; i < ea.size(); ++i) ev.push_back(static_cast<double>(ea[i]) / static_cast<double>(ed[i]));
  auto distance_fast = [&](const std::vector<std::size_t>& idx, double cutoff) {
    double worst = 0;
    for (std::size_t o = 0; o < order.size() && worst < cutoff; ++o) {
      const int v = order[o];
      const FastForm& ff = (*fast)[v];
      double d;
      if (s[v].archimedean()) {
        double val = static_cast<double>(ff.alpha_num) / static_cast<double>(ff.alpha_den);
        for (std::size_t i = 0; i < ff.c.size(); ++i) {
          double lin = 0;
          for (int j = 0; j < n; ++j) lin += static_cast<double>(ff.c[i][j]) * ev[idx[j]];
          val *= lin / static_cast<double>(ff.den[i]);
        }
        d = std::abs(std::complex<double>(val, 0) - target[v].value);
        if (s[v].kind == PlaceKind::Complex) d *= d;
      } else {
        i128 num = ff.alpha_num, den = ff.alpha_den;
        i128 dprod = 1;
        for (int j = 0; j < n; ++j) dprod *= ed[idx[j]];
        for (std::size_t i = 0; i < ff.c.size(); ++i) {
          i128 s_num = 0;
          for (int j = 0; j < n; ++j) {
            if (ff.c[i][j] == 0) continue;
            s_num += static_cast<i128>(ff.c[i][j]) * ea[idx[j]] * (dprod / ed[idx[j]]);
          }
          num *= s_num;
          den *= static_cast<i128>(ff.den[i]) * dprod;
        }
        const long p = static_cast<long>(s[v].prime);
        i128 diff = num * tden[v] - tnum[v] * den;
        if (diff == 0) {
          d = 0;
        } else {
          int e = valuation(diff, p) - valuation(den, p) - valuation(tden[v], p);
          d = std::pow(static_cast<double>(p), -e);
        }
      }
      worst = std::max(worst, d / epsilon[v]);
    }
    return worst;
  };
  auto distance_exact = [&](const std::vector<std::size_t>& idx, double cutoff) {
    std::vector<FieldElement> z;
    for (auto i : idx) z.push_back(elems[i]);
    double worst = 0;
    for (int v = 0; v < places && worst < cutoff; ++v) {
      FieldElement val = f.evaluate(v, z);
      double d;
      if (s[v].archimedean()) {
        d = std::abs(k.embed_double(val, s[v].root_index(k)) - target[v].value);
        if (s[v].kind == PlaceKind::Complex) d *= d;
      } else {
        d = abs_value_double(val - k.from_rational(target[v].finite), s[v]);
      }
      worst = std::max(worst, d / epsilon[v]);
    }
    return worst;
  };

  struct Best {
    double value = std::numeric_limits<double>::infinity();
    std::uint64_t index = 0;
    std::uint64_t scanned = 0;
  };
  const std::uint64_t inner = total / m;
  std::atomic<std::uint64_t> first_hit{std::numeric_limits<std::uint64_t>::max()};
  auto chunk = [&](std::size_t first) {
    Best best;
    if (opt.stop_at_first && first * inner > first_hit.load()) return best;
    std::vector<std::size_t> idx(n, 0);
    idx[0] = first;
    for (std::uint64_t rest = 0; rest < inner; ++rest) {
      std::uint64_t x = rest;
      for (int j = n - 1; j >= 1; --j) {
        idx[j] = x % m;
        x /= m;
      }
      ++best.scanned;
      double d = fast ? distance_fast(idx, best.value) : distance_exact(idx, best.value);
      if (d < best.value) best = {d, first * inner + rest, best.scanned};
      if (opt.stop_at_first && best.value < 1) {
        std::uint64_t hit = first * inner + rest, cur = first_hit.load();
        while (hit < cur && !first_hit.compare_exchange_weak(cur, hit)) {
        }
        break;
      }
    }
    return best;
  };
  auto results = parallel_map(m, opt.workers, chunk);
  Best best;
  for (const auto& b : results) {
    out.points_scanned += b.scanned;
    // Results arrive in index order, so strict comparisons keep the earliest.
    if (opt.stop_at_first && best.value < 1) continue;
    if (b.value < best.value || (opt.stop_at_first && b.value < 1)) best = b;
  }
  out.best_distance = best.value;
  std::uint64_t x = best.index;
  std::vector<FieldElement> z(n);
  for (int j = n - 1; j >= 0; --j) {
    z[j] = elems[x % m];
    x /= m;
  }
  out.best_point = z;
  if (best.value < 1) out.witness = z;
  return out;
}

std::string to_string(CmCheck c) {
  switch (c) {
    case CmCheck::ProductBound:
      return "product_bound";
    case CmCheck::CommonLine:
      return "common_line";
    case CmCheck::Violation:
      return "violation";
    case CmCheck::Excluded:
      return "excluded";
  }
  return "excluded";
}

namespace {

bool in_subfield(const FieldElement& x, const CmStructure& cm) {
  const int dk = x.field().degree(), df = cm.subfield.degree();
  QMatrix a(dk, QVector(df + 1));
  FieldElement p = x.field().one();
  for (int i = 0; i < df; ++i, p = p * cm.beta)
    for (int r = 0; r < dk; ++r) a[r][i] = p.coords()[r];
  for (int r = 0; r < dk; ++r) a[r][df] = x.coords()[r];
  for (const auto& v : nullspace(a, df + 1))
    if (v[df] != 0) return true;
  return false;
}

void check_over_f(const DecomposableForm& f, const CmStructure& cm) {
  for (std::size_t v = 0; v < f.places().size(); ++v) {
    if (f.places()[v].kind != PlaceKind::Complex)
      throw Error(ErrorKind::DomainError, "the CM bound needs complex archimedean places");
    if (!in_subfield(f.alpha()[v], cm)) throw Error(ErrorKind::NotOverF, "alpha lies outside F");
    for (const auto& l : f.forms()[v])
      for (const auto& c : l)
        if (!in_subfield(c, cm)) throw Error(ErrorKind::NotOverF, c.str() + " lies outside F");
  }
}

double cm_constant(const DecomposableForm& f, const CmStructure& cm, int l) {
  const NumberField& k = f.places().field();
  double c = 1;
  for (const auto& v : f.places().places())
    c *= k.embed_double(cm.d, v.root_index(k)).real() / (4.0 * std::pow(static_cast<double>(l), 4));
  return c;
}

bool on_common_line(const std::vector<std::complex<double>>& vals) {
  for (std::size_t i = 1; i < vals.size(); ++i) {
    double cross = std::imag(vals[0] * std::conj(vals[i]));
    if (cross * cross > 1e-18 * std::norm(vals[0]) * std::norm(vals[i])) return false;
  }
  return true;
}

}  // namespace

CmCheckResult cm_bound_check(const DecomposableForm& f, const CmStructure& cm,
                             const std::vector<std::vector<Rational>>& gamma,
                             const std::vector<std::vector<Rational>>& delta, int l) {
  check_over_f(f, cm);
  const NumberField& k = f.places().field();
  const int n = f.n_vars();
  if (static_cast<int>(gamma.size()) != n || static_cast<int>(delta.size()) != n)
    throw Error(ErrorKind::DomainError, "point has wrong dimension");
  std::vector<FieldElement> z;
  for (int i = 0; i < n; ++i)
    z.push_back(map_from_subfield(gamma[i], cm.beta) + cm.sqrt_minus_d * map_from_subfield(delta[i], cm.beta));
  CmCheckResult out;
  out.bound = cm_constant(f, cm, l);
  out.product = 1;
  bool zero = false;
  for (std::size_t v = 0; v < f.places().size(); ++v) {
    FieldElement val = f.evaluate(static_cast<int>(v), z);
    if (val.is_zero()) zero = true;
    out.values.push_back(k.embed_double(val, f.places()[v].root_index(k)));
    out.product *= std::norm(out.values.back());
  }
  if (zero)
    out.verdict = CmCheck::Excluded;
  else if (on_common_line(out.values))
    out.verdict = CmCheck::CommonLine;
  else if (out.product >= out.bound)
    out.verdict = CmCheck::ProductBound;
  else
    out.verdict = CmCheck::Violation;
  return out;
}

CmScanResult cm_bound_scan(const DecomposableForm& f, const CmStructure& cm, int height, int l, int workers) {
  check_over_f(f, cm);
  if (f.n_vars() != 2 || f.m() != 2) throw Error(ErrorKind::DomainError, "the CM scan handles binary forms");
  const NumberField& k = f.places().field();
  const int df = cm.subfield.degree(), places = static_cast<int>(f.places().size());
  const int coords = 4 * df;  // gamma_1, gamma_2, delta_1, delta_2
  using C = std::complex<double>;
  // w[c][v]: contribution of coordinate c to its z component at place v.
  std::vector<std::vector<C>> w(coords, std::vector<C>(places));
  std::vector<int> comp(coords);
  for (int c = 0; c < coords; ++c) {
    const int part = c / df, e = c % df;  // part: 0 gamma_1, 1 gamma_2, 2 delta_1, 3 delta_2
    comp[c] = part % 2;
    FieldElement b = cm.beta.pow(e);
    if (part >= 2) b = b * cm.sqrt_minus_d;
    for (int v = 0; v < places; ++v) w[c][v] = k.embed_double(b, f.places()[v].root_index(k));
  }
  // Exact zero test: integer coordinates of each linear form's contribution.
  std::vector<std::vector<std::vector<long>>> lin;  // [form][c][coord]
  for (int v = 0; v < places; ++v)
    for (const auto& row : f.forms()[v]) {
      std::vector<FieldElement> parts;
      Integer den = 1;
      for (int c = 0; c < coords; ++c) {
        const int part = c / df, e = c % df;
        FieldElement b = cm.beta.pow(e);
        if (part >= 2) b = b * cm.sqrt_minus_d;
        parts.push_back(row[part % 2] * b);
        for (const auto& q : parts.back().coords()) den = lcm(den, Integer(q.get_den()));
      }
      std::vector<std::vector<long>> m;
      for (const auto& x : parts) {
        std::vector<long> r;
        for (const auto& q : x.coords()) {
          Integer t = Integer(q.get_num()) * (den / q.get_den());
          if (!t.fits_slong_p() || abs(t) > Integer(1) << 40) throw Error(ErrorKind::DomainError, "form coefficients too large");
          r.push_back(t.get_si());
        }
        m.push_back(r);
      }
      lin.push_back(m);
    }
  std::vector<std::vector<C>> h(places);
  std::vector<C> alpha(places);
  for (int v = 0; v < places; ++v) {
    const int ri = f.places()[v].root_index(k);
    alpha[v] = k.embed_double(f.alpha()[v], ri);
    for (const auto& row : f.forms()[v])
      for (const auto& x : row) h[v].push_back(k.embed_double(x, ri));
  }
  const double bound = cm_constant(f, cm, l);

  auto exact_recheck = [&](const std::vector<long>& c) {
    std::vector<std::vector<Rational>> g(2, std::vector<Rational>(df)), d(2, std::vector<Rational>(df));
    for (int i = 0; i < coords; ++i) {
      const int part = i / df, e = i % df;
      (part < 2 ? g[part % 2] : d[part % 2])[e] = c[i];
    }
    return cm_bound_check(f, cm, g, d, l).verdict;
  };

  auto chunk = [&](std::size_t first) {
    CmScanResult r;
    r.min_product = std::numeric_limits<double>::infinity();
    std::vector<long> c(coords, 0);
    c[0] = static_cast<long>(first) - height;
    std::vector<std::vector<C>> z(coords + 1, std::vector<C>(2 * places, C(0)));
    auto set_level = [&](int lvl) {
      for (int v = 0; v < places; ++v)
        for (int i = 0; i < 2; ++i) z[lvl + 1][v * 2 + i] = z[lvl][v * 2 + i];
      for (int v = 0; v < places; ++v) z[lvl + 1][v * 2 + comp[lvl]] += static_cast<double>(c[lvl]) * w[lvl][v];
    };
    std::vector<C> vals(places);
    auto leaf = [&] {
      ++r.points;
      double product = 1, scale = 1;
      bool near_zero = false;
      for (int v = 0; v < places; ++v) {
        C z1 = z[coords][v * 2], z2 = z[coords][v * 2 + 1];
        C l1 = h[v][0] * z1 + h[v][1] * z2, l2 = h[v][2] * z1 + h[v][3] * z2;
        vals[v] = alpha[v] * l1 * l2;
        scale = std::max({scale, std::norm(z1), std::norm(z2)});
        product *= std::norm(vals[v]);
      }
      for (const auto& x : vals)
        if (std::norm(x) < 1e-18 * scale * scale) near_zero = true;
      CmCheck verdict;
      bool exact_zero = false;
      if (near_zero)
        for (const auto& m : lin) {
          bool all = true;
          for (int e = 0; e < k.degree() && all; ++e) {
            long t = 0;
            for (int i = 0; i < coords; ++i) t += c[i] * m[i][e];
            all = t == 0;
          }
          exact_zero = exact_zero || all;
        }
      if (exact_zero) {
        verdict = CmCheck::Excluded;
      } else if (near_zero) {
        verdict = exact_recheck(c);
      } else if (on_common_line(vals)) {
        verdict = CmCheck::CommonLine;
      } else if (product >= bound * (1 + 1e-9)) {
        verdict = CmCheck::ProductBound;
      } else {
        verdict = exact_recheck(c);
      }
      switch (verdict) {
        case CmCheck::ProductBound:
          ++r.product_bound;
          r.min_product = std::min(r.min_product, product);
          break;
        case CmCheck::CommonLine:
          ++r.common_line;
          break;
        case CmCheck::Excluded:
          ++r.excluded;
          break;
        case CmCheck::Violation:
          ++r.violations;
          if (r.violating.size() < 20) r.violating.push_back(c);
          break;
      }
    };
    std::function<void(int, long)> rec = [&](int lvl, long left) {
      if (lvl == coords) {
        leaf();
        return;
      }
      for (long x = -left; x <= left; ++x) {
        c[lvl] = x;
        set_level(lvl);
        rec(lvl + 1, left - std::abs(x));
      }
      c[lvl] = 0;
    };
    set_level(0);
    rec(1, height - std::labs(c[0]));
    return r;
  };
  auto parts = parallel_map(static_cast<std::size_t>(2 * height + 1), workers, chunk);
  CmScanResult out;
  out.min_product = std::numeric_limits<double>::infinity();
  for (const auto& p : parts) {
    out.points += p.points;
    out.product_bound += p.product_bound;
    out.common_line += p.common_line;
    out.excluded += p.excluded;
    out.violations += p.violations;
    out.min_product = std::min(out.min_product, p.min_product);
    for (const auto& v : p.violating)
      if (out.violating.size() < 20) out.violating.push_back(v);
  }
  return out;
}

TwoPlaceReport two_place_diagnostic(const DecomposableForm& f, int height, double window) {
  const PlaceSet& s = f.places();
  const NumberField& k = s.field();
  if (s.size() != 2) throw Error(ErrorKind::DomainError, "the diagnostic needs exactly two places");
  const int n = f.n_vars();
  const auto elems = small_integers(s, height);
  const std::uint64_t m = elems.size();
  TwoPlaceReport out;
  out.window = window;
  std::vector<std::vector<double>> values;
  std::vector<std::size_t> idx(n, 0);
  while (true) {
    bool zero = true;
    std::vector<FieldElement> z;
    for (auto i : idx) {
      z.push_back(elems[i]);
      zero = zero && elems[i].is_zero();
    }
    if (!zero) {
      ++out.points;
      std::vector<double> row;
      bool nonzero = true, inside = true;
      for (int v = 0; v < 2; ++v) {
        FieldElement val = f.evaluate(v, z);
        if (val.is_zero()) nonzero = false;
        if (s[v].archimedean()) {
          auto c = k.embed_double(val, s[v].root_index(k));
          row.push_back(c.real());
          if (s[v].kind == PlaceKind::Complex) row.push_back(c.imag());
        } else {
          row.push_back(val.rational_value().get_d());
        }
      }
      for (double x : row) inside = inside && std::abs(x) <= window;
      if (nonzero) {
        ++out.nonzero_values;
        if (inside) values.push_back(std::move(row));
      }
    }
    int j = n - 1;
    while (j >= 0 && ++idx[j] == m) idx[j--] = 0;
    if (j < 0) break;
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end(),
                           [](const auto& a, const auto& b) {
                             for (std::size_t i = 0; i < a.size(); ++i)
                               if (std::abs(a[i] - b[i]) > 1e-12) return false;
                             return true;
                           }),
               values.end());
  out.distinct_values = values.size();
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < values.size(); ++i)
    for (std::size_t j = i + 1; j < values.size() && values[j][0] - values[i][0] < gap; ++j) {
      double d = 0;
      for (std::size_t c = 0; c < values[i].size(); ++c) d = std::max(d, std::abs(values[i][c] - values[j][c]));
      gap = std::min(gap, d);
    }
  out.min_gap = values.size() < 2 ? 0 : gap;
  return out;
}

}  // namespace ldorb
