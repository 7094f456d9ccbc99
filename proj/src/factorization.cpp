#include "ldorb/factorization.hpp"

#include "ldorb/errors.hpp"

namespace ldorb {

BruhatDecomposition bruhat(const MatrixK& g) {
  const NumberField& k = g.field();
  const int n = g.size();
  if (!g.det().is_one()) throw Error(ErrorKind::Singular, "bruhat() expects determinant 1");
  // Invariant: g = b1 * a * b2. Row operations only add lower rows to upper
  // ones, column operations only add left columns to right ones.
  MatrixK a = g;
  MatrixK b1 = MatrixK::identity(k, n), b2 = MatrixK::identity(k, n);
  std::vector<int> perm(n, -1);
  for (int i = n - 1; i >= 0; --i) {
    int j = 0;
    while (j < n && a(i, j).is_zero()) ++j;
    if (j == n) throw Error(ErrorKind::InternalError, "zero row during Bruhat elimination");
    perm[j] = i;
    const FieldElement inv = a(i, j).inverse();
    for (int r = 0; r < i; ++r) {
      if (a(r, j).is_zero()) continue;
      FieldElement c = a(r, j) * inv;
      for (int col = 0; col < n; ++col)
        if (!a(i, col).is_zero()) a(r, col) -= c * a(i, col);
      for (int row = 0; row < n; ++row)
        if (!b1(row, r).is_zero()) b1(row, i) += c * b1(row, r);
    }
    for (int l = j + 1; l < n; ++l) {
      if (a(i, l).is_zero()) continue;
      FieldElement c = a(i, l) * inv;
      for (int row = 0; row < n; ++row)
        if (!a(row, j).is_zero()) a(row, l) -= c * a(row, j);
      for (int col = 0; col < n; ++col)
        if (!b2(l, col).is_zero()) b2(j, col) += c * b2(l, col);
    }
  }
  WeylPerm w(perm);
  // a = diag-scaled monomial; a = w.matrix() * d with d diagonal.
  MatrixK wm = w.matrix(k);
  std::vector<FieldElement> d(n);
  for (int j = 0; j < n; ++j) d[j] = a(perm[j], j) / wm(perm[j], j);
  MatrixK dm = MatrixK::diagonal(d);
  return {b1, w, dm * b2};
}

bool in_bruhat_cell(const MatrixK& g, const WeylPerm& w) {
  const int n = g.size();
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      std::vector<int> rows, cols;
      for (int r = p; r < n; ++r) rows.push_back(r);
      for (int c = 0; c <= q; ++c) cols.push_back(c);
      int expect = 0;
      for (int c = 0; c <= q; ++c)
        if (w[c] >= p) ++expect;
      if (g.rank(rows, cols) != expect) return false;
    }
  return true;
}

bool in_big_cell(const MatrixK& g, const PsiSet& psi) {
  auto blocks = psi.blocks();
  std::vector<int> lead;
  for (std::size_t b = 0; b + 1 < blocks.size(); ++b) {
    lead.insert(lead.end(), blocks[b].begin(), blocks[b].end());
    if (g.minor(lead, lead).is_zero()) return false;
  }
  return true;
}

namespace {

using Rect = std::vector<std::vector<FieldElement>>;

Rect rect(const MatrixK& m, const std::vector<int>& rows, const std::vector<int>& cols) {
  std::vector<std::vector<FieldElement>> out;
  for (int r : rows) {
    std::vector<FieldElement> row;
    for (int c : cols) row.push_back(m(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

Rect rect(const MatrixK& m) {
  std::vector<int> all(m.size());
  for (int i = 0; i < m.size(); ++i) all[i] = i;
  return rect(m, all, all);
}

Rect mul(const Rect& a, const Rect& b) {
  const std::size_t rows = a.size(), inner = b.size(), cols = b.empty() ? 0 : b[0].size();
  NumberField k = a[0][0].field();
  Rect out(rows, std::vector<FieldElement>(cols, k.zero()));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t l = 0; l < inner; ++l) {
      if (a[i][l].is_zero()) continue;
      for (std::size_t j = 0; j < cols; ++j)
        if (!b[l][j].is_zero()) out[i][j] += a[i][l] * b[l][j];
    }
  return out;
}

}  // namespace

std::optional<BigCellFactors> big_cell_factor(const MatrixK& g, const PsiSet& psi) {
  if (!in_big_cell(g, psi)) return std::nullopt;
  const NumberField& k = g.field();
  const int n = g.size();
  auto blocks = psi.blocks();
  const std::size_t nb = blocks.size();
  MatrixK s = g;  // Schur complements overwrite the trailing blocks
  MatrixK lower = MatrixK::identity(k, n), upper = MatrixK::identity(k, n), z(k, n);
  for (std::size_t b = 0; b < nb; ++b) {
    const auto& bb = blocks[b];
    MatrixK piv = s.sub(bb, bb);
    MatrixK piv_inv = piv.inverse();
    for (std::size_t i = 0; i < bb.size(); ++i)
      for (std::size_t j = 0; j < bb.size(); ++j) z(bb[i], bb[j]) = piv(i, j);
    Rect pinv = rect(piv_inv);
    std::vector<int> rest;
    for (std::size_t c = b + 1; c < nb; ++c) rest.insert(rest.end(), blocks[c].begin(), blocks[c].end());
    if (rest.empty()) break;
    Rect below = rect(s, rest, bb);    // S_{rest, b}
    Rect right = rect(s, bb, rest);    // S_{b, rest}
    Rect l = mul(below, pinv);         // L_{rest, b}
    Rect u = mul(pinv, right);         // U_{b, rest}
    Rect corr = mul(l, right);
    for (std::size_t i = 0; i < rest.size(); ++i) {
      for (std::size_t j = 0; j < bb.size(); ++j) lower(rest[i], bb[j]) = l[i][j];
      for (std::size_t j = 0; j < rest.size(); ++j) s(rest[i], rest[j]) -= corr[i][j];
    }
    for (std::size_t i = 0; i < bb.size(); ++i)
      for (std::size_t j = 0; j < rest.size(); ++j) upper(bb[i], rest[j]) = u[i][j];
  }
  BigCellFactors f{lower, z, upper};
  if (f.v_minus * f.z * f.v_plus != g) throw Error(ErrorKind::InternalError, "big cell factorization does not reconstruct");
  return f;
}

std::optional<BigCellFactors> big_cell_factor_transposed(const MatrixK& g, const PsiSet& psi) {
  auto t = big_cell_factor(g.transpose(), psi);
  if (!t) return std::nullopt;
  return BigCellFactors{t->v_plus.transpose(), t->z.transpose(), t->v_minus.transpose()};
}

bool is_block_lower_unipotent(const MatrixK& m, const PsiSet& psi) {
  for (int i = 0; i < m.size(); ++i)
    for (int j = 0; j < m.size(); ++j) {
      const int bi = psi.block_of(i), bj = psi.block_of(j);
      if (bi == bj) {
        if (i == j ? !m(i, j).is_one() : !m(i, j).is_zero()) return false;
      } else if (bi < bj && !m(i, j).is_zero()) {
        return false;
      }
    }
  return true;
}

bool is_block_upper_unipotent(const MatrixK& m, const PsiSet& psi) { return is_block_lower_unipotent(m.transpose(), psi); }

bool is_block_diagonal(const MatrixK& m, const PsiSet& psi) {
  for (int i = 0; i < m.size(); ++i)
    for (int j = 0; j < m.size(); ++j)
      if (psi.block_of(i) != psi.block_of(j) && !m(i, j).is_zero()) return false;
  return true;
}

std::optional<TwistedFactors> generalized_membership(const MatrixK& g, const WeylPerm& w1, const WeylPerm& w2,
                                                     const PsiSet& psi) {
  const NumberField& k = g.field();
  MatrixK m1 = w1.matrix(k), m2 = w2.matrix(k);
  // Monomial +-1 matrices are orthogonal.
  MatrixK x = m1.transpose() * g * m2;
  auto f = big_cell_factor(x, psi);
  if (!f) return std::nullopt;
  TwistedFactors out{w1, w2, *f, m1 * f->v_minus.inverse() * m1.transpose(), m2 * f->v_plus * m2.transpose()};
  return out;
}

namespace {

std::optional<RelativeBruhat> try_relative(const MatrixK& g, const MatrixK& g_inv, const WeylPerm& w, const PsiSet& psi) {
  const NumberField& k = g.field();
  MatrixK wm = w.matrix(k);
  // x = w^-1 g lies in Z V V^- iff x^-1 = g^-1 w lies in V^- P.
  auto f = big_cell_factor(g_inv * wm, psi);
  if (!f) return std::nullopt;
  MatrixK b_inv = f->z.inverse();
  RelativeBruhat r{w, b_inv, f->z * f->v_plus.inverse() * b_inv, f->v_minus.inverse()};
  if (wm * r.z * r.v_plus * r.v_minus != g) throw Error(ErrorKind::InternalError, "relative Bruhat does not reconstruct");
  return r;
}

}  // namespace

RelativeBruhat relative_bruhat(const MatrixK& g, const PsiSet& psi) {
  MatrixK g_inv = g.inverse();
  for (const auto& w : coset_reps(psi))
    if (auto r = try_relative(g, g_inv, w, psi)) return *r;
  throw TheoremViolation(ErrorKind::InternalError, "no Weyl coset covers g in relative Bruhat form");
}

std::vector<RelativeBruhat> relative_bruhat_all(const MatrixK& g, const PsiSet& psi) {
  MatrixK g_inv = g.inverse();
  std::vector<RelativeBruhat> out;
  for (const auto& w : coset_reps(psi))
    if (auto r = try_relative(g, g_inv, w, psi)) out.push_back(*r);
  if (out.empty()) throw TheoremViolation(ErrorKind::InternalError, "no Weyl coset covers g in relative Bruhat form");
  return out;
}

}  // namespace ldorb
