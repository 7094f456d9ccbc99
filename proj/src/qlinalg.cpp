#include "ldorb/qlinalg.hpp"

#include <utility>

namespace ldorb {

Rational det(QMatrix a) {
  const std::size_t n = a.size();
  if (n == 0) return Rational(1);
  // Work on the integer matrix obtained by clearing row denominators.
  Rational scale(1);
  std::vector<std::vector<Integer>> m(n, std::vector<Integer>(n));
  for (std::size_t i = 0; i < n; ++i) {
    Integer l(1);
    for (const auto& x : a[i]) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    scale /= l;
    for (std::size_t j = 0; j < n; ++j) m[i][j] = Integer(a[i][j] * l);
  }
  int sign = 1;
  Integer prev(1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && m[p][k] == 0) ++p;
      if (p == n) return Rational(0);
      std::swap(m[k], m[p]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer t = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        mpz_divexact(m[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      m[i][k] = 0;
    }
    prev = m[k][k];
  }
  Rational d(m[n - 1][n - 1]);
  return d * scale * sign;
}

namespace {

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(QMatrix& a, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t c = 0; c < cols && row < a.size(); ++c) {
    std::size_t p = row;
    while (p < a.size() && a[p][c] == 0) ++p;
    if (p == a.size()) continue;
    std::swap(a[row], a[p]);
    Rational inv = 1 / a[row][c];
    for (auto& x : a[row]) x *= inv;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i == row || a[i][c] == 0) continue;
      Rational f = a[i][c];
      for (std::size_t j = 0; j < a[i].size(); ++j) a[i][j] -= f * a[row][j];
    }
    pivots.push_back(c);
    ++row;
  }
  return pivots;
}

}  // namespace

int rank(QMatrix a) {
  if (a.empty()) return 0;
  return static_cast<int>(rref(a, a[0].size()).size());
}

QMatrix nullspace(const QMatrix& a, std::size_t cols) {
  QMatrix m = a;
  auto pivots = rref(m, cols);
  std::vector<bool> is_pivot(cols, false);
  for (auto p : pivots) is_pivot[p] = true;
  QMatrix basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    QVector v(cols, Rational(0));
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m[r][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<Rational> solve(const QMatrix& a, const QVector& b) {
  const std::size_t n = a.size();
  QMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    m[i] = a[i];
    m[i].push_back(b[i]);
  }
  auto pivots = rref(m, n);
  if (pivots.size() < n) return {};
  QVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = m[i][n];
  return x;
}

Rational dot(const QVector& a, const QVector& b) {
  Rational s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace ldorb
