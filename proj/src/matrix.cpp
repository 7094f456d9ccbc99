#include "ldorb/matrix.hpp"

#include <sstream>

#include "ldorb/errors.hpp"

namespace ldorb {

MatrixK::MatrixK(const NumberField& k, int n) : field_(k), n_(n), a_(n * n, k.zero()) {}

MatrixK MatrixK::identity(const NumberField& k, int n) {
  MatrixK m(k, n);
  for (int i = 0; i < n; ++i) m(i, i) = k.one();
  return m;
}

MatrixK MatrixK::from_rational(const NumberField& k, const QMatrix& q) {
  const int n = static_cast<int>(q.size());
  MatrixK m(k, n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(q[i].size()) != n) throw Error(ErrorKind::ConfigInvalid, "matrix is not square");
    for (int j = 0; j < n; ++j) m(i, j) = k.from_rational(q[i][j]);
  }
  return m;
}

MatrixK MatrixK::diagonal(const std::vector<FieldElement>& d) {
  if (d.empty()) throw Error(ErrorKind::DomainError, "empty diagonal");
  MatrixK m(d[0].field(), static_cast<int>(d.size()));
  for (int i = 0; i < m.n_; ++i) m(i, i) = d[i];
  return m;
}

MatrixK MatrixK::operator*(const MatrixK& o) const {
  if (n_ != o.n_) throw Error(ErrorKind::DomainError, "size mismatch");
  MatrixK r(field_, n_);
  for (int i = 0; i < n_; ++i)
    for (int k = 0; k < n_; ++k) {
      const FieldElement& x = (*this)(i, k);
      if (x.is_zero()) continue;
      for (int j = 0; j < n_; ++j)
        if (!o(k, j).is_zero()) r(i, j) += x * o(k, j);
    }
  return r;
}

MatrixK MatrixK::operator+(const MatrixK& o) const {
  MatrixK r = *this;
  for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] += o.a_[i];
  return r;
}

MatrixK MatrixK::operator-(const MatrixK& o) const {
  MatrixK r = *this;
  for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] -= o.a_[i];
  return r;
}

bool MatrixK::operator==(const MatrixK& o) const { return n_ == o.n_ && a_ == o.a_; }

FieldElement det_of(std::vector<std::vector<FieldElement>> a) {
  const int n = static_cast<int>(a.size());
  if (n == 0) throw Error(ErrorKind::DomainError, "determinant of an empty matrix");
  NumberField k = a[0][0].field();
  FieldElement prev = k.one();
  bool negate = false;
  for (int c = 0; c < n - 1; ++c) {
    if (a[c][c].is_zero()) {
      int r = c + 1;
      while (r < n && a[r][c].is_zero()) ++r;
      if (r == n) return k.zero();
      std::swap(a[c], a[r]);
      negate = !negate;
    }
    for (int i = c + 1; i < n; ++i) {
      for (int j = c + 1; j < n; ++j) a[i][j] = (a[i][j] * a[c][c] - a[i][c] * a[c][j]) / prev;
      a[i][c] = k.zero();
    }
    prev = a[c][c];
  }
  return negate ? -a[n - 1][n - 1] : a[n - 1][n - 1];
}

int rank_of(std::vector<std::vector<FieldElement>> a) {
  if (a.empty()) return 0;
  const int rows = static_cast<int>(a.size()), cols = static_cast<int>(a[0].size());
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int p = r;
    while (p < rows && a[p][c].is_zero()) ++p;
    if (p == rows) continue;
    std::swap(a[r], a[p]);
    FieldElement inv = a[r][c].inverse();
    for (int i = r + 1; i < rows; ++i) {
      if (a[i][c].is_zero()) continue;
      FieldElement f = a[i][c] * inv;
      for (int j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    ++r;
  }
  return r;
}

std::vector<std::vector<FieldElement>> nullspace_of(std::vector<std::vector<FieldElement>> a, const NumberField& k,
                                                    int cols) {
  const int rows = static_cast<int>(a.size());
  std::vector<int> pivot_cols;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int p = r;
    while (p < rows && a[p][c].is_zero()) ++p;
    if (p == rows) continue;
    std::swap(a[r], a[p]);
    FieldElement inv = a[r][c].inverse();
    for (int j = c; j < cols; ++j) a[r][j] *= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || a[i][c].is_zero()) continue;
      FieldElement f = a[i][c];
      for (int j = c; j < cols; ++j)
        if (!a[r][j].is_zero()) a[i][j] -= f * a[r][j];
    }
    pivot_cols.push_back(c);
    ++r;
  }
  std::vector<std::vector<FieldElement>> basis;
  std::vector<bool> is_pivot(cols, false);
  for (int c : pivot_cols) is_pivot[c] = true;
  for (int f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<FieldElement> x(cols, k.zero());
    x[f] = k.one();
    for (std::size_t i = 0; i < pivot_cols.size(); ++i) x[pivot_cols[i]] = -a[i][f];
    basis.push_back(std::move(x));
  }
  return basis;
}

FieldElement MatrixK::det() const {
  std::vector<std::vector<FieldElement>> rows(n_);
  for (int i = 0; i < n_; ++i) rows[i].assign(a_.begin() + i * n_, a_.begin() + (i + 1) * n_);
  return det_of(std::move(rows));
}

MatrixK MatrixK::inverse() const {
  MatrixK a = *this;
  MatrixK inv = identity(field_, n_);
  for (int c = 0; c < n_; ++c) {
    int p = c;
    while (p < n_ && a(p, c).is_zero()) ++p;
    if (p == n_) throw Error(ErrorKind::Singular, "matrix is not invertible");
    if (p != c)
      for (int j = 0; j < n_; ++j) {
        std::swap(a(p, j), a(c, j));
        std::swap(inv(p, j), inv(c, j));
      }
    FieldElement s = a(c, c).inverse();
    for (int j = 0; j < n_; ++j) {
      a(c, j) *= s;
      inv(c, j) *= s;
    }
    for (int i = 0; i < n_; ++i) {
      if (i == c || a(i, c).is_zero()) continue;
      FieldElement f = a(i, c);
      for (int j = 0; j < n_; ++j) {
        if (!a(c, j).is_zero()) a(i, j) -= f * a(c, j);
        if (!inv(c, j).is_zero()) inv(i, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

MatrixK MatrixK::transpose() const {
  MatrixK t(field_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

MatrixK MatrixK::sub(const std::vector<int>& rows, const std::vector<int>& cols) const {
  if (rows.size() != cols.size()) throw Error(ErrorKind::DomainError, "sub() builds square blocks only");
  MatrixK s(field_, static_cast<int>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) s(i, j) = (*this)(rows[i], cols[j]);
  return s;
}

FieldElement MatrixK::minor(const std::vector<int>& rows, const std::vector<int>& cols) const {
  if (rows.empty()) return field_.one();
  return sub(rows, cols).det();
}

int MatrixK::rank(const std::vector<int>& rows, const std::vector<int>& cols) const {
  std::vector<std::vector<FieldElement>> a;
  for (int r : rows) {
    std::vector<FieldElement> row;
    for (int c : cols) row.push_back((*this)(r, c));
    a.push_back(std::move(row));
  }
  return rank_of(std::move(a));
}

int MatrixK::rank() const {
  std::vector<int> all(n_);
  for (int i = 0; i < n_; ++i) all[i] = i;
  return rank(all, all);
}

bool MatrixK::is_identity() const { return *this == identity(field_, n_); }

bool MatrixK::is_diagonal() const {
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if (i != j && !(*this)(i, j).is_zero()) return false;
  return true;
}

bool MatrixK::is_monomial() const {
  for (int i = 0; i < n_; ++i) {
    int row_count = 0, col_count = 0;
    for (int j = 0; j < n_; ++j) {
      if (!(*this)(i, j).is_zero()) ++row_count;
      if (!(*this)(j, i).is_zero()) ++col_count;
    }
    if (row_count != 1 || col_count != 1) return false;
  }
  return true;
}

bool MatrixK::is_upper_triangular() const {
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < i; ++j)
      if (!(*this)(i, j).is_zero()) return false;
  return true;
}

bool MatrixK::is_upper_unipotent() const {
  if (!is_upper_triangular()) return false;
  for (int i = 0; i < n_; ++i)
    if (!(*this)(i, i).is_one()) return false;
  return true;
}

std::string MatrixK::str() const {
  std::ostringstream os;
  os << '[';
  for (int i = 0; i < n_; ++i) {
    os << (i ? ", [" : "[");
    for (int j = 0; j < n_; ++j) os << (j ? ", " : "") << (*this)(i, j).str();
    os << ']';
  }
  os << ']';
  return os.str();
}

}  // namespace ldorb
