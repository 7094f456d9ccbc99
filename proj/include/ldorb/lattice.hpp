#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace ldorb {

template <typename T>
using RealMatrix = std::vector<std::vector<T>>;  // rows are vectors

template <typename T>
T dot_rows(const std::vector<T>& a, const std::vector<T>& b) {
  T s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

template <typename T>
struct GramSchmidt {
  RealMatrix<T> star;  // orthogonalized rows
  RealMatrix<T> mu;
  std::vector<T> norms2;
};

template <typename T>
GramSchmidt<T> gram_schmidt(const RealMatrix<T>& b) {
  const std::size_t k = b.size();
  GramSchmidt<T> g;
  g.star = b;
  g.mu.assign(k, std::vector<T>(k, T(0)));
  g.norms2.assign(k, T(0));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      g.mu[i][j] = g.norms2[j] == 0 ? T(0) : dot_rows(b[i], g.star[j]) / g.norms2[j];
      for (std::size_t c = 0; c < b[i].size(); ++c) g.star[i][c] -= g.mu[i][j] * g.star[j][c];
    }
    g.norms2[i] = dot_rows(g.star[i], g.star[i]);
  }
  return g;
}

template <typename T>
T round_half(const T& x) {
  using std::floor;
  return floor(x + T(0.5));
}

// LLL reduction (delta = 0.99) of linearly independent rows. `transform`
// receives the integer matrix U with reduced = U * original.
template <typename T>
RealMatrix<T> lll_reduce(RealMatrix<T> b, std::vector<std::vector<std::int64_t>>* transform = nullptr) {
  const std::size_t k = b.size();
  std::vector<std::vector<std::int64_t>> u(k, std::vector<std::int64_t>(k, 0));
  for (std::size_t i = 0; i < k; ++i) u[i][i] = 1;
  if (k == 0) return b;
  const T delta = T(99) / T(100);
  auto g = gram_schmidt(b);
  std::size_t i = 1;
  int guard = 0;
  while (i < k && guard++ < 100000) {
    for (std::size_t jj = i; jj-- > 0;) {
      T q = round_half(g.mu[i][jj]);
      if (q == 0) continue;
      const auto qi = static_cast<std::int64_t>(static_cast<long double>(q));
      for (std::size_t c = 0; c < b[i].size(); ++c) b[i][c] -= q * b[jj][c];
      for (std::size_t c = 0; c < k; ++c) u[i][c] -= qi * u[jj][c];
      for (std::size_t c = 0; c <= jj; ++c) g.mu[i][c] -= q * (c == jj ? T(1) : g.mu[jj][c]);
    }
    if (g.norms2[i] >= (delta - g.mu[i][i - 1] * g.mu[i][i - 1]) * g.norms2[i - 1]) {
      ++i;
    } else {
      std::swap(b[i], b[i - 1]);
      std::swap(u[i], u[i - 1]);
      g = gram_schmidt(b);
      i = i > 1 ? i - 1 : 1;
    }
  }
  if (transform) *transform = u;
  return b;
}

// Babai nearest plane: integer coefficients c with sum c_i b_i close to t.
template <typename T>
std::vector<std::int64_t> babai_nearest_plane(const RealMatrix<T>& b, const std::vector<T>& t) {
  const std::size_t k = b.size();
  auto g = gram_schmidt(b);
  std::vector<T> r = t;
  std::vector<std::int64_t> c(k, 0);
  for (std::size_t i = k; i-- > 0;) {
    if (g.norms2[i] == 0) continue;
    T q = round_half(dot_rows(r, g.star[i]) / g.norms2[i]);
    c[i] = static_cast<std::int64_t>(static_cast<long double>(q));
    for (std::size_t j = 0; j < r.size(); ++j) r[j] -= q * b[i][j];
  }
  return c;
}

}  // namespace ldorb
