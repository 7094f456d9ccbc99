#include "ldorb/sampling.hpp"

#include "ldorb/weyl.hpp"

namespace ldorb {

FieldElement random_integral_element(const NumberField& k, Rng& rng, int bound) {
  std::uniform_int_distribution<int> d(-bound, bound);
  std::vector<Rational> c(k.degree());
  for (auto& x : c) x = d(rng);
  return k.element(std::move(c));
}

MatrixK random_sl(const NumberField& k, int n, Rng& rng, int steps, int bound) {
  auto perms = WeylPerm::all(n);
  std::uniform_int_distribution<std::size_t> pick(0, perms.size() - 1);
  std::uniform_int_distribution<int> idx(0, n - 1);
  MatrixK g = perms[pick(rng)].matrix(k);
  for (int s = 0; s < steps; ++s) {
    int i = idx(rng), j = idx(rng);
    if (i == j) continue;
    MatrixK e = MatrixK::identity(k, n);
    e(i, j) = random_integral_element(k, rng, bound);
    g = (s % 2 ? e * g : g * e);
  }
  if (n >= 2) {
    int i = idx(rng), j = idx(rng);
    FieldElement c = random_integral_element(k, rng, bound);
    if (i != j && !c.is_zero()) {
      MatrixK d = MatrixK::identity(k, n);
      d(i, i) = c;
      d(j, j) = c.inverse();
      g = g * d;
    }
  }
  return g;
}

MatrixK random_integer_sl(const NumberField& k, int n, Rng& rng, int bound) {
  std::uniform_int_distribution<int> d(-bound, bound);
  while (true) {
    MatrixK g(k, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g(i, j) = k.from_rational(d(rng));
    FieldElement det = g.det();
    if (det.is_zero()) continue;
    FieldElement inv = det.inverse();
    for (int j = 0; j < n; ++j) g(0, j) *= inv;
    return g;
  }
}

}  // namespace ldorb
