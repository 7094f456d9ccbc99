#pragma once

#include <vector>

#include "ldorb/rational.hpp"

namespace ldorb {

using QVector = std::vector<Rational>;
using QMatrix = std::vector<QVector>;  // row-major

// Fraction-free (Bareiss) determinant; every division is exact.
Rational det(QMatrix a);
int rank(QMatrix a);
// Basis of {x : a x = 0}.
QMatrix nullspace(const QMatrix& a, std::size_t cols);
// Solves a x = b for square nonsingular a; empty if singular.
std::vector<Rational> solve(const QMatrix& a, const QVector& b);
Rational dot(const QVector& a, const QVector& b);

}  // namespace ldorb
