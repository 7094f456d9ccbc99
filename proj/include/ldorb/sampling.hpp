#pragma once

#include <random>

#include "ldorb/matrix.hpp"

namespace ldorb {

using Rng = std::mt19937_64;

// Element with integer power-basis coordinates in [-bound, bound].
FieldElement random_integral_element(const NumberField& k, Rng& rng, int bound);

// Random element of SL_n(K): a random signed permutation times a product of
// elementary matrices with small integral entries, times a random diagonal
// factor diag(c, c^-1) on a random index pair.
MatrixK random_sl(const NumberField& k, int n, Rng& rng, int steps = 6, int bound = 3);

// Random integer matrix with entries in [-bound, bound] and nonzero determinant,
// rescaled in its first row so that the determinant is 1.
MatrixK random_integer_sl(const NumberField& k, int n, Rng& rng, int bound = 5);

}  // namespace ldorb
