#pragma once

#include <optional>
#include <vector>

#include "ldorb/matrix.hpp"
#include "ldorb/weyl.hpp"

namespace ldorb {

struct BruhatDecomposition {
  MatrixK b1;  // upper triangular
  WeylPerm w;
  MatrixK b2;  // upper triangular
};

// g = b1 * w.matrix() * b2. Throws Singular unless det g = 1.
BruhatDecomposition bruhat(const MatrixK& g);

// g lies in B w B iff for all p, q the block g[p.., ..q] has rank
// #{j <= q : w(j) >= p}.
bool in_bruhat_cell(const MatrixK& g, const WeylPerm& w);

// Leading principal minors at the block boundaries of psi.
bool in_big_cell(const MatrixK& g, const PsiSet& psi);

struct BigCellFactors {
  MatrixK v_minus;  // block lower unipotent
  MatrixK z;        // block diagonal
  MatrixK v_plus;   // block upper unipotent
};

// g = v_minus z v_plus when g is in the big cell of psi.
std::optional<BigCellFactors> big_cell_factor(const MatrixK& g, const PsiSet& psi);
// Same factors computed from the factorization of the transpose.
std::optional<BigCellFactors> big_cell_factor_transposed(const MatrixK& g, const PsiSet& psi);

bool is_block_lower_unipotent(const MatrixK& m, const PsiSet& psi);
bool is_block_upper_unipotent(const MatrixK& m, const PsiSet& psi);
bool is_block_diagonal(const MatrixK& m, const PsiSet& psi);

struct TwistedFactors {
  WeylPerm w1, w2;
  BigCellFactors inner;  // of w1^-1 g w2
  MatrixK left;          // w1 v_minus^-1 w1^-1
  MatrixK right;         // w2 v_plus w2^-1
};

// g in w1 V^- P w2^-1, with the conjugated factors.
std::optional<TwistedFactors> generalized_membership(const MatrixK& g, const WeylPerm& w1, const WeylPerm& w2,
                                                     const PsiSet& psi);

struct RelativeBruhat {
  WeylPerm w;  // coset representative of W / W_psi
  MatrixK z, v_plus, v_minus;
};

// g = w z v_plus v_minus for the first coset representative that works.
// No representative working raises TheoremViolation.
RelativeBruhat relative_bruhat(const MatrixK& g, const PsiSet& psi);
std::vector<RelativeBruhat> relative_bruhat_all(const MatrixK& g, const PsiSet& psi);

}  // namespace ldorb
