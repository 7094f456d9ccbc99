#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ldorb/matrix.hpp"
#include "ldorb/qlinalg.hpp"

namespace ldorb {

// Permutation of {0..n-1}; perm()[j] is the row holding the nonzero entry of
// column j in the representative matrix. Printed 1-based in one-line form.
class WeylPerm {
 public:
  WeylPerm() = default;
  explicit WeylPerm(std::vector<int> perm);  // validated
  static WeylPerm identity(int n);
  static WeylPerm longest(int n);
  static std::vector<WeylPerm> all(int n);  // lexicographic order

  int size() const { return static_cast<int>(p_.size()); }
  const std::vector<int>& perm() const { return p_; }
  int operator[](int j) const { return p_[j]; }

  WeylPerm operator*(const WeylPerm& o) const;  // (this o o)(j) = this(o(j))
  WeylPerm inverse() const;
  int length() const;  // number of inversions
  int sign() const;

  // Monomial +-1 matrix with determinant 1: entry 1 at (perm(j), j), the
  // last column negated when the permutation is odd.
  MatrixK matrix(const NumberField& k) const;
  QMatrix rational_matrix() const;

  bool operator==(const WeylPerm& o) const { return p_ == o.p_; }
  bool operator!=(const WeylPerm& o) const { return p_ != o.p_; }
  bool operator<(const WeylPerm& o) const { return p_ < o.p_; }
  std::string str() const;

 private:
  std::vector<int> p_;
};

// Subset of the simple roots {1..n-1}. Root i in the subset glues positions
// i-1 and i (0-based) into one block.
class PsiSet {
 public:
  PsiSet() = default;
  PsiSet(int n, std::uint32_t mask);
  static PsiSet empty(int n);
  static PsiSet full(int n);
  static PsiSet from_composition(const std::vector<int>& sizes);
  static std::vector<PsiSet> all(int n);  // by increasing mask

  int n() const { return n_; }
  std::uint32_t mask() const { return mask_; }
  bool contains(int root) const { return (mask_ >> (root - 1)) & 1u; }
  std::vector<int> roots() const;
  std::vector<int> composition() const;
  std::vector<std::vector<int>> blocks() const;
  int block_of(int i) const;
  int block_count() const;
  bool is_empty() const { return mask_ == 0; }
  bool is_full() const;
  bool subset_of(const PsiSet& o) const { return (mask_ & ~o.mask_) == 0; }

  bool operator==(const PsiSet& o) const { return n_ == o.n_ && mask_ == o.mask_; }
  bool operator<(const PsiSet& o) const { return mask_ < o.mask_; }
  std::string str() const;  // e.g. "{1,3}"

 private:
  int n_ = 0;
  std::uint32_t mask_ = 0;
};

// Ordered partition of {0..n-1}; names a parabolic subgroup containing T as
// the stabilizer of the flag spanned by successive unions of blocks.
class FlagType {
 public:
  FlagType() = default;
  explicit FlagType(std::vector<std::vector<int>> blocks);  // blocks sorted
  const std::vector<std::vector<int>>& blocks() const { return blocks_; }
  // P <= P' iff P' merges consecutive blocks of P.
  bool refines(const FlagType& coarser) const;
  bool operator==(const FlagType& o) const { return blocks_ == o.blocks_; }
  bool operator<(const FlagType& o) const { return blocks_ < o.blocks_; }
  std::string str() const;

 private:
  std::vector<std::vector<int>> blocks_;
};

// w P_Psi w^-1 and w P_Psi^- w^-1.
FlagType parabolic_flag(const WeylPerm& w, const PsiSet& psi);
FlagType opposite_parabolic_flag(const WeylPerm& w, const PsiSet& psi);
// Every ordered partition of {0..n-1} with the given block sizes.
std::vector<FlagType> flags_with_sizes(const std::vector<int>& sizes);

Integer n_psi_count(const PsiSet& psi);
// W_Psi membership: w maps each block of Psi onto itself.
bool in_weyl_subgroup(const WeylPerm& w, const PsiSet& psi);
// Minimal-length (lexicographically smallest) representative of w W_Psi.
WeylPerm coset_rep(const WeylPerm& w, const PsiSet& psi);
std::vector<WeylPerm> coset_reps(const PsiSet& psi);
bool is_coset_rep(const WeylPerm& w, const PsiSet& psi);

struct CellConditions {
  bool cond_i = false;
  bool cond_iii = false;
};
// cond_i: w0 w in W_Psi. cond_iii: pi = w0 w keeps the order of any two
// indices lying in distinct blocks. Disagreement raises TheoremViolation.
CellConditions cell_conditions(const WeylPerm& w, const PsiSet& psi);

struct HorosphericalData {
  PsiSet psi;
  WeylPerm w;  // w[j] = j-th index in decreasing |t_i|_v order
  std::vector<Real> values;
};
// Orders the diagonal of t by decreasing |t_i|_v (stable) and groups equal
// values. Conjugation u -> t^-1 u t contracts the unipotent radical of
// w P_Psi w^-1 at v.
HorosphericalData horospherical_data(const MatrixK& t, const Place& v);

struct ConeSplit {
  int i0 = 0;
  QVector w;
};
// Finds i0 and w with (w, v_i0) < 0 < (w, v_i) for i != i0 and the v_i with
// i != i0 spanning Q^n. Throws HypothesisViolated on bad input and
// TheoremViolation(NoSplitFound) if no such pair exists.
ConeSplit cone_split(const std::vector<QVector>& vs, const QVector& v);

// Feasible point of {x : a x >= b} by Fourier-Motzkin elimination, or empty.
std::optional<QVector> fourier_motzkin_feasible(const QMatrix& a, const QVector& b);

}  // namespace ldorb
