#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ldorb/numfield.hpp"
#include "ldorb/strata.hpp"
#include "ldorb/sunits.hpp"
#include "ldorb/weyl.hpp"

namespace ldorb {

// Set partition of {0..n-1}; blocks sorted internally and by least element.
class IndexPartition {
 public:
  IndexPartition() = default;
  explicit IndexPartition(std::vector<std::vector<int>> blocks);
  static IndexPartition singletons(int n);
  static IndexPartition whole(int n);
  static std::vector<IndexPartition> all(int n);

  int n() const { return n_; }
  const std::vector<std::vector<int>>& blocks() const { return blocks_; }
  int block_count() const { return static_cast<int>(blocks_.size()); }
  int block_of(int i) const;
  // Dimension of the diagonal torus of SL_n constant on the blocks.
  int torus_dim() const { return block_count() - 1; }

  IndexPartition join(const IndexPartition& o) const;  // finest common coarsening
  IndexPartition meet(const IndexPartition& o) const;  // coarsest common refinement
  bool refines(const IndexPartition& o) const;

  bool operator==(const IndexPartition& o) const { return blocks_ == o.blocks_; }
  bool operator<(const IndexPartition& o) const { return blocks_ < o.blocks_; }
  std::string str() const;  // 1-based, e.g. "{{1,2},{3,4}}"

 private:
  int n_ = 0;
  std::vector<std::vector<int>> blocks_;
};

// Blocks generated by i ~ j whenever x_ij != 0 (i != j).
IndexPartition centralizer_partition(const MatrixK& x);

// S(GL_{c1} x ... x GL_{ck}) for the blocks of a partition, by generators.
struct BlockSubgroup {
  IndexPartition partition;
  std::vector<MatrixK> torus_generators;      // diag(.., 2, 1/2, ..) on consecutive indices
  std::vector<MatrixK> unipotent_generators;  // E_ij(1) for i != j in one block

  bool contains(const MatrixK& x) const;
  // Rank of the subgroup of T generated by the torus generators.
  int torus_rank() const;
  // Dimension of the part of T commuting with every generator.
  int center_dim() const;
  // Every in-block elementary root group is reached by a commutator of
  // generators, and no generator leaves the block structure.
  bool derived_is_block_sl() const;
};

BlockSubgroup block_subgroup(const NumberField& k, const IndexPartition& p);

struct ClosurePrediction {
  IndexPartition partition;
  std::vector<WeylPerm> omegas;  // r - 1 twists
  std::vector<MatrixK> h;        // (omega_1^-1 g_r, ..., omega_{r-1}^-1 g_r, g_r)
  int max_dim = 0;               // torus_dim of the best join
  bool dense = false;
  bool orbit_closed = false;
  CmVerdict cm_guard = CmVerdict::Unknown;
  std::uint64_t tuples_searched = 0;
  std::vector<std::string> warnings;
};

// Exhaustive search over omega tuples for the join of the centralizer
// partitions of omega_i g_i g_r^-1 with the most blocks; ties go to the first
// tuple in lexicographic order.
ClosurePrediction maximize_centralizer(const std::vector<MatrixK>& g, CmVerdict cm = CmVerdict::Unknown,
                                       std::uint64_t budget = 2000000, int workers = 1);

// Per simple root: exponential rates of |alpha(s_k)|_1 and |alpha(t_k)|_2.
struct SequenceSpec {
  std::vector<Rational> place1_rates;
  std::vector<Rational> place2_rates;
};

// Bounded iff g1 g2^-1 lies in the big cell V_psi^- P_psi and every product
// |alpha(s_k)|_1 |alpha(t_k)|_2 stays pinched.
bool sequence_bounded(const MatrixK& g1, const MatrixK& g2, const PsiSet& psi, const SequenceSpec& spec);

OrbitRep limit_representative(const MatrixK& g1, const MatrixK& g2, const WeylPerm& w1, const WeylPerm& w2,
                              const PsiSet& psi);

// One point of a torus path: per place of S, log |t_i|_v (normalized).
struct TorusStep {
  double parameter = 0;
  std::vector<std::vector<Real>> log_abs;  // [place][i]
};

// t_k = prod_j u_j^(k * direction_j) on the diagonal entry `row`, inverse on
// the last, for k in [0, steps).
std::vector<TorusStep> unit_torus_path(const UnitGroup& u, int n, int row, const std::vector<int>& direction,
                                       int steps);

struct SystoleReport {
  int step = 0;
  double parameter = 0;
  double systole = 0;
  std::vector<std::string> argmin;  // coordinates of the shortest vector
  int search_height = 0;
};

// Shortest nonzero vector of t g O^n under max_v max_i |.|_v, over z with
// coordinate height <= height. g holds one matrix per place of S.
std::vector<SystoleReport> systole_scan(const PlaceSet& s, const std::vector<MatrixK>& g,
                                        const std::vector<TorusStep>& path, int height,
                                        std::uint64_t budget = 50000000, int workers = 1);

// Elements of O of height <= h: integers (K = Q, no primes), S-integers
// a / d in lowest terms with |a| <= h and d a product of prime powers p^e <= h
// over the primes of S, or integral-basis combinations with coefficients in
// [-h, h].
std::vector<FieldElement> small_integers(const PlaceSet& s, int h);

}  // namespace ldorb
