#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ldorb/factorization.hpp"
#include "ldorb/weyl.hpp"

namespace ldorb {

// Names w1 P_psi^- w1^-1 x w2 P_psi w2^-1 with minimal coset representatives.
struct ParabolicPair {
  WeylPerm w1;
  PsiSet psi;
  WeylPerm w2;
  FlagType left_flag;   // w1 P_psi^- w1^-1
  FlagType right_flag;  // w2 P_psi w2^-1

  static ParabolicPair make(const WeylPerm& w1, const PsiSet& psi, const WeylPerm& w2);
  // Component-wise containment of the parabolic subgroups.
  bool contained_in(const ParabolicPair& o) const;
  std::string label() const;  // "(w1; psi; w2)"
  bool operator==(const ParabolicPair& o) const;
};

// Orbit T (left, right) pi(g1, g2); defined modulo the torus.
struct OrbitRep {
  ParabolicPair pair;
  MatrixK left;   // w1 (v^-)^-1 w1^-1
  MatrixK right;  // w2 v w2^-1
  MatrixK core;   // w1 z w2^-1 = left g1 g2^-1 right^-1
  MatrixK g1, g2;

  MatrixK point1() const { return left * g1; }
  MatrixK point2() const { return right * g2; }
};

struct LocalComponent {
  // Numeric diagonal twist at the place (any values); irrelevant to the test.
  std::vector<double> diagonal;
  std::optional<MatrixK> rational_part;
};

// Every component lies in Z_G(T_v) G(K).
bool is_locally_divergent(const std::vector<LocalComponent>& g);
// g_i g_r^-1 monomial for every i.
bool is_orbit_closed(const std::vector<MatrixK>& g);

std::vector<ParabolicPair> admissible_set(const MatrixK& g1, const MatrixK& g2, int workers = 1);
OrbitRep orbit_rep(const MatrixK& g1, const MatrixK& g2, const ParabolicPair& pair);

struct ClosurePoset {
  std::vector<OrbitRep> nodes;
  std::vector<std::pair<int, int>> edges;  // (a, b): node a lies in the closure of node b, a != b
  std::vector<std::pair<int, int>> hasse;  // covering relations only
  std::vector<int> closed_nodes;           // minimal elements
  int top = -1;
  Integer bound_total;   // sum over psi of n_psi^2
  Integer bound_closed;  // n_empty^2
};

ClosurePoset closure_poset(const MatrixK& g1, const MatrixK& g2, int workers = 1);
std::string poset_to_dot(const ClosurePoset& p);

// All (n!)^2 twisted leading minors of g are nonzero.
bool generic_position(const MatrixK& g);

enum class OrbitVerdict { Equal, Distinct, Undecided };
std::string to_string(OrbitVerdict v);

struct OrbitComparison {
  OrbitVerdict verdict = OrbitVerdict::Undecided;
  std::optional<MatrixK> gamma;           // a-point * gamma = t * b-point
  std::optional<MatrixK> t1, t2;          // diagonal torus parts
  std::string reason;
};

// Tests whether T a Gamma = T b Gamma for Gamma = SL_n(O) with O the ring of
// integers of K (K = Q: the S-integers for `primes`).
OrbitComparison orbit_equal_heuristic(const OrbitRep& a, const OrbitRep& b, int height_bound,
                                      const std::vector<unsigned long>& primes = {});

// x has all entries in O.
bool is_o_integral(const MatrixK& x, const std::vector<unsigned long>& primes);

}  // namespace ldorb
