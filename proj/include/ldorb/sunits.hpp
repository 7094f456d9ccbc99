#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ldorb/numfield.hpp"

namespace ldorb {

struct UnitGroup {
  PlaceSet places;
  std::vector<FieldElement> fundamental_units;
  int torsion_order = 2;
  // Row i: log |u_i|_v over the places of S.
  std::vector<std::vector<Real>> log_matrix;

  int rank() const { return static_cast<int>(fundamental_units.size()); }
};

// Number of roots of unity in K.
int torsion_order(const NumberField& k);
Rational trace(const FieldElement& x);

// Fundamental unit (> 1 at the larger real embedding) of the order spanned by
// the integral basis, or of Z[theta] when none is given.
FieldElement real_quadratic_fundamental_unit(const NumberField& k);

// Validates supplied units, or builds them for real quadratic K with S the
// two real places, and for K = Q.
UnitGroup unit_group_build(const PlaceSet& s, const std::optional<std::vector<FieldElement>>& supplied = std::nullopt);

struct UnitReduction {
  std::vector<std::int64_t> exponents;  // per fundamental unit, multiples of m
  Real kappa;
  std::vector<Real> reduced;  // |xi|_v a_v
};

// a_v > 0 with prod a_v = 1 (within 1e-6). Finds xi in the m-th powers of
// the units with 1/kappa <= |xi|_v a_v <= kappa.
UnitReduction unit_reduce(const std::vector<Real>& a, const UnitGroup& u, int m);

// Exhaustive search over exponent boxes [-bound, bound]^rank (oracle).
UnitReduction unit_reduce_brute_force(const std::vector<Real>& a, const UnitGroup& u, int m, int bound);

enum class ClosureKind { Discrete, Ray, CircleTimesCyclic, Spiral, Full };
std::string to_string(ClosureKind k);

struct ClosureWitness {
  // Two elements of the unit group (exponent vectors over the fundamental
  // units, last entry the power of the torsion generator at complex places)
  // lying in the identity component; multiples of the second reduced modulo
  // the first never return within `min_return` and leave gaps <= `max_gap`
  // (both relative to the first).
  std::vector<std::vector<Integer>> elements;
  double min_return = 0;
  double max_gap = 0;
  int multiples = 0;
};

struct UnitClosure {
  ClosureKind kind = ClosureKind::Discrete;
  int identity_component_dim = 0;
  int relation_rank = 0;
  std::vector<std::vector<Integer>> relations;  // integer relations found
  double alpha = 0, beta = 0;                   // direction (log-radius, angle) for spirals
  std::optional<ClosureWitness> witness;
  double certificate_margin = 0;  // smallest Gram-Schmidt norm of the non-relation part / H
  std::vector<std::string> notes;
};

struct ClosureOptions {
  double height_bound = 1e6;
  CmVerdict cm = CmVerdict::Unknown;
};

// Closure of the image of the S-units in K_{v1}^*. Throws
// InconclusivePrecision when no certificate is reached and TheoremViolation
// when the verdict contradicts the known cases.
UnitClosure unit_closure_classify(const UnitGroup& u, const Place& v1, const ClosureOptions& opt = {});

}  // namespace ldorb
