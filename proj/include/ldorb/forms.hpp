#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ldorb/matrix.hpp"
#include "ldorb/numfield.hpp"
#include "ldorb/sampling.hpp"

namespace ldorb {

// Polynomial over K in n variables: exponent vector -> coefficient.
using PolyK = std::map<std::vector<int>, FieldElement>;

// f_v = alpha_v * prod_i l_i^(v)(x), one product of m independent linear
// forms in n variables per place of S.
class DecomposableForm {
 public:
  DecomposableForm(const PlaceSet& s, int n_vars, std::vector<std::vector<std::vector<FieldElement>>> forms,
                   std::optional<std::vector<FieldElement>> alpha = std::nullopt);

  const PlaceSet& places() const { return places_; }
  int n_vars() const { return n_; }
  int m() const { return m_; }
  // forms()[v][i][j]: coefficient of x_j in the i-th form at place v.
  const std::vector<std::vector<std::vector<FieldElement>>>& forms() const { return forms_; }
  const std::vector<FieldElement>& alpha() const { return alpha_; }

  // For m = n: first form divided by det, so each coefficient matrix has
  // determinant 1; the determinant moves into alpha.
  DecomposableForm normalized() const;
  MatrixK coefficient_matrix(int v) const;  // m = n only

  PolyK expand(int v, bool with_alpha = true) const;
  FieldElement evaluate(int v, const std::vector<FieldElement>& z) const;

 private:
  PlaceSet places_;
  int n_ = 0, m_ = 0;
  std::vector<std::vector<std::vector<FieldElement>>> forms_;
  std::vector<FieldElement> alpha_;
};

PolyK multiply(const PolyK& a, const PolyK& b);
PolyK linear_poly(const std::vector<FieldElement>& coeffs);

// True iff every f_v is a K-multiple of one polynomial.
bool proportionality_test(const DecomposableForm& f);

// Substitutes x = P y for random small integer n x m matrices P until each
// family stays independent and the places stay non-proportional.
DecomposableForm reduce_to_square(const DecomposableForm& f, int trials, std::uint64_t seed = 1);

struct FormGroup {
  std::vector<FieldElement> alpha;
  std::vector<MatrixK> g;  // f_v(x) = alpha_v * f0(g_v x), f0 = x_1 ... x_n
};

FormGroup form_to_group(const DecomposableForm& f);

// Target per place: a complex number at archimedean places, a rational at
// finite places.
struct PlaceTarget {
  std::complex<double> value;
  Rational finite;
};

struct DensityOptions {
  bool stop_at_first = true;
  int workers = 1;
  std::uint64_t budget = 2000000000ULL;
  CmVerdict cm = CmVerdict::No;
};

struct DensityResult {
  std::optional<std::vector<FieldElement>> witness;
  double best_distance = 0;  // max_v |f_v(z) - t_v|_v / eps_v; a hit is < 1
  std::vector<FieldElement> best_point;
  std::uint64_t points_scanned = 0;
  std::vector<std::string> warnings;
};

// Scans z in O^n with coordinates from small_integers(S, height) in
// lexicographic order.
DensityResult density_probe(const DecomposableForm& f, const std::vector<PlaceTarget>& target,
                            const std::vector<double>& epsilon, int height, const DensityOptions& opt = {});

enum class CmCheck { ProductBound, CommonLine, Violation, Excluded };
std::string to_string(CmCheck c);

struct CmCheckResult {
  CmCheck verdict = CmCheck::Excluded;
  double product = 0;  // prod_v |f_v(z)|_v (normalized)
  double bound = 0;    // C = prod_v sigma_v(d) / (4 l^4)
  std::vector<std::complex<double>> values;
};

// z = gamma + sqrt(-d) delta with gamma, delta in O_F^n given in the power
// basis of F. Forms and alpha must have coefficients in F.
CmCheckResult cm_bound_check(const DecomposableForm& f, const CmStructure& cm,
                             const std::vector<std::vector<Rational>>& gamma,
                             const std::vector<std::vector<Rational>>& delta, int l = 1);

struct CmScanResult {
  std::uint64_t points = 0, product_bound = 0, common_line = 0, excluded = 0, violations = 0;
  double min_product = 0;  // smallest product among product_bound points
  std::vector<std::vector<long>> violating;  // integer coordinates
};

// All gamma, delta with integer coordinates (power basis of F) of total L1
// norm <= height; n = 2 forms only.
CmScanResult cm_bound_scan(const DecomposableForm& f, const CmStructure& cm, int height, int l = 1, int workers = 1);

struct TwoPlaceReport {
  std::uint64_t points = 0;
  std::uint64_t nonzero_values = 0;
  std::uint64_t distinct_values = 0;
  double min_gap = 0;  // smallest max-norm distance between distinct value vectors in the window
  double window = 0;
};

TwoPlaceReport two_place_diagnostic(const DecomposableForm& f, int height, double window = 10);

}  // namespace ldorb
