#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ldorb/polynomial.hpp"
#include "ldorb/rational.hpp"
#include "ldorb/real.hpp"

namespace ldorb {

class FieldElement;

namespace detail {
struct FieldData;
}

// K = Q[x]/(m(x)) in the power basis, with certified numerical roots of m.
//
// Roots are ordered real roots first (ascending), then one (z, conj z) pair per
// complex place with Im z > 0, pairs ordered by real part. Real place i is
// root i; complex place j is the pair starting at index r1 + 2j.
class NumberField {
 public:
  static constexpr int kDefaultPrecisionBits = 128;

  // minpoly in ascending coefficient order. integral_basis, if given, lists
  // power-basis coordinates of degree elements spanning the ring of integers.
  static NumberField create(const std::vector<Rational>& minpoly_ascending,
                            int precision_bits = kDefaultPrecisionBits,
                            const std::optional<std::vector<std::vector<Rational>>>& integral_basis = std::nullopt);
  static NumberField rationals();

  int degree() const;
  const QPoly& minpoly() const;
  int precision_bits() const;
  int real_places() const;
  int complex_places() const;
  // False only for degree > 4, where only squarefreeness and the rational
  // root test were applied.
  bool irreducibility_verified() const;

  // All degree() roots in the order documented above.
  const std::vector<Complex>& roots() const;
  const std::vector<Real>& root_radii() const;
  const std::vector<std::complex<double>>& roots_double() const;

  FieldElement zero() const;
  FieldElement one() const;
  FieldElement generator() const;
  FieldElement from_rational(const Rational& q) const;
  FieldElement element(std::vector<Rational> coords) const;

  bool has_integral_basis() const;
  std::vector<FieldElement> integral_basis() const;
  // Coordinates of x with respect to the integral basis.
  std::vector<Rational> integral_coords(const FieldElement& x) const;
  bool is_integral(const FieldElement& x) const;

  // N_{K/Q}(x), exactly, as the determinant of multiplication by x.
  Rational norm(const FieldElement& x) const;

  // Value of x under root index k (0 <= k < degree()).
  Complex embed(const FieldElement& x, int root_index) const;
  std::complex<double> embed_double(const FieldElement& x, int root_index) const;

  bool operator==(const NumberField& o) const { return data_ == o.data_; }
  bool operator!=(const NumberField& o) const { return data_ != o.data_; }

  const detail::FieldData& data() const { return *data_; }

 private:
  friend class FieldElement;
  explicit NumberField(std::shared_ptr<const detail::FieldData> d) : data_(std::move(d)) {}
  std::shared_ptr<const detail::FieldData> data_;
};

class FieldElement {
 public:
  FieldElement() = default;

  const std::vector<Rational>& coords() const { return coords_; }
  NumberField field() const { return NumberField(field_); }
  bool is_zero() const;
  bool is_one() const;
  bool is_rational() const;
  Rational rational_value() const;  // requires is_rational()

  FieldElement operator+(const FieldElement& o) const;
  FieldElement operator-(const FieldElement& o) const;
  FieldElement operator*(const FieldElement& o) const;
  FieldElement operator/(const FieldElement& o) const;
  FieldElement operator-() const;
  FieldElement operator*(const Rational& c) const;
  FieldElement& operator+=(const FieldElement& o);
  FieldElement& operator-=(const FieldElement& o);
  FieldElement& operator*=(const FieldElement& o);
  bool operator==(const FieldElement& o) const;
  bool operator!=(const FieldElement& o) const { return !(*this == o); }

  FieldElement inverse() const;  // throws DivisionByZero
  FieldElement pow(long e) const;

  std::string str() const;

 private:
  friend class NumberField;
  FieldElement(std::shared_ptr<const detail::FieldData> f, std::vector<Rational> c)
      : field_(std::move(f)), coords_(std::move(c)) {}
  void check_same(const FieldElement& o) const;

  std::shared_ptr<const detail::FieldData> field_;
  std::vector<Rational> coords_;
};

enum class PlaceKind { Real, Complex, Finite };

struct Place {
  PlaceKind kind = PlaceKind::Real;
  int index = 0;            // embedding / pair index for archimedean places
  unsigned long prime = 0;  // finite places only

  static Place real(int i) { return {PlaceKind::Real, i, 0}; }
  static Place complex(int j) { return {PlaceKind::Complex, j, 0}; }
  static Place finite(unsigned long p) { return {PlaceKind::Finite, 0, p}; }

  bool archimedean() const { return kind != PlaceKind::Finite; }
  // Index into NumberField::roots() for archimedean places.
  int root_index(const NumberField& k) const;
  std::string label() const;
  bool operator==(const Place& o) const;
};

// Ordered place set S; validated to contain every archimedean place once.
class PlaceSet {
 public:
  PlaceSet(const NumberField& k, std::vector<Place> places);
  static PlaceSet archimedean(const NumberField& k);

  const NumberField& field() const { return field_; }
  const std::vector<Place>& places() const { return places_; }
  std::size_t size() const { return places_.size(); }
  const Place& operator[](std::size_t i) const { return places_[i]; }
  std::vector<unsigned long> finite_primes() const;
  // True if x is integral at every place outside S.
  bool is_s_integral(const FieldElement& x) const;

 private:
  NumberField field_;
  std::vector<Place> places_;
};

// Normalized |x|_v: absolute value at real places, its square at complex
// places, p^{-v_p(x)} at finite places (K = Q only).
Real abs_value(const FieldElement& x, const Place& v);
double abs_value_double(const FieldElement& x, const Place& v);

// prod_{v in S} |x|_v; equals 1 for S-units.
Real product_formula_check(const FieldElement& x, const PlaceSet& s);

// CM witness: K = F(sqrt(-d)) with F = Q[y]/(subfield_minpoly), d given in
// the power basis of F.
struct CmWitness {
  std::vector<Rational> subfield_minpoly;  // ascending
  std::vector<Rational> d;
};

enum class CmVerdict { Yes, No, Unknown };
std::string to_string(CmVerdict v);

// The subfield data recovered inside K from a witness.
struct CmStructure {
  NumberField subfield;
  FieldElement beta;          // image in K of the generator of F
  FieldElement d;             // d as an element of K
  FieldElement sqrt_minus_d;  // s with s^2 = -d
  bool subfield_totally_real = false;
  bool d_totally_positive = false;
};

// Locates F and sqrt(-d) inside K; throws BadWitness if impossible.
CmStructure cm_structure(const NumberField& k, const CmWitness& w);
CmVerdict is_cm_field(const NumberField& k, const std::optional<CmWitness>& w = std::nullopt);

// Element of K with the given values at every root of the minimal polynomial
// (in NumberField::roots() order), if its coordinates are recognizably
// rational. Callers must re-verify the defining identity exactly.
std::optional<FieldElement> recognize_element(const NumberField& k, const std::vector<Complex>& values);

// Every lambda in K with lambda^e = c (e >= 1).
std::vector<FieldElement> nth_roots(const FieldElement& c, int e);

// Image of an element of F (power-basis coordinates) under y -> beta.
FieldElement map_from_subfield(const std::vector<Rational>& coords, const FieldElement& beta);

}  // namespace ldorb
