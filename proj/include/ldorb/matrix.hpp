#pragma once

#include <string>
#include <vector>

#include "ldorb/numfield.hpp"
#include "ldorb/qlinalg.hpp"

namespace ldorb {

// Dense square matrix over a number field, row-major.
class MatrixK {
 public:
  MatrixK() = default;
  MatrixK(const NumberField& k, int n);  // zero matrix
  static MatrixK identity(const NumberField& k, int n);
  static MatrixK from_rational(const NumberField& k, const QMatrix& q);
  static MatrixK diagonal(const std::vector<FieldElement>& d);

  int size() const { return n_; }
  const NumberField& field() const { return field_; }

  FieldElement& operator()(int i, int j) { return a_[i * n_ + j]; }
  const FieldElement& operator()(int i, int j) const { return a_[i * n_ + j]; }

  MatrixK operator*(const MatrixK& o) const;
  MatrixK operator+(const MatrixK& o) const;
  MatrixK operator-(const MatrixK& o) const;
  bool operator==(const MatrixK& o) const;
  bool operator!=(const MatrixK& o) const { return !(*this == o); }

  // Fraction-free elimination; divisions are exact in K.
  FieldElement det() const;
  MatrixK inverse() const;  // throws Singular
  MatrixK transpose() const;

  // Submatrix on the given row and column index lists.
  MatrixK sub(const std::vector<int>& rows, const std::vector<int>& cols) const;
  FieldElement minor(const std::vector<int>& rows, const std::vector<int>& cols) const;
  int rank(const std::vector<int>& rows, const std::vector<int>& cols) const;
  int rank() const;

  bool is_identity() const;
  bool is_diagonal() const;
  bool is_monomial() const;
  bool is_upper_triangular() const;
  bool is_upper_unipotent() const;

  std::string str() const;

 private:
  NumberField field_ = NumberField::rationals();
  int n_ = 0;
  std::vector<FieldElement> a_;
};

// Determinant / rank of an arbitrary rectangular block given as rows.
FieldElement det_of(std::vector<std::vector<FieldElement>> rows);
int rank_of(std::vector<std::vector<FieldElement>> rows);
// Basis of {x in K^cols : rows x = 0}.
std::vector<std::vector<FieldElement>> nullspace_of(std::vector<std::vector<FieldElement>> rows, const NumberField& k,
                                                    int cols);

}  // namespace ldorb
