#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace halfline {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

// Dense n x n complex matrix, row-major.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t n);
  ComplexMatrix(std::size_t n, std::vector<cplx> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const cplx> d);
  static ComplexMatrix scalar(std::size_t n, cplx s);

  std::size_t dim() const { return n_; }
  cplx& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  std::span<cplx> data() { return a_; }
  std::span<const cplx> data() const { return a_; }

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(cplx s);

  bool all_finite() const;

 private:
  std::size_t n_ = 0;
  std::vector<cplx> a_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(ComplexMatrix a, cplx s);
ComplexMatrix operator*(cplx s, ComplexMatrix a);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
CVector operator*(const ComplexMatrix& a, std::span<const cplx> v);

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix inverse(const ComplexMatrix& a);
ComplexMatrix adjoint(const ComplexMatrix& a);
cplx det(const ComplexMatrix& a);
ComplexMatrix matrix_exp(const ComplexMatrix& a);

// Singular values of a general m x n matrix given row-major, descending.
std::vector<double> singular_values(std::span<const cplx> a, std::size_t rows, std::size_t cols);
std::vector<double> singular_values(const ComplexMatrix& a);
double smallest_singular_value(const ComplexMatrix& a);
double norm(const ComplexMatrix& a);  // spectral norm
double frobenius(const ComplexMatrix& a);
double max_abs(const ComplexMatrix& a);
double hermiticity_defect(const ComplexMatrix& a);  // ||a - a^dagger||

struct HermitianEigen {
  std::vector<double> values;         // ascending
  std::vector<CVector> vectors;       // vectors[i] pairs with values[i]
};
HermitianEigen eig_hermitian(const ComplexMatrix& a);

double vector_norm(std::span<const cplx> v);

}  // namespace halfline
