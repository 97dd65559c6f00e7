#pragma once

#include <optional>
#include <span>
#include <vector>

#include "linalg.hpp"

namespace halfline {

// Boundary condition -B^dagger psi(0) + A^dagger psi'(0) = 0.
struct BoundaryPair {
  ComplexMatrix a;
  ComplexMatrix b;
  std::size_t dim() const { return a.dim(); }
};

BoundaryPair validate(const ComplexMatrix& a, const ComplexMatrix& b);
BoundaryPair from_angles(std::span<const double> thetas);
bool equivalent(const BoundaryPair& p, const BoundaryPair& q);
double residual(const BoundaryPair& p, std::span<const cplx> value_at_0,
                std::span<const cplx> derivative_at_0);

// Angles theta_j when (A, B) is diagonal up to a common invertible diagonal factor.
std::optional<std::vector<double>> diagonal_angles(const BoundaryPair& p);

BoundaryPair dirichlet(std::size_t n);
BoundaryPair neumann(std::size_t n);

}  // namespace halfline
