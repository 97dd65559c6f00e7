#pragma once

#include <optional>
#include <span>

#include "boundary.hpp"
#include "grid.hpp"
#include "linalg.hpp"

namespace halfline {

// u(t, x_l) in C^n, stored node-major: values[l * dim + i].
struct FieldState {
  double t = 0.0;
  std::size_t dim = 1;
  XGrid grid;
  CVector values;
  // exact boundary data when known (analytic data or spectral synthesis)
  std::optional<CVector> value_at_0;
  std::optional<CVector> derivative_at_0;
  double boundary_residual = 0.0;

  std::span<const cplx> at(std::size_t l) const { return {values.data() + l * dim, dim}; }
};

// Generic sampled function on a uniform grid (k on R, xi on R, ...), node-major.
struct GridFunction {
  std::size_t dim = 1;
  UniformGrid grid;
  CVector values;

  std::span<const cplx> at(std::size_t l) const { return {values.data() + l * dim, dim}; }
};

double l2_norm(const GridFunction& f);
double l2_distance(const GridFunction& a, const GridFunction& b);
double sup_norm(const GridFunction& f);

// Boundary value and derivative at x = 0: exact data if present, else one-sided
// sixth-order differences.
CVector boundary_value(const FieldState& u);
CVector boundary_derivative(const FieldState& u);
double boundary_residual(const BoundaryPair& bp, const FieldState& u);

double l2_norm(const FieldState& u);
double sup_norm(const FieldState& u);
double h1_norm(const FieldState& u);
double l2_distance(const FieldState& a, const FieldState& b);

}  // namespace halfline
