#include "field.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace halfline {

namespace {

void require_nodes(const FieldState& u, std::size_t count) {
  if (u.grid.count < count || u.values.size() != u.grid.count * u.dim) {
    throw Error(ErrorKind::invalid_argument, "field state is too short or inconsistent");
  }
}

// derivative at node l by second-order centred differences, one-sided at the ends
cplx derivative(const FieldState& u, std::size_t l, std::size_t i) {
  const std::size_t n = u.grid.count, d = u.dim;
  const double h = u.grid.step;
  if (l == 0) return (-3.0 * u.values[i] + 4.0 * u.values[d + i] - u.values[2 * d + i]) / (2 * h);
  if (l == n - 1)
    return (3.0 * u.values[l * d + i] - 4.0 * u.values[(l - 1) * d + i] + u.values[(l - 2) * d + i]) / (2 * h);
  return (u.values[(l + 1) * d + i] - u.values[(l - 1) * d + i]) / (2 * h);
}

}  // namespace

CVector boundary_value(const FieldState& u) {
  if (u.value_at_0) return *u.value_at_0;
  require_nodes(u, 1);
  return CVector(u.values.begin(), u.values.begin() + static_cast<long>(u.dim));
}

CVector boundary_derivative(const FieldState& u) {
  if (u.derivative_at_0) return *u.derivative_at_0;
  require_nodes(u, 7);
  static const double c[7] = {-49.0 / 20, 6.0, -15.0 / 2, 20.0 / 3, -15.0 / 4, 6.0 / 5, -1.0 / 6};
  CVector out(u.dim, 0.0);
  for (std::size_t i = 0; i < u.dim; ++i) {
    for (std::size_t s = 0; s < 7; ++s) out[i] += c[s] * u.values[s * u.dim + i];
    out[i] /= u.grid.step;
  }
  return out;
}

double boundary_residual(const BoundaryPair& bp, const FieldState& u) {
  return residual(bp, boundary_value(u), boundary_derivative(u));
}

double l2_norm(const FieldState& u) {
  const auto w = simpson_weights(u.grid.count, u.grid.step);
  double s = 0;
  for (std::size_t l = 0; l < u.grid.count; ++l)
    for (std::size_t i = 0; i < u.dim; ++i) s += w[l] * std::norm(u.values[l * u.dim + i]);
  return std::sqrt(s);
}

double sup_norm(const FieldState& u) {
  double m = 0;
  for (std::size_t l = 0; l < u.grid.count; ++l) {
    double s = 0;
    for (std::size_t i = 0; i < u.dim; ++i) s += std::norm(u.values[l * u.dim + i]);
    m = std::max(m, s);
  }
  return std::sqrt(m);
}

double h1_norm(const FieldState& u) {
  require_nodes(u, 3);
  const auto w = simpson_weights(u.grid.count, u.grid.step);
  double s = 0;
  for (std::size_t l = 0; l < u.grid.count; ++l)
    for (std::size_t i = 0; i < u.dim; ++i)
      s += w[l] * (std::norm(u.values[l * u.dim + i]) + std::norm(derivative(u, l, i)));
  return std::sqrt(s);
}

double l2_distance(const FieldState& a, const FieldState& b) {
  if (a.values.size() != b.values.size()) throw Error(ErrorKind::dimension_mismatch, "field states differ in shape");
  FieldState d = a;
  for (std::size_t q = 0; q < d.values.size(); ++q) d.values[q] -= b.values[q];
  return l2_norm(d);
}

double l2_norm(const GridFunction& f) {
  const auto w = simpson_weights(f.grid.count, f.grid.step);
  double s = 0;
  for (std::size_t l = 0; l < f.grid.count; ++l)
    for (std::size_t i = 0; i < f.dim; ++i) s += w[l] * std::norm(f.values[l * f.dim + i]);
  return std::sqrt(s);
}

double l2_distance(const GridFunction& a, const GridFunction& b) {
  if (a.values.size() != b.values.size()) throw Error(ErrorKind::dimension_mismatch, "grid functions differ in shape");
  GridFunction d = a;
  for (std::size_t q = 0; q < d.values.size(); ++q) d.values[q] -= b.values[q];
  return l2_norm(d);
}

double sup_norm(const GridFunction& f) {
  double m = 0;
  for (std::size_t l = 0; l < f.grid.count; ++l) {
    double s = 0;
    for (std::size_t i = 0; i < f.dim; ++i) s += std::norm(f.values[l * f.dim + i]);
    m = std::max(m, s);
  }
  return std::sqrt(m);
}

}  // namespace halfline
