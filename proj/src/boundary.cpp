#include "boundary.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "errors.hpp"

namespace halfline {

BoundaryPair validate(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.dim() || a.dim() == 0) {
    throw Error(ErrorKind::dimension_mismatch, "boundary matrices A and B must share dimension n >= 1");
  }
  if (!a.all_finite() || !b.all_finite()) {
    throw Error(ErrorKind::invalid_argument, "boundary matrices contain non-finite entries");
  }
  const double herm = norm(adjoint(b) * a - adjoint(a) * b);
  if (herm > 1e-12) {
    throw Error(ErrorKind::hermiticity_violation,
                "boundary condition B^dagger A = A^dagger B fails, residual " + std::to_string(herm),
                herm);
  }
  const ComplexMatrix gram = adjoint(a) * a + adjoint(b) * b;
  const double lowest = eig_hermitian(gram).values.front();
  if (lowest <= 1e-10) {
    throw Error(ErrorKind::positivity_violation,
                "boundary condition A^dagger A + B^dagger B > 0 fails, smallest eigenvalue " +
                    std::to_string(lowest),
                lowest);
  }
  return BoundaryPair{a, b};
}

BoundaryPair from_angles(std::span<const double> thetas) {
  if (thetas.empty()) throw Error(ErrorKind::invalid_argument, "from_angles needs at least one angle");
  std::vector<cplx> sa, cb;
  for (double th : thetas) {
    if (!(th > 0.0 && th <= std::numbers::pi)) {
      throw Error(ErrorKind::out_of_range, "boundary angle " + std::to_string(th) + " outside (0, pi]", th);
    }
    // exact zeros at the Dirichlet and Neumann angles
    double s = std::sin(th), c = std::cos(th);
    if (th == std::numbers::pi) s = 0.0, c = -1.0;
    if (th == std::numbers::pi / 2) s = 1.0, c = 0.0;
    sa.push_back(-s);
    cb.push_back(c);
  }
  return validate(ComplexMatrix::diagonal(sa), ComplexMatrix::diagonal(cb));
}

bool equivalent(const BoundaryPair& p, const BoundaryPair& q) {
  const std::size_t n = p.dim();
  if (q.dim() != n) throw Error(ErrorKind::dimension_mismatch, "equivalent: dimensions differ");
  // [A_p A_q; B_p B_q] is 2n x 2n; equal column spans iff its rank is n
  std::vector<cplx> m(4 * n * n);
  const std::size_t cols = 2 * n;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      m[i * cols + j] = p.a(i, j);
      m[i * cols + n + j] = q.a(i, j);
      m[(n + i) * cols + j] = p.b(i, j);
      m[(n + i) * cols + n + j] = q.b(i, j);
    }
  const auto s = singular_values(m, 2 * n, 2 * n);
  return s[n] <= 1e-10 * s[0];
}

double residual(const BoundaryPair& p, std::span<const cplx> value_at_0,
                std::span<const cplx> derivative_at_0) {
  const std::size_t n = p.dim();
  if (value_at_0.size() != n || derivative_at_0.size() != n) {
    throw Error(ErrorKind::dimension_mismatch, "boundary residual: vector length differs from n");
  }
  double s = 0;
  for (std::size_t i = 0; i < n; ++i) {
    cplx r = 0;
    for (std::size_t j = 0; j < n; ++j)
      r += -std::conj(p.b(j, i)) * value_at_0[j] + std::conj(p.a(j, i)) * derivative_at_0[j];
    s += std::norm(r);
  }
  return std::sqrt(s);
}

std::optional<std::vector<double>> diagonal_angles(const BoundaryPair& p) {
  const std::size_t n = p.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && (std::abs(p.a(i, j)) > 1e-14 || std::abs(p.b(i, j)) > 1e-14)) return std::nullopt;
  std::vector<double> th(n);
  for (std::size_t j = 0; j < n; ++j) {
    // column j is (a_j, b_j) ~ (-sin t, cos t) up to a nonzero complex factor
    const cplx a = p.a(j, j), b = p.b(j, j);
    const cplx ref = std::abs(a) >= std::abs(b) ? a : b;
    const cplx phase = ref / std::abs(ref);
    const cplx ar = a / phase, br = b / phase;
    if (std::abs(ar.imag()) > 1e-12 * std::abs(ref) || std::abs(br.imag()) > 1e-12 * std::abs(ref))
      return std::nullopt;
    double t = std::atan2(-ar.real(), br.real());
    if (t <= 0) t += std::numbers::pi;
    if (t > std::numbers::pi) t -= std::numbers::pi;
    th[j] = t;
  }
  return th;
}

BoundaryPair dirichlet(std::size_t n) {
  return validate(ComplexMatrix(n), ComplexMatrix::identity(n));
}

BoundaryPair neumann(std::size_t n) {
  return validate(ComplexMatrix::identity(n), ComplexMatrix(n));
}

}  // namespace halfline
