#include "linemap.hpp"

#include <cmath>

#include "errors.hpp"

namespace halfline {

namespace {

ComplexMatrix block_diag(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t n = a.dim();
  ComplexMatrix m(2 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      m(i, j) = a(i, j);
      m(n + i, n + j) = b(i, j);
    }
  return m;
}

}  // namespace

HalfLineForm to_halfline(const LineProblem& lp) {
  const std::size_t n = lp.dim;
  if (lp.transmission.dim() != 2 * n) {
    throw Error(ErrorKind::dimension_mismatch, "transmission pair must be 2n x 2n");
  }
  HalfLineForm out;
  out.boundary = validate(lp.transmission.a, lp.transmission.b);
  lp.grid.validate("line potential grid");
  PotentialSpec v;
  v.dim = 2 * n;
  v.grid = lp.grid;
  v.breakpoints = {0.0};
  if (!lp.q) {
    v.kind = PotentialKind::zero;
    v.tag = "zero";
    v.samples.assign(lp.grid.count, ComplexMatrix(2 * n));
  } else {
    v.kind = PotentialKind::closed_form;
    v.tag = "line";
    auto q = lp.q;
    v.exact = [q](double x) { return block_diag(q(x), q(-x)); };
    v.samples.resize(lp.grid.count);
    for (std::size_t l = 0; l < lp.grid.count; ++l) {
      v.samples[l] = v.exact(lp.grid.at(l));
      check_hermitian(v.samples[l], "line potential sample");
    }
  }
  out.potential = std::move(v);
  if (lp.n_plus || lp.n_minus) {
    auto np = lp.n_plus, nm = lp.n_minus;
    out.nonlinearity = user_nonlinearity(
        [np, nm, n](std::span<const double> mu) {
          return block_diag(np ? np(mu) : ComplexMatrix(n), nm ? nm(mu) : ComplexMatrix(n));
        },
        lp.alpha);
  }
  return out;
}

FieldState fold(const LineField& v) {
  const std::size_t n = v.dim, nx = v.half.count;
  if (v.plus.size() != nx * n || v.minus.size() != nx * n) {
    throw Error(ErrorKind::dimension_mismatch, "line field does not match its grid");
  }
  FieldState psi;
  psi.t = v.t;
  psi.dim = 2 * n;
  psi.grid = v.half;
  psi.values.resize(nx * 2 * n);
  for (std::size_t l = 0; l < nx; ++l)
    for (std::size_t i = 0; i < n; ++i) {
      psi.values[l * 2 * n + i] = v.plus[l * n + i];
      psi.values[l * 2 * n + n + i] = v.minus[l * n + i];
    }
  return psi;
}

LineField unfold(const FieldState& psi) {
  if (psi.dim % 2 != 0) throw Error(ErrorKind::dimension_mismatch, "unfold needs an even number of components");
  const std::size_t n = psi.dim / 2, nx = psi.grid.count;
  LineField v;
  v.dim = n;
  v.half = psi.grid;
  v.t = psi.t;
  v.plus.resize(nx * n);
  v.minus.resize(nx * n);
  for (std::size_t l = 0; l < nx; ++l)
    for (std::size_t i = 0; i < n; ++i) {
      v.plus[l * n + i] = psi.values[l * 2 * n + i];
      v.minus[l * n + i] = psi.values[l * 2 * n + n + i];
    }
  return v;
}

double l2_norm(const LineField& v) { return l2_norm(fold(v)); }

double l2_distance(const LineField& a, const LineField& b) { return l2_distance(fold(a), fold(b)); }

BoundaryPair delta_boundary(std::size_t n, const ComplexMatrix& lambda) {
  if (lambda.dim() != n) throw Error(ErrorKind::dimension_mismatch, "coupling matrix has the wrong size");
  check_hermitian(lambda, "delta coupling");
  ComplexMatrix a(2 * n), b(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    a(i, n + i) = 1.0;
    a(n + i, n + i) = 1.0;
    b(i, i) = -1.0;
    b(n + i, i) = 1.0;
    for (std::size_t j = 0; j < n; ++j) b(i, n + j) = lambda(i, j);
  }
  return validate(a, b);
}

double delta_jump_residual(const FieldState& folded, const ComplexMatrix& lambda) {
  const std::size_t n = lambda.dim();
  if (folded.dim != 2 * n) throw Error(ErrorKind::dimension_mismatch, "folded state and coupling differ in size");
  const CVector u0 = boundary_value(folded), d0 = boundary_derivative(folded);
  CVector v0(n);
  for (std::size_t i = 0; i < n; ++i) v0[i] = 0.5 * (u0[i] + u0[n + i]);
  const CVector lv = lambda * std::span<const cplx>(v0);
  double worst = 0;
  for (std::size_t i = 0; i < n; ++i) {
    worst = std::max(worst, std::abs(u0[i] - u0[n + i]));
    // psi_2(x) = v(-x) so v'(0-) = -psi_2'(0)
    worst = std::max(worst, std::abs(d0[i] + d0[n + i] - lv[i]));
  }
  return worst;
}

LineScatteringReport verify_line_scattering(double lambda, const KGrid& k, double h) {
  LineScatteringReport rep;
  rep.lambda = lambda;
  const auto bp = delta_boundary(1, ComplexMatrix{{lambda}});
  const auto v = zero_potential(2, XGrid{0.0, h, 3});
  const auto jt = solve_m(v, k);
  const auto sd = scattering_matrix(jt, bp);
  rep.classification = sd.classification;
  for (std::size_t j = 0; j < sd.k.size(); ++j) {
    const double kv = sd.k[j];
    // incidence from x > 0: reflection stays in channel 1, transmission leaves through channel 2
    const cplx r = sd.S[j](0, 0), t = sd.S[j](1, 0);
    const cplx d(-lambda, 2 * kv);
    const cplx re = lambda / d, te = cplx(0, 2 * kv) / d;
    rep.k.push_back(kv);
    rep.r.push_back(r);
    rep.t.push_back(t);
    rep.r_exact.push_back(re);
    rep.t_exact.push_back(te);
    rep.max_error = std::max({rep.max_error, std::abs(r - re), std::abs(t - te)});
    rep.max_unitarity = std::max(rep.max_unitarity, std::abs(std::norm(r) + std::norm(t) - 1.0));
  }
  return rep;
}

ZeroEnergyReport zero_energy_line(const std::function<double(double)>& q, double R, double h, double tol) {
  if (!(R > 0) || !(h > 0)) throw Error(ErrorKind::invalid_argument, "zero_energy_line needs R > 0 and h > 0");
  // v'' = q v, RK4 from -R with v = 1, v' = 0
  double v = 1.0, dv = 0.0, x = -R;
  const auto steps = static_cast<std::size_t>(std::ceil(2 * R / h));
  const double s = 2 * R / static_cast<double>(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    const double k1v = dv, k1d = q(x) * v;
    const double k2v = dv + 0.5 * s * k1d, k2d = q(x + 0.5 * s) * (v + 0.5 * s * k1v);
    const double k3v = dv + 0.5 * s * k2d, k3d = q(x + 0.5 * s) * (v + 0.5 * s * k2v);
    const double k4v = dv + s * k3d, k4d = q(x + s) * (v + s * k3v);
    v += s / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
    dv += s / 6 * (k1d + 2 * k2d + 2 * k3d + k4d);
    x += s;
  }
  ZeroEnergyReport rep;
  rep.slope = dv;
  rep.classification = std::abs(dv) < tol ? Classification::exceptional : Classification::generic;
  return rep;
}

}  // namespace halfline
