#include "spectral.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "errors.hpp"
#include "parallel.hpp"

namespace halfline {

namespace {

const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

ComplexMatrix jost_s(const JostTable& jt, const BoundaryPair& bp, std::size_t ip, std::size_t im) {
  const double k = jt.k[ip];
  const JostPoint minus{jt.m0[im], jt.dm_dx0[im], ComplexMatrix(jt.dim)};
  const JostPoint plus{jt.m0[ip], jt.dm_dx0[ip], ComplexMatrix(jt.dim)};
  return jost_matrix_from(plus, k, bp) * inverse(jost_matrix_from(minus, -k, bp)) * cplx(-1.0);
}

}  // namespace

ComplexMatrix physical_solution(const JostTable& jt, const ScatteringData& sd, double k, double x) {
  const ComplexMatrix fm = jt.m(-k, x) * std::exp(cplx(0, -k * x));
  const ComplexMatrix fp = jt.m(k, x) * std::exp(cplx(0, k * x));
  return fm + fp * sd.at(k);
}

TransformGrids transform_grids(double length, double h, double k_max, double dk) {
  TransformGrids g{UniformGrid::covering(0.0, length, h, true), UniformGrid::covering(0.0, k_max, dk, true)};
  check_grid_guard(g.k.back(), g.x.step);
  if (!(g.k.step < std::numbers::pi / (2.0 * g.x.back()))) {
    throw Error(ErrorKind::resolution,
                "k step " + std::to_string(g.k.step) + " aliases on [0, " + std::to_string(g.x.back()) +
                    "]: need dk < pi / (2 L)",
                g.k.step);
  }
  return g;
}

SpectralTransform build_transform(const JostTable& jt, const ScatteringData& sd, const BoundaryPair& bp,
                                  const TransformGrids& grids, const BoundStateScan* scan) {
  if (!jt.has_profiles()) throw Error(ErrorKind::invalid_argument, "build_transform needs Jost profiles");
  if (bp.dim() != jt.dim) throw Error(ErrorKind::dimension_mismatch, "boundary and potential dimensions differ");
  grids.x.validate("transform x grid");
  grids.k.validate("transform k grid");
  if (grids.k.start != 0.0) throw Error(ErrorKind::invalid_argument, "transform k grid must start at 0");

  SpectralTransform st;
  const std::size_t n = jt.dim, nn = n * n, nx = grids.x.count, nk = grids.k.count;
  st.dim = n;
  st.xgrid = grids.x;
  st.kgrid = grids.k;
  st.wx = simpson_weights(nx, grids.x.step);
  st.wk = simpson_weights(nk, grids.k.step);
  st.boundary = bp;
  st.S.assign(nk, ComplexMatrix(n));
  st.psi0.assign(nk, ComplexMatrix(n));
  st.dpsi0.assign(nk, ComplexMatrix(n));
  st.a_.assign(nk * nx * nn, 0.0);
  if (scan) {
    st.has_bound_states = !scan->detected.empty();
    st.bound_state_kappas = scan->detected;
  }

  parallel_for(nk, [&](std::size_t j) {
    const double k = grids.k.at(j);
    const std::size_t ip = jt.k_node(k), im = jt.k_node(-k);
    const ComplexMatrix s = (k == 0.0) ? sd.S0 : jost_s(jt, bp, ip, im);
    const ComplexMatrix sd_ = adjoint(s);
    st.S[j] = s;
    const cplx ik(0, k);
    st.psi0[j] = jt.m0[ip] + jt.m0[im] * sd_;
    st.dpsi0[j] = (jt.m0[ip] * ik + jt.dm_dx0[ip]) + (jt.m0[im] * (-ik) + jt.dm_dx0[im]) * sd_;
    for (std::size_t l = 0; l < nx; ++l) {
      const double x = grids.x.at(l);
      const cplx ep = std::exp(cplx(0, k * x)), em = std::conj(ep);
      ComplexMatrix psi;
      if (x >= jt.x_support) {
        psi = ComplexMatrix::scalar(n, ep) + sd_ * em;
      } else {
        psi = jt.m(k, x) * ep + jt.m(-k, x) * sd_ * em;
      }
      cplx* dst = &st.a_[(j * nx + l) * nn];
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) dst[r * n + c] = std::conj(psi(c, r)) * kInvSqrt2Pi;
    }
  });

  double tail = 0;
  for (double x : grids.x.points()) {
    if (x >= jt.x_support) break;
    tail = std::max(tail, norm(jt.m(grids.k.back(), x) - ComplexMatrix::identity(n)));
  }
  st.k_tail = tail;

  // smooth bump well inside the window, band-limited relative to K
  const double L = grids.x.back(), K = grids.k.back();
  const double width = std::max(8.0 / K, 6.0 * grids.x.step);
  const double centre = 0.4 * L;
  CVector probe(nx * n, 0.0);
  for (std::size_t l = 0; l < nx; ++l) {
    const double z = (grids.x.at(l) - centre) / width;
    probe[l * n] = std::exp(-0.5 * z * z) * cplx(1.0, 0.3 * z);
  }
  double pn = 0;
  for (std::size_t l = 0; l < nx; ++l) pn += st.wx[l] * std::norm(probe[l * n]);
  st.isometry_residual = std::abs(st.k_norm(st.forward(probe)) / std::sqrt(pn) - 1.0);
  return st;
}

double SpectralTransform::k_norm(std::span<const cplx> z) const {
  double s = 0;
  for (std::size_t j = 0; j < nk(); ++j)
    for (std::size_t i = 0; i < dim; ++i) s += wk[j] * std::norm(z[j * dim + i]);
  return std::sqrt(s);
}

CVector SpectralTransform::forward(std::span<const cplx> u) const {
  const std::size_t n = dim, nn = n * n, nxx = nx();
  if (u.size() != nxx * n) throw Error(ErrorKind::dimension_mismatch, "forward: field size does not match the x grid");
  CVector v(u.size());
  for (std::size_t l = 0; l < nxx; ++l)
    for (std::size_t i = 0; i < n; ++i) v[l * n + i] = wx[l] * u[l * n + i];
  CVector out(nk() * n, 0.0);
  parallel_for(nk(), [&](std::size_t j) {
    if (n == 1) {
      const double* a = reinterpret_cast<const double*>(&a_[j * nxx]);
      const double* x = reinterpret_cast<const double*>(v.data());
      double sr = 0, si = 0;
      for (std::size_t l = 0; l < nxx; ++l) {
        const double ar = a[2 * l], ai = a[2 * l + 1], xr = x[2 * l], xi = x[2 * l + 1];
        sr += ar * xr - ai * xi;
        si += ar * xi + ai * xr;
      }
      out[j] = cplx(sr, si);
      return;
    }
    for (std::size_t l = 0; l < nxx; ++l) {
      const cplx* blk = &a_[(j * nxx + l) * nn];
      for (std::size_t r = 0; r < n; ++r) {
        cplx s = 0;
        for (std::size_t c = 0; c < n; ++c) s += blk[r * n + c] * v[l * n + c];
        out[j * n + r] += s;
      }
    }
  });
  return out;
}

CVector SpectralTransform::adjoint(std::span<const cplx> z) const {
  const std::size_t n = dim, nn = n * n, nxx = nx(), nkk = nk();
  if (z.size() != nkk * n) throw Error(ErrorKind::dimension_mismatch, "adjoint: coefficient size does not match the k grid");
  CVector y(z.size());
  for (std::size_t j = 0; j < nkk; ++j)
    for (std::size_t i = 0; i < n; ++i) y[j * n + i] = wk[j] * z[j * n + i];
  CVector out(nxx * n, 0.0);
  const std::size_t chunk = 512;
  const std::size_t chunks = (nxx + chunk - 1) / chunk;
  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t lo = c * chunk, hi = std::min(nxx, lo + chunk);
    if (n == 1) {
      double* o = reinterpret_cast<double*>(out.data());
      for (std::size_t j = 0; j < nkk; ++j) {
        const double yr = y[j].real(), yi = y[j].imag();
        const double* a = reinterpret_cast<const double*>(&a_[j * nxx]);
        for (std::size_t l = lo; l < hi; ++l) {
          const double ar = a[2 * l], ai = a[2 * l + 1];
          o[2 * l] += ar * yr + ai * yi;
          o[2 * l + 1] += ar * yi - ai * yr;
        }
      }
      return;
    }
    for (std::size_t j = 0; j < nkk; ++j)
      for (std::size_t l = lo; l < hi; ++l) {
        const cplx* blk = &a_[(j * nxx + l) * nn];
        for (std::size_t r = 0; r < n; ++r) {
          cplx s = 0;
          for (std::size_t q = 0; q < n; ++q) s += std::conj(blk[q * n + r]) * y[j * n + q];
          out[l * n + r] += s;
        }
      }
  });
  return out;
}

FieldState SpectralTransform::synthesize(std::span<const cplx> z, double t) const {
  FieldState u;
  u.t = t;
  u.dim = dim;
  u.grid = xgrid;
  u.values = adjoint(z);
  CVector v0(dim, 0.0), d0(dim, 0.0);
  for (std::size_t j = 0; j < nk(); ++j) {
    const CVector a = psi0[j] * z.subspan(j * dim, dim);
    const CVector b = dpsi0[j] * z.subspan(j * dim, dim);
    for (std::size_t i = 0; i < dim; ++i) {
      v0[i] += wk[j] * kInvSqrt2Pi * a[i];
      d0[i] += wk[j] * kInvSqrt2Pi * b[i];
    }
  }
  u.value_at_0 = v0;
  u.derivative_at_0 = d0;
  u.boundary_residual = residual(boundary, v0, d0);
  return u;
}

CVector SpectralTransform::analyze(const FieldState& u) const {
  if (u.dim != dim || u.grid.count != xgrid.count || std::abs(u.grid.step - xgrid.step) > 1e-12 * xgrid.step) {
    throw Error(ErrorKind::dimension_mismatch, "field grid does not match the transform grid");
  }
  return forward(u.values);
}

FieldState propagate_linear(const SpectralTransform& st, const FieldState& psi, double t) {
  if (st.has_bound_states) {
    throw Error(ErrorKind::bound_states_present,
                "propagate_linear: the operator has negative eigenvalues; the continuous-spectrum "
                "transform is not unitary",
                st.bound_state_kappas.empty() ? 0.0 : -st.bound_state_kappas.front() * st.bound_state_kappas.front());
  }
  CVector z = st.analyze(psi);
  for (std::size_t j = 0; j < st.nk(); ++j) {
    const double k = st.kgrid.at(j);
    const cplx phase = std::exp(cplx(0, -t * k * k));
    for (std::size_t i = 0; i < st.dim; ++i) z[j * st.dim + i] *= phase;
  }
  return st.synthesize(z, psi.t + t);
}

TransformBundle make_transform(const PotentialSpec& v, const BoundaryPair& bp, const TransformSetup& setup) {
  const auto& g = setup.grids;
  auto ratio = static_cast<std::size_t>(std::ceil(g.x.step / setup.jost_step - 1e-9));
  if (ratio % 2 == 1) ++ratio;
  const double hj = g.x.step / static_cast<double>(ratio);
  const auto count = static_cast<std::size_t>(std::ceil(v.x_max() / hj - 1e-9)) + 1;
  const PotentialSpec vj = resample(v, XGrid{0.0, hj, count});

  TransformBundle out;
  JostOptions opt;
  opt.store_profiles = true;
  opt.profile_stride = ratio;
  opt.k_derivative = false;
  out.jost = solve_m(vj, g.k, opt);
  out.scattering = scattering_matrix(out.jost, bp);
  if (setup.scan) {
    const double kmax = setup.scan_kappa_max > 0 ? setup.scan_kappa_max : std::sqrt(v.max_norm()) + 1.0;
    out.scan = bound_state_scan(vj, bp, kmax, setup.scan_count);
  }
  out.transform = build_transform(out.jost, out.scattering, bp, g, setup.scan ? &out.scan : nullptr);
  return out;
}

EnergyForm energy_form(const BoundaryPair& bp, const PotentialSpec& v, const FieldState& psi) {
  if (psi.dim != v.dim || bp.dim() != v.dim) throw Error(ErrorKind::dimension_mismatch, "energy_form: dimensions differ");
  const std::size_t nx = psi.grid.count, n = psi.dim;
  if (nx < 5) throw Error(ErrorKind::invalid_argument, "energy_form needs at least 5 nodes");
  const double h = psi.grid.step;
  const auto w = simpson_weights(nx, h);
  double kinetic = 0, pot = 0;
  for (std::size_t l = 0; l < nx; ++l) {
    const CVector val(psi.values.begin() + static_cast<long>(l * n), psi.values.begin() + static_cast<long>((l + 1) * n));
    const ComplexMatrix vl = v.at(psi.grid.at(l));
    const CVector vv = vl * std::span<const cplx>(val);
    for (std::size_t i = 0; i < n; ++i) {
      const cplx* u = psi.values.data();
      auto at = [&](std::size_t m) { return u[m * n + i]; };
      cplx d;
      if (l >= 2 && l + 2 < nx) {
        d = (at(l - 2) - 8.0 * at(l - 1) + 8.0 * at(l + 1) - at(l + 2)) / (12 * h);
      } else if (l < 2) {
        d = (-25.0 * at(l) + 48.0 * at(l + 1) - 36.0 * at(l + 2) + 16.0 * at(l + 3) - 3.0 * at(l + 4)) / (12 * h);
      } else {
        d = (25.0 * at(l) - 48.0 * at(l - 1) + 36.0 * at(l - 2) - 16.0 * at(l - 3) + 3.0 * at(l - 4)) / (12 * h);
      }
      kinetic += w[l] * std::norm(d);
      pot += w[l] * (std::conj(val[i]) * vv[i]).real();
    }
  }
  EnergyForm e;
  e.value = kinetic + pot;
  if (const auto th = diagonal_angles(bp)) {
    const CVector u0 = boundary_value(psi);
    for (std::size_t i = 0; i < n; ++i) {
      const double t = (*th)[i];
      if (std::abs(t - std::numbers::pi) < 1e-14 || std::abs(t - std::numbers::pi / 2) < 1e-14) continue;
      e.value -= std::norm(u0[i]) / std::tan(t);
    }
    e.boundary_term_included = true;
  }
  return e;
}

}  // namespace halfline
