#include "jost.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "errors.hpp"
#include "parallel.hpp"

namespace halfline {

namespace {

// D(k,s) = (e^{2iks} - 1) / (2ik) = s e^{iks} sinc(ks)
cplx kernel_d(cplx k, double s) {
  const cplx z = k * s;
  cplx sinc;
  if (std::abs(z) < 1e-4) sinc = 1.0 - z * z / 6.0;
  else sinc = std::sin(z) / z;
  return s * std::exp(cplx(0, 1) * z) * sinc;
}

// dD/dk(k,s) = 2i s^2 phi2(2iks), phi2(z) = (e^z (z-1) + 1) / z^2
cplx kernel_dk(cplx k, double s) {
  const cplx z = cplx(0, 2) * k * s;
  cplx phi;
  if (std::abs(z) < 0.5) {
    // sum_n z^n (n+1)/(n+2)!
    phi = 0.0;
    cplx zn = 1.0;
    double fact = 2.0;  // (n+2)!
    for (int n = 0; n < 24; ++n) {
      phi += zn * (static_cast<double>(n + 1) / fact);
      zn *= z;
      fact *= static_cast<double>(n + 3);
    }
  } else {
    phi = (std::exp(z) * (z - 1.0) + 1.0) / (z * z);
  }
  return cplx(0, 2) * s * s * phi;
}

constexpr std::size_t kMaxDim = 8;
using Block = std::array<cplx, kMaxDim * kMaxDim>;

struct SweepResult {
  std::vector<cplx> m, dmdx, dmdk;  // record nodes, n*n each
};

// Backward sweep of the trapezoid Volterra system on nodes 0, step, 2 step, ..., end
// (fine-grid indices). Records every `record` fine nodes. N > 0 fixes the dimension.
template <std::size_t N>
SweepResult sweep(const PotentialSpec& v, std::size_t support, std::size_t end, std::size_t step,
                  std::size_t record, cplx k, bool with_dk, double bound) {
  const std::size_t n = N > 0 ? N : v.dim;
  const std::size_t nn = n * n;
  const double h = v.grid.step * static_cast<double>(step);
  const cplx d = kernel_d(k, h);
  const cplx dk = with_dk ? kernel_dk(k, h) : cplx(0);
  const cplx e = std::exp(cplx(0, 2) * k * h);
  const cplx two_ih_e = cplx(0, 2) * h * e;

  const std::size_t records = end / record + 1;
  SweepResult out;
  out.m.assign(records * nn, 0.0);
  out.dmdx.assign(records * nn, 0.0);
  if (with_dk) out.dmdk.assign(records * nn, 0.0);

  Block P{}, I{}, R{}, Kd{}, Pk{}, Ik{}, g{}, gk{}, m{}, mk{}, dx{};
  static const Block zeros{};

  auto potential = [&](std::size_t j) -> const cplx* {
    return j < support ? v.samples[j].data().data() : zeros.data();
  };
  auto matmul = [n](const cplx* a, const cplx* b, cplx* c) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        cplx s = 0;
        for (std::size_t l = 0; l < n; ++l) s += a[i * n + l] * b[l * n + j];
        c[i * n + j] = s;
      }
  };
  auto store = [&](std::size_t j) {
    if (j % record != 0) return;
    const auto at = static_cast<long>((j / record) * nn);
    std::copy(m.begin(), m.begin() + static_cast<long>(nn), out.m.begin() + at);
    std::copy(dx.begin(), dx.begin() + static_cast<long>(nn), out.dmdx.begin() + at);
    if (with_dk) std::copy(mk.begin(), mk.begin() + static_cast<long>(nn), out.dmdk.begin() + at);
  };

  // node end: m = I, derivatives vanish
  for (std::size_t i = 0; i < n; ++i) m[i * n + i] = 1.0;
  std::copy(potential(end), potential(end) + nn, g.begin());
  store(end);

  for (std::size_t j = end; j >= step;) {
    const std::size_t prev = j;
    j -= step;
    const double w = (prev == end) ? 0.5 * h : h;
    double big = 0.0;
    for (std::size_t q = 0; q < nn; ++q) {
      const cplx i_prev = I[q];
      P[q] += w * g[q];
      R[q] = e * (w * g[q] + R[q]);
      I[q] = d * P[q] + e * i_prev;
      if (with_dk) {
        Kd[q] = dk * P[q] + two_ih_e * i_prev + e * Kd[q];
        Pk[q] += w * gk[q];
        Ik[q] = d * Pk[q] + e * Ik[q];
        mk[q] = Kd[q] + Ik[q];
      }
      m[q] = I[q];
      if (q % (n + 1) == 0) m[q] += 1.0;
      big = std::max(big, std::norm(m[q]));
    }
    if (!(big <= bound * bound)) {
      throw Error(ErrorKind::divergence,
                  "Jost solve exceeds the a-priori bound at x = " + std::to_string(v.grid.at(j)) +
                      " (|m| = " + std::to_string(std::sqrt(big)) + ")",
                  std::sqrt(big));
    }
    const cplx* vj = potential(j);
    matmul(vj, m.data(), g.data());
    for (std::size_t q = 0; q < nn; ++q) dx[q] = -(0.5 * h * g[q] + R[q]);
    if (with_dk) matmul(vj, mk.data(), gk.data());
    store(j);
    if (j == 0) break;
  }
  return out;
}

SweepResult sweep_any(const PotentialSpec& v, std::size_t support, std::size_t end, std::size_t step,
                      std::size_t record, cplx k, bool with_dk, double bound) {
  switch (v.dim) {
    case 1: return sweep<1>(v, support, end, step, record, k, with_dk, bound);
    case 2: return sweep<2>(v, support, end, step, record, k, with_dk, bound);
    case 4: return sweep<4>(v, support, end, step, record, k, with_dk, bound);
    default: return sweep<0>(v, support, end, step, record, k, with_dk, bound);
  }
}

struct SolveLayout {
  std::size_t support = 0;  // nodes with V != 0
  std::size_t end = 0;      // last sweep node (fine index)
  std::size_t stride = 1;   // profile stride
  bool richardson = false;
};

SolveLayout layout(const PotentialSpec& v, const JostOptions& opt) {
  if (v.dim > kMaxDim) {
    throw Error(ErrorKind::invalid_argument, "Jost solver supports n <= " + std::to_string(kMaxDim));
  }
  SolveLayout lay;
  lay.support = v.support_count(opt.support_cut);
  lay.richardson = opt.richardson;
  lay.stride = std::max<std::size_t>(1, opt.profile_stride);
  if (lay.richardson && lay.stride % 2 == 1) lay.stride *= 2;
  const std::size_t unit = lay.richardson ? std::max<std::size_t>(2, lay.stride) : lay.stride;
  // sweep starts where V vanishes (virtual zero nodes past x_max are harmless)
  std::size_t e = lay.support;
  e = ((e + unit - 1) / unit) * unit;
  if (e == 0) e = unit;
  lay.end = e;
  return lay;
}

double growth_bound(const PotentialSpec& v) {
  const double b = 10.0 * std::exp(v.first_moment());
  return std::isfinite(b) ? b : std::numeric_limits<double>::max();
}

SweepResult solve_one(const PotentialSpec& v, const SolveLayout& lay, std::size_t record, cplx k,
                      bool with_dk, double bound) {
  SweepResult fine = sweep_any(v, lay.support, lay.end, 1, record, k, with_dk, bound);
  if (!lay.richardson) return fine;
  SweepResult coarse = sweep_any(v, lay.support, lay.end, 2, record, k, with_dk, bound);
  auto combine = [](std::vector<cplx>& f, const std::vector<cplx>& c) {
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = (4.0 * f[i] - c[i]) / 3.0;
  };
  combine(fine.m, coarse.m);
  combine(fine.dmdx, coarse.dmdx);
  if (with_dk) combine(fine.dmdk, coarse.dmdk);
  return fine;
}

ComplexMatrix block(const std::vector<cplx>& a, std::size_t r, std::size_t n) {
  const auto first = a.begin() + static_cast<long>(r * n * n);
  return ComplexMatrix(n, std::vector<cplx>(first, first + static_cast<long>(n * n)));
}

}  // namespace

void check_grid_guard(double k_max, double h) {
  if (!(2.0 * k_max * h < 0.5)) {
    throw Error(ErrorKind::resolution,
                "grid guard 2*K_max*h < 0.5 violated (2*" + std::to_string(k_max) + "*" +
                    std::to_string(h) + " = " + std::to_string(2.0 * k_max * h) + ")",
                2.0 * k_max * h);
  }
}

JostPoint jost_point(const PotentialSpec& v, cplx k, const JostOptions& opt) {
  const SolveLayout lay = layout(v, opt);
  SweepResult r = solve_one(v, lay, lay.end, k, opt.k_derivative, growth_bound(v));
  JostPoint p;
  p.m = block(r.m, 0, v.dim);
  p.dm_dx = block(r.dmdx, 0, v.dim);
  p.dm_dk = opt.k_derivative ? block(r.dmdk, 0, v.dim) : ComplexMatrix(v.dim);
  return p;
}

JostTable solve_m(const PotentialSpec& v, const KGrid& k_positive, const JostOptions& opt) {
  k_positive.validate("k grid");
  const auto pts = k_positive.points();
  return solve_m(v, pts, opt);
}

JostTable solve_m(const PotentialSpec& v, std::span<const double> k_positive, const JostOptions& opt) {
  if (v.samples.empty()) throw Error(ErrorKind::invalid_argument, "solve_m: potential has no samples");
  if (k_positive.empty()) throw Error(ErrorKind::invalid_argument, "solve_m: empty k grid");
  for (const auto& s : v.samples) check_hermitian(s, "potential sample");
  if (!std::is_sorted(k_positive.begin(), k_positive.end()) || k_positive.front() < 0) {
    throw Error(ErrorKind::invalid_argument, "solve_m: k grid must be ascending and nonnegative");
  }
  check_grid_guard(k_positive.back(), v.grid.step);

  JostTable jt;
  jt.dim = v.dim;
  jt.solve_step = v.grid.step;
  for (auto it = k_positive.rbegin(); it != k_positive.rend(); ++it)
    if (*it > 0) jt.k.push_back(-*it);
  jt.k.insert(jt.k.end(), k_positive.begin(), k_positive.end());

  const SolveLayout lay = layout(v, opt);
  jt.richardson = lay.richardson;
  jt.x_support = v.grid.start + static_cast<double>(lay.end) * v.grid.step;
  const std::size_t record = opt.store_profiles ? lay.stride : lay.end;
  const std::size_t records = lay.end / record + 1;
  if (opt.store_profiles) jt.profile_grid = XGrid{v.grid.start, v.grid.step * static_cast<double>(record), records};

  const std::size_t nk = jt.k.size(), nn = v.dim * v.dim;
  jt.m0.assign(nk, ComplexMatrix(v.dim));
  jt.dm_dx0.assign(nk, ComplexMatrix(v.dim));
  jt.dm_dk0.assign(nk, ComplexMatrix(v.dim));
  if (opt.store_profiles) {
    jt.m_prof_.assign(nk * records * nn, 0.0);
    jt.dmdx_prof_.assign(nk * records * nn, 0.0);
    if (opt.k_derivative) jt.dmdk_prof_.assign(nk * records * nn, 0.0);
  }
  const double bound = growth_bound(v);
  parallel_for(nk, [&](std::size_t ik) {
    SweepResult r = solve_one(v, lay, record, jt.k[ik], opt.k_derivative, bound);
    jt.m0[ik] = block(r.m, 0, v.dim);
    jt.dm_dx0[ik] = block(r.dmdx, 0, v.dim);
    if (opt.k_derivative) jt.dm_dk0[ik] = block(r.dmdk, 0, v.dim);
    if (opt.store_profiles) {
      std::copy(r.m.begin(), r.m.end(), jt.m_prof_.begin() + static_cast<long>(ik * records * nn));
      std::copy(r.dmdx.begin(), r.dmdx.end(), jt.dmdx_prof_.begin() + static_cast<long>(ik * records * nn));
      if (opt.k_derivative)
        std::copy(r.dmdk.begin(), r.dmdk.end(), jt.dmdk_prof_.begin() + static_cast<long>(ik * records * nn));
    }
  });
  return jt;
}

bool JostTable::is_node(double kv) const {
  auto it = std::lower_bound(k.begin(), k.end(), kv - 1e-12);
  return it != k.end() && std::abs(*it - kv) <= 1e-12;
}

std::size_t JostTable::k_node(double kv) const {
  auto it = std::lower_bound(k.begin(), k.end(), kv - 1e-12);
  if (it == k.end() || std::abs(*it - kv) > 1e-12) {
    throw Error(ErrorKind::out_of_range, "k = " + std::to_string(kv) + " is not a table node");
  }
  return static_cast<std::size_t>(it - k.begin());
}

ComplexMatrix JostTable::interp_0(const std::vector<ComplexMatrix>& vals, double kv) const {
  if (k.empty() || kv < k.front() - 1e-12 || kv > k.back() + 1e-12) {
    throw Error(ErrorKind::out_of_range, "k = " + std::to_string(kv) + " outside the Jost table");
  }
  const Stencil s = lagrange_stencil(k, kv);
  ComplexMatrix out(dim);
  for (std::size_t i = 0; i < s.size; ++i) out += vals[s.first + i] * cplx(s.w[i]);
  return out;
}

ComplexMatrix JostTable::m_at_0(double kv) const { return interp_0(m0, kv); }
ComplexMatrix JostTable::dm_dx_at_0(double kv) const { return interp_0(dm_dx0, kv); }
ComplexMatrix JostTable::dm_dk_at_0(double kv) const { return interp_0(dm_dk0, kv); }

ComplexMatrix JostTable::interp_profile(const std::vector<cplx>& prof, double kv, double x,
                                        double sign) const {
  if (!has_profiles() || prof.empty()) throw Error(ErrorKind::invalid_argument, "Jost table holds no profiles");
  if (kv < k.front() - 1e-12 || kv > k.back() + 1e-12) {
    throw Error(ErrorKind::out_of_range, "k = " + std::to_string(kv) + " outside the Jost table");
  }
  const Stencil sk = lagrange_stencil(k, kv);
  const Stencil sx = lagrange_stencil_uniform(profile_grid.start, profile_grid.step, profile_grid.count, x);
  const std::size_t nn = dim * dim;
  ComplexMatrix out(dim);
  for (std::size_t a = 0; a < sk.size; ++a)
    for (std::size_t b = 0; b < sx.size; ++b) {
      const double w = sk.w[a] * sx.w[b] * sign;
      const cplx* p = &prof[((sk.first + a) * profile_grid.count + sx.first + b) * nn];
      for (std::size_t q = 0; q < nn; ++q) out.data()[q] += w * p[q];
    }
  return out;
}

ComplexMatrix JostTable::m(double kv, double x) const {
  x = std::abs(x);
  if (x >= x_support) return ComplexMatrix::identity(dim);
  return interp_profile(m_prof_, kv, x, 1.0);
}

ComplexMatrix JostTable::dm_dx(double kv, double x) const {
  const double sign = x < 0 ? -1.0 : 1.0;
  x = std::abs(x);
  if (x >= x_support) return ComplexMatrix(dim);
  return interp_profile(dmdx_prof_, kv, x, sign);
}

ComplexMatrix JostTable::dm_dk(double kv, double x) const {
  x = std::abs(x);
  if (x >= x_support) return ComplexMatrix(dim);
  return interp_profile(dmdk_prof_, kv, x, 1.0);
}

ComplexMatrix jost_matrix_from(const JostPoint& point, cplx q, const BoundaryPair& bp) {
  const ComplexMatrix fprime = point.m * (cplx(0, 1) * q) + point.dm_dx;
  return adjoint(point.m) * bp.b - adjoint(fprime) * bp.a;
}

ComplexMatrix jost_matrix(const JostTable& jt, const BoundaryPair& bp, double k) {
  if (bp.dim() != jt.dim) throw Error(ErrorKind::dimension_mismatch, "boundary and potential dimensions differ");
  JostPoint p{jt.m_at_0(-k), jt.dm_dx_at_0(-k), ComplexMatrix(jt.dim)};
  return jost_matrix_from(p, -k, bp);
}

ComplexMatrix free_scattering_matrix(const BoundaryPair& bp, double k) {
  const cplx ik(0, k);
  return (bp.b + bp.a * ik) * inverse(bp.b - bp.a * ik) * cplx(-1.0);
}

const char* classification_name(Classification c) {
  switch (c) {
    case Classification::generic: return "generic";
    case Classification::exceptional: return "exceptional";
    case Classification::purely_exceptional: return "purely-exceptional";
  }
  return "unknown";
}

ScatteringData scattering_matrix(const JostTable& jt, const BoundaryPair& bp) {
  if (bp.dim() != jt.dim) throw Error(ErrorKind::dimension_mismatch, "boundary and potential dimensions differ");
  ScatteringData sd;
  std::vector<std::size_t> pos;
  for (std::size_t i = 0; i < jt.k.size(); ++i)
    if (jt.k[i] > 0) pos.push_back(i);
  if (pos.size() < 3) throw Error(ErrorKind::invalid_argument, "scattering_matrix needs at least 3 positive k");
  const std::size_t nk = jt.k.size();
  sd.k.resize(pos.size());
  sd.S.assign(pos.size(), ComplexMatrix(jt.dim));
  parallel_for(pos.size(), [&](std::size_t j) {
    const std::size_t ip = pos[j], im = nk - 1 - ip;  // mirrored node holds -k
    const double kv = jt.k[ip];
    JostPoint at_minus{jt.m0[im], jt.dm_dx0[im], ComplexMatrix(jt.dim)};
    JostPoint at_plus{jt.m0[ip], jt.dm_dx0[ip], ComplexMatrix(jt.dim)};
    const ComplexMatrix jk = jost_matrix_from(at_minus, -kv, bp);
    const ComplexMatrix jmk = jost_matrix_from(at_plus, kv, bp);
    try {
      sd.S[j] = jmk * inverse(jk) * cplx(-1.0);
    } catch (const Error&) {
      throw Error(ErrorKind::singular_matrix, "Jost matrix is singular at k = " + std::to_string(kv), kv);
    }
    sd.k[j] = kv;
  });
  const std::size_t n = jt.dim;
  for (const auto& s : sd.S)
    sd.unitarity_residual = std::max(sd.unitarity_residual, norm(s * adjoint(s) - ComplexMatrix::identity(n)));

  const double k1 = sd.k[0], k2 = sd.k[1], k3 = sd.k[2];
  const double l1 = k2 * k3 / ((k1 - k2) * (k1 - k3));
  const double l2 = k1 * k3 / ((k2 - k1) * (k2 - k3));
  const double l3 = k1 * k2 / ((k3 - k1) * (k3 - k2));
  sd.S0 = sd.S[0] * cplx(l1) + sd.S[1] * cplx(l2) + sd.S[2] * cplx(l3);
  const ComplexMatrix linear = sd.S[0] * cplx(k2 / (k2 - k1)) - sd.S[1] * cplx(k1 / (k2 - k1));
  sd.extrapolation_residual = norm(sd.S0 - linear);
  sd.S_inf = sd.S.back();

  const ComplexMatrix herm = (sd.S0 + adjoint(sd.S0)) * cplx(0.5);
  const HermitianEigen eig = eig_hermitian(herm);
  sd.s0_eigenvalues = eig.values;
  sd.P_plus = ComplexMatrix(n);
  sd.P_minus = ComplexMatrix(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double lam = eig.values[i];
    if (std::abs(lam - 1.0) >= 0.2 && std::abs(lam + 1.0) >= 0.2) sd.s0_ambiguous = true;
    ComplexMatrix proj(n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) proj(r, c) = eig.vectors[i][r] * std::conj(eig.vectors[i][c]);
    if (lam >= 0) {
      sd.P_plus += proj;
      ++sd.count_plus;
    } else {
      sd.P_minus += proj;
      ++sd.count_minus;
    }
  }
  if (sd.count_plus == 0) sd.classification = Classification::generic;
  else if (sd.count_minus == 0) sd.classification = Classification::purely_exceptional;
  else sd.classification = Classification::exceptional;
  return sd;
}

ComplexMatrix ScatteringData::at(double kv) const {
  if (kv < 0) return adjoint(at(-kv));
  if (kv > k.back() + 1e-12) throw Error(ErrorKind::out_of_range, "k = " + std::to_string(kv) + " beyond the scattering grid");
  if (kv == 0.0) return S0;
  ComplexMatrix out(S0.dim());
  if (kv < k.front() && k.size() >= 3) {
    const double nodes[4] = {0.0, k[0], k[1], k[2]};
    const Stencil s = lagrange_stencil(std::span<const double>(nodes, 4), kv);
    for (std::size_t i = 0; i < s.size; ++i) {
      const std::size_t idx = s.first + i;
      out += (idx == 0 ? S0 : S[idx - 1]) * cplx(s.w[i]);
    }
    return out;
  }
  const Stencil s = lagrange_stencil(k, kv);
  for (std::size_t i = 0; i < s.size; ++i) out += S[s.first + i] * cplx(s.w[i]);
  return out;
}

BoundStateScan bound_state_scan(const PotentialSpec& v, const BoundaryPair& bp, double kappa_max,
                                std::size_t count, const JostOptions& opt_in) {
  if (bp.dim() != v.dim) throw Error(ErrorKind::dimension_mismatch, "boundary and potential dimensions differ");
  if (!(kappa_max > 0) || count < 3) throw Error(ErrorKind::invalid_argument, "bound_state_scan needs kappa_max > 0 and count >= 3");
  JostOptions opt = opt_in;
  opt.k_derivative = false;
  opt.store_profiles = false;
  auto sigma_at = [&](double kappa) {
    const JostPoint p = jost_point(v, cplx(0, kappa), opt);
    return smallest_singular_value(jost_matrix_from(p, cplx(0, kappa), bp));
  };
  BoundStateScan scan;
  scan.kappa.resize(count);
  scan.sigma.resize(count);
  parallel_for(count, [&](std::size_t i) {
    scan.kappa[i] = kappa_max * static_cast<double>(i + 1) / static_cast<double>(count);
    scan.sigma[i] = sigma_at(scan.kappa[i]);
  });
  std::vector<double> sorted = scan.sigma;
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<long>(count / 2), sorted.end());
  scan.median = sorted[count / 2];

  for (std::size_t i = 0; i + 1 < count; ++i) {
    const bool left_ok = i == 0 || scan.sigma[i] < scan.sigma[i - 1];
    if (!left_ok || !(scan.sigma[i] <= scan.sigma[i + 1])) continue;
    double a = i == 0 ? scan.kappa[0] * 1e-2 : scan.kappa[i - 1];
    double b = scan.kappa[i + 1];
    const double lo = a;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = sigma_at(c), fd = sigma_at(d);
    for (int it = 0; it < 80 && (b - a) > 1e-13 * b; ++it) {
      if (fc < fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - gr * (b - a);
        fc = sigma_at(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + gr * (b - a);
        fd = sigma_at(d);
      }
    }
    const double kappa = 0.5 * (a + b);
    if (kappa - lo < 1e-6 * (scan.kappa[1] - scan.kappa[0])) continue;  // edge, no interior minimum
    if (std::min(fc, fd) < 1e-4 * scan.median) scan.detected.push_back(kappa);
  }
  return scan;
}

}  // namespace halfline
