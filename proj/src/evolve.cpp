#include "evolve.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "errors.hpp"
#include "parallel.hpp"

namespace halfline {

namespace {

const double kPi = std::numbers::pi;

void require_alpha(double alpha) {
  if (!(alpha > 2.0) || !std::isfinite(alpha)) {
    throw Error(ErrorKind::invalid_argument, "nonlinearity exponent must exceed 2", alpha);
  }
}

CVector default_direction(std::size_t n, std::span<const cplx> v) {
  if (!v.empty()) {
    if (v.size() != n) throw Error(ErrorKind::dimension_mismatch, "packet direction has the wrong length");
    return CVector(v.begin(), v.end());
  }
  return CVector(n, cplx(1.0 / std::sqrt(static_cast<double>(n))));
}

// profile lookup for m(k_j, x): direct block when both indices are nodes, else interpolation
struct MLookup {
  const JostTable* jt = nullptr;
  std::vector<long> k_index;

  MLookup(const JostTable* table, const UniformGrid& k) : jt(table) {
    if (!jt) return;
    k_index.assign(k.count, -1);
    for (std::size_t j = 0; j < k.count; ++j)
      if (jt->is_node(k.at(j))) k_index[j] = static_cast<long>(jt->k_node(k.at(j)));
  }

  // returns nullptr for the identity
  const cplx* get(std::size_t j, double kv, double x, ComplexMatrix& scratch) const {
    if (!jt) return nullptr;
    x = std::abs(x);
    if (x >= jt->x_support) return nullptr;
    const auto& pg = jt->profile_grid;
    const double u = x / pg.step;
    const double r = std::round(u);
    if (k_index[j] >= 0 && std::abs(u - r) < 1e-9 && r < static_cast<double>(pg.count)) {
      return jt->m_profile(static_cast<std::size_t>(k_index[j]), static_cast<std::size_t>(r));
    }
    scratch = jt->m(kv, x);
    return scratch.data().data();
  }
};

GridFunction k_to_x(const JostTable* jt, double t, const GridFunction& phi, const UniformGrid& xi) {
  if (t == 0.0) throw Error(ErrorKind::invalid_argument, "W(t) needs t != 0");
  const double kmax = std::max(std::abs(phi.grid.start), std::abs(phi.grid.back()));
  check_oscillatory_guard(t, kmax, phi.grid.step);
  const std::size_t n = phi.dim, nk = phi.grid.count;
  if (jt && jt->dim != n) throw Error(ErrorKind::dimension_mismatch, "W: Jost table and function dimensions differ");
  const auto wk = simpson_weights(nk, phi.grid.step);
  const cplx pref = std::sqrt(cplx(0, t / (2 * kPi)));
  const MLookup look(jt, phi.grid);
  GridFunction out{n, xi, CVector(xi.count * n, 0.0)};
  parallel_for(xi.count, [&](std::size_t l) {
    const double x = xi.at(l);
    ComplexMatrix scratch;
    CVector acc(n, 0.0);
    for (std::size_t j = 0; j < nk; ++j) {
      const double k = phi.grid.at(j);
      const double d = k - 0.5 * x;
      const cplx c = wk[j] * std::exp(cplx(0, -t * d * d));
      const cplx* f = &phi.values[j * n];
      const cplx* m = look.get(j, k, t * x, scratch);
      if (!m) {
        for (std::size_t r = 0; r < n; ++r) acc[r] += c * f[r];
      } else {
        for (std::size_t r = 0; r < n; ++r) {
          cplx s = 0;
          for (std::size_t q = 0; q < n; ++q) s += m[r * n + q] * f[q];
          acc[r] += c * s;
        }
      }
    }
    for (std::size_t r = 0; r < n; ++r) out.values[l * n + r] = pref * acc[r];
  });
  return out;
}

GridFunction x_to_k(const JostTable* jt, double t, int sign, const GridFunction& phi, const UniformGrid& kg) {
  if (t == 0.0) throw Error(ErrorKind::invalid_argument, "W_pm(t) needs t != 0");
  if (sign != 1 && sign != -1) throw Error(ErrorKind::invalid_argument, "W_pm sign must be +1 or -1");
  if (std::abs(phi.grid.start) > 1e-14) throw Error(ErrorKind::invalid_argument, "W_pm integrates over xi >= 0");
  const double kmax = std::max(std::abs(kg.start), std::abs(kg.back()));
  check_oscillatory_guard(t, kmax, phi.grid.step);
  const std::size_t n = phi.dim, nx = phi.grid.count;
  if (jt && jt->dim != n) throw Error(ErrorKind::dimension_mismatch, "W_pm: Jost table and function dimensions differ");
  const auto wx = simpson_weights(nx, phi.grid.step);
  const cplx pref = std::sqrt(cplx(0, -t / (2 * kPi)));
  // m^dagger(-sign k, t xi): index the mirrored k grid
  UniformGrid mk{-sign * kg.start, -sign * kg.step, kg.count};
  MLookup look(jt, UniformGrid{0, 1, 0});
  if (jt) {
    look.k_index.assign(kg.count, -1);
    for (std::size_t j = 0; j < kg.count; ++j)
      if (jt->is_node(mk.at(j))) look.k_index[j] = static_cast<long>(jt->k_node(mk.at(j)));
  }
  GridFunction out{n, kg, CVector(kg.count * n, 0.0)};
  parallel_for(kg.count, [&](std::size_t j) {
    const double k = kg.at(j);
    ComplexMatrix scratch;
    CVector acc(n, 0.0);
    for (std::size_t l = 0; l < nx; ++l) {
      const double x = phi.grid.at(l);
      const double d = k + sign * 0.5 * x;
      const cplx c = wx[l] * std::exp(cplx(0, t * d * d));
      const cplx* f = &phi.values[l * n];
      const cplx* m = look.get(j, mk.at(j), t * x, scratch);
      if (!m) {
        for (std::size_t r = 0; r < n; ++r) acc[r] += c * f[r];
      } else {
        for (std::size_t r = 0; r < n; ++r) {
          cplx s = 0;
          for (std::size_t q = 0; q < n; ++q) s += std::conj(m[q * n + r]) * f[q];
          acc[r] += c * s;
        }
      }
    }
    for (std::size_t r = 0; r < n; ++r) out.values[j * n + r] = pref * acc[r];
  });
  return out;
}

GridFunction combine_hat(const GridFunction& wp, const GridFunction& wm,
                         const std::function<ComplexMatrix(double)>& s_of_k) {
  GridFunction out = wm;
  const std::size_t n = wp.dim;
  for (std::size_t j = 0; j < wp.grid.count; ++j) {
    const CVector sv = s_of_k(wp.grid.at(j)) * wp.at(j);
    for (std::size_t r = 0; r < n; ++r) out.values[j * n + r] += sv[r];
  }
  return out;
}

}  // namespace

const char* nonlinearity_form_name(NonlinearityForm form) {
  switch (form) {
    case NonlinearityForm::scalar_power: return "scalar-power";
    case NonlinearityForm::diagonal_power: return "diagonal-power";
    case NonlinearityForm::user: return "user";
  }
  return "unknown";
}

bool NonlinearitySpec::is_zero() const {
  switch (form) {
    case NonlinearityForm::scalar_power: return lambda == 0.0;
    case NonlinearityForm::diagonal_power:
      return std::all_of(lambdas.begin(), lambdas.end(), [](double l) { return l == 0.0; });
    case NonlinearityForm::user: return !user;
  }
  return true;
}

ComplexMatrix NonlinearitySpec::operator()(std::span<const double> mu) const {
  const std::size_t n = mu.size();
  switch (form) {
    case NonlinearityForm::scalar_power: {
      double s = 0;
      for (double m : mu) s += m * m;
      return ComplexMatrix::scalar(n, lambda * std::pow(std::sqrt(s), alpha));
    }
    case NonlinearityForm::diagonal_power: {
      if (lambdas.size() != n) throw Error(ErrorKind::dimension_mismatch, "diagonal nonlinearity has the wrong length");
      ComplexMatrix d(n);
      for (std::size_t i = 0; i < n; ++i) d(i, i) = lambdas[i] * std::pow(mu[i], alpha);
      return d;
    }
    case NonlinearityForm::user: {
      if (!user) return ComplexMatrix(n);
      ComplexMatrix m = user(mu);
      if (m.dim() != n) throw Error(ErrorKind::dimension_mismatch, "user nonlinearity returned the wrong dimension");
      return m;
    }
  }
  return ComplexMatrix(n);
}

NonlinearitySpec scalar_power(double lambda, double alpha) {
  require_alpha(alpha);
  NonlinearitySpec nl;
  nl.form = NonlinearityForm::scalar_power;
  nl.alpha = alpha;
  nl.lambda = lambda;
  return nl;
}

NonlinearitySpec diagonal_power(std::vector<double> lambdas, double alpha) {
  require_alpha(alpha);
  NonlinearitySpec nl;
  nl.form = NonlinearityForm::diagonal_power;
  nl.alpha = alpha;
  nl.lambdas = std::move(lambdas);
  return nl;
}

NonlinearitySpec user_nonlinearity(std::function<ComplexMatrix(std::span<const double>)> map, double alpha) {
  require_alpha(alpha);
  NonlinearitySpec nl;
  nl.form = NonlinearityForm::user;
  nl.alpha = alpha;
  nl.user = std::move(map);
  return nl;
}

GrowthReport check_growth(const NonlinearitySpec& nl, std::size_t n) {
  require_alpha(nl.alpha);
  GrowthReport rep;
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  double at_one = 0.0;
  for (std::size_t d = 0; d < 16; ++d) {
    std::vector<double> dir(n);
    double s = 0;
    for (auto& x : dir) {
      x = uni(rng) + 1e-3;
      s += x * x;
    }
    for (auto& x : dir) x /= std::sqrt(s);
    for (int e = -8; e <= 0; ++e) {
      const double r = std::pow(10.0, 0.5 * e);
      std::vector<double> mu(n);
      for (std::size_t i = 0; i < n; ++i) mu[i] = r * dir[i];
      const double val = norm(nl(mu)) / std::pow(r, nl.alpha);
      if (!std::isfinite(val)) {
        rep.pass = false;
        rep.message = "nonlinearity is not finite on the sample sweep";
        return rep;
      }
      rep.constant = std::max(rep.constant, val);
      if (e == 0) at_one = std::max(at_one, val);
    }
  }
  rep.spread = at_one > 0 ? rep.constant / at_one : (rep.constant > 0 ? INFINITY : 1.0);
  if (rep.spread > 100.0) {
    rep.pass = false;
    rep.message = "|N(mu)| / |mu|^alpha grows as mu -> 0: the growth assumption fails";
  }
  return rep;
}

double commutator_residual(const NonlinearitySpec& nl, const ComplexMatrix& p, std::size_t samples) {
  const std::size_t n = p.dim();
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  double worst = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    std::vector<double> mu(n);
    for (auto& x : mu) x = uni(rng);
    const ComplexMatrix nm = nl(mu);
    worst = std::max(worst, norm(nm * p - p * nm));
  }
  return worst;
}

GridFunction op_M(double t, GridFunction phi) {
  if (t == 0.0) throw Error(ErrorKind::invalid_argument, "M(t) needs t != 0");
  for (std::size_t l = 0; l < phi.grid.count; ++l) {
    const double x = phi.grid.at(l);
    const cplx ph = std::exp(cplx(0, x * x / (4 * t)));
    for (std::size_t i = 0; i < phi.dim; ++i) phi.values[l * phi.dim + i] *= ph;
  }
  return phi;
}

GridFunction op_Dt(double t, const GridFunction& phi, const UniformGrid& target) {
  if (t == 0.0) throw Error(ErrorKind::invalid_argument, "D_t needs t != 0");
  const std::size_t n = phi.dim;
  const cplx pref = 1.0 / std::sqrt(cplx(0, t));
  GridFunction out{n, target, CVector(target.count * n, 0.0)};
  const double lo = std::min(phi.grid.start, phi.grid.back()), hi = std::max(phi.grid.start, phi.grid.back());
  for (std::size_t l = 0; l < target.count; ++l) {
    const double y = target.at(l) / t;
    if (y < lo - 1e-12 || y > hi + 1e-12) continue;
    const Stencil s = lagrange_stencil_uniform(phi.grid.start, phi.grid.step, phi.grid.count, y);
    for (std::size_t q = 0; q < s.size; ++q)
      for (std::size_t i = 0; i < n; ++i) out.values[l * n + i] += pref * s.w[q] * phi.values[(s.first + q) * n + i];
  }
  return out;
}

GridFunction extend_E(const SpectralTransform& st, const GridFunction& phi) {
  if (phi.grid.count != st.nk() || phi.dim != st.dim) {
    throw Error(ErrorKind::dimension_mismatch, "E expects a function on the transform k grid");
  }
  const std::size_t n = st.dim, nk = st.nk();
  GridFunction out{n, UniformGrid{-st.kgrid.back(), st.kgrid.step, 2 * nk - 1}, CVector((2 * nk - 1) * n)};
  for (std::size_t j = 0; j < nk; ++j) {
    const std::size_t up = nk - 1 + j, down = nk - 1 - j;
    const CVector neg = adjoint(st.S[j]) * phi.at(j);
    for (std::size_t i = 0; i < n; ++i) {
      out.values[up * n + i] = phi.values[j * n + i];
      if (j > 0) out.values[down * n + i] = neg[i];
    }
  }
  return out;
}

double e_symmetry_residual(const SpectralTransform& st, const GridFunction& f) {
  const std::size_t nk = st.nk();
  if (f.grid.count != 2 * nk - 1) throw Error(ErrorKind::dimension_mismatch, "symmetric grid does not match the transform");
  double worst = 0;
  for (std::size_t j = 1; j < nk; ++j) {
    const CVector lhs = st.S[j] * f.at(nk - 1 - j);
    for (std::size_t i = 0; i < st.dim; ++i) worst = std::max(worst, std::abs(lhs[i] - f.values[(nk - 1 + j) * st.dim + i]));
  }
  return worst;
}

void check_oscillatory_guard(double t, double k_max, double step) {
  const double v = 2.0 * k_max * std::abs(t) * step;
  if (!(v < 0.5)) {
    throw Error(ErrorKind::resolution,
                "oscillatory quadrature under-resolved: 2 K t d = " + std::to_string(v) + " must be < 0.5", v);
  }
}

GridFunction op_W(const JostTable& jt, double t, const GridFunction& phi, const UniformGrid& xi) {
  if (!jt.has_profiles()) throw Error(ErrorKind::invalid_argument, "W needs Jost profiles");
  return k_to_x(&jt, t, phi, xi);
}

GridFunction op_V(double t, const GridFunction& phi, const UniformGrid& xi) { return k_to_x(nullptr, t, phi, xi); }

GridFunction op_Wpm(const JostTable& jt, double t, int sign, const GridFunction& phi, const UniformGrid& k) {
  if (!jt.has_profiles()) throw Error(ErrorKind::invalid_argument, "W_pm needs Jost profiles");
  return x_to_k(&jt, t, sign, phi, k);
}

GridFunction op_Vpm(double t, int sign, const GridFunction& phi, const UniformGrid& k) {
  return x_to_k(nullptr, t, sign, phi, k);
}

GridFunction op_What(const JostTable& jt, const ScatteringData& sd, double t, const GridFunction& phi,
                     const UniformGrid& k) {
  return combine_hat(op_Wpm(jt, t, 1, phi, k), op_Wpm(jt, t, -1, phi, k), [&](double kv) { return sd.at(kv); });
}

GridFunction op_Vhat(const BoundaryPair& bp, double t, const GridFunction& phi, const UniformGrid& k) {
  return combine_hat(op_Vpm(t, 1, phi, k), op_Vpm(t, -1, phi, k), [&](double kv) {
    // S_0 is continuous at 0 except for the removable singularity of a Neumann-type block
    return free_scattering_matrix(bp, kv == 0.0 ? 1e-10 : kv);
  });
}

FieldState boundary_packet(const XGrid& grid, const BoundaryPair& bp, double amplitude, double width,
                           std::span<const cplx> v) {
  if (!(width > 0)) throw Error(ErrorKind::invalid_argument, "packet width must be positive");
  const std::size_t n = bp.dim();
  const CVector dir = default_direction(n, v);
  const CVector av = bp.a * std::span<const cplx>(dir), bv = bp.b * std::span<const cplx>(dir);
  FieldState u;
  u.dim = n;
  u.grid = grid;
  u.values.resize(grid.count * n);
  for (std::size_t l = 0; l < grid.count; ++l) {
    const double x = grid.at(l);
    const double g = amplitude * std::exp(-x * x / (2 * width * width));
    for (std::size_t i = 0; i < n; ++i) u.values[l * n + i] = g * (av[i] + x * bv[i]);
  }
  CVector u0(n), d0(n);
  for (std::size_t i = 0; i < n; ++i) {
    u0[i] = amplitude * av[i];
    d0[i] = amplitude * bv[i];
  }
  u.value_at_0 = u0;
  u.derivative_at_0 = d0;
  u.boundary_residual = residual(bp, u0, d0);
  return u;
}

FieldState moving_packet(const XGrid& grid, const BoundaryPair& bp, double amplitude, double centre, double width,
                         double momentum, std::span<const cplx> v) {
  if (!(width > 0)) throw Error(ErrorKind::invalid_argument, "packet width must be positive");
  const std::size_t n = bp.dim();
  const CVector dir = default_direction(n, v);
  auto g = [&](double x) {
    const double z = (x - centre) / width;
    return amplitude * std::exp(cplx(-0.5 * z * z, momentum * x));
  };
  FieldState u;
  u.dim = n;
  u.grid = grid;
  u.values.resize(grid.count * n);
  for (std::size_t l = 0; l < grid.count; ++l) {
    const cplx gx = g(grid.at(l));
    for (std::size_t i = 0; i < n; ++i) u.values[l * n + i] = gx * dir[i];
  }
  const cplx g0 = g(0.0), dg0 = g0 * cplx(centre / (width * width), momentum);
  CVector u0(n), d0(n);
  for (std::size_t i = 0; i < n; ++i) {
    u0[i] = g0 * dir[i];
    d0[i] = dg0 * dir[i];
  }
  u.value_at_0 = u0;
  u.derivative_at_0 = d0;
  u.boundary_residual = residual(bp, u0, d0);
  return u;
}

namespace {

std::vector<double> sample_schedule(double t_end, const EvolveOptions& opt) {
  std::vector<double> ts;
  if (!opt.sample_times.empty()) {
    ts = opt.sample_times;
  } else {
    const auto count = static_cast<std::size_t>(std::floor(t_end / opt.sample_every + 1e-9));
    for (std::size_t i = 0; i <= count; ++i) ts.push_back(static_cast<double>(i) * opt.sample_every);
  }
  ts.push_back(0.0);
  ts.push_back(t_end);
  std::sort(ts.begin(), ts.end());
  std::vector<double> out;
  for (double t : ts) {
    if (t < 0 || t > t_end + 1e-12) continue;
    if (out.empty() || t - out.back() > 1e-12) out.push_back(t);
  }
  return out;
}

class Stepper {
 public:
  Stepper(const SpectralTransform& st, const NonlinearitySpec& nl, double guard)
      : st_(st), nl_(nl), guard_(guard) {}

  CVector uhat;
  double h1_initial = 0.0;

  void linear(double tau) {
    const std::size_t n = st_.dim;
    for (std::size_t j = 0; j < st_.nk(); ++j) {
      const double k = st_.kgrid.at(j);
      const cplx ph = std::exp(cplx(0, -tau * k * k));
      for (std::size_t i = 0; i < n; ++i) uhat[j * n + i] *= ph;
    }
  }

  void nonlinear(double tau, double t_now) {
    if (nl_.is_zero()) return;
    const std::size_t n = st_.dim, nx = st_.nx();
    CVector u = st_.adjoint(uhat);
    CVector delta(u.size());
    parallel_for(nx, [&](std::size_t l) {
      const cplx* ul = &u[l * n];
      if (nl_.form == NonlinearityForm::scalar_power) {
        double s = 0;
        for (std::size_t i = 0; i < n; ++i) s += std::norm(ul[i]);
        const cplx ph = std::exp(cplx(0, -tau * nl_.lambda * std::pow(std::sqrt(s), nl_.alpha)));
        for (std::size_t i = 0; i < n; ++i) delta[l * n + i] = (ph - 1.0) * ul[i];
        return;
      }
      std::vector<double> mu(n);
      for (std::size_t i = 0; i < n; ++i) mu[i] = std::abs(ul[i]);
      const ComplexMatrix e = matrix_exp(nl_(mu) * cplx(0, -tau));
      const CVector un = e * std::span<const cplx>(ul, n);
      for (std::size_t i = 0; i < n; ++i) delta[l * n + i] = un[i] - ul[i];
    });
    const CVector dz = st_.forward(delta);
    for (std::size_t q = 0; q < uhat.size(); ++q) uhat[q] += dz[q];
    check_blowup(u, t_now);
  }

  void check_blowup(const CVector& u, double t_now) const {
    FieldState f;
    f.dim = st_.dim;
    f.grid = st_.xgrid;
    f.values = u;
    const double h1 = h1_norm(f);
    if (!std::isfinite(h1) || h1 > guard_ * h1_initial) {
      throw Error(ErrorKind::blow_up,
                  "H1 norm grew beyond " + std::to_string(guard_) + "x its initial value at t = " + std::to_string(t_now),
                  h1);
    }
  }

 private:
  const SpectralTransform& st_;
  const NonlinearitySpec& nl_;
  double guard_;
};

}  // namespace

Trajectory evolve_nls(const SpectralTransform& st, const NonlinearitySpec& nl, const FieldState& u0, double t_end,
                      const EvolveOptions& opt) {
  if (st.has_bound_states) {
    throw Error(ErrorKind::bound_states_present, "evolve_nls: negative eigenvalues detected; the small-data theory excludes them");
  }
  if (!(opt.dt > 0) || !(t_end >= 0)) throw Error(ErrorKind::invalid_argument, "evolve_nls needs dt > 0 and t_end >= 0");
  if (!opt.sample_times.empty() ? false : !(opt.sample_every > 0)) {
    throw Error(ErrorKind::invalid_argument, "sample interval must be positive");
  }
  if (u0.dim != st.dim) throw Error(ErrorKind::dimension_mismatch, "initial data dimension differs from the transform");
  if (!nl.is_zero()) require_alpha(nl.alpha);
  const double res0 = boundary_residual(st.boundary, u0);
  if (!(res0 < 1e-8)) {
    throw Error(ErrorKind::invalid_argument, "initial data violates the boundary condition (residual " + std::to_string(res0) + ")", res0);
  }

  Trajectory tr;
  tr.dt = opt.dt;
  Stepper stp(st, nl, opt.blowup_factor);
  stp.uhat = st.analyze(u0);
  tr.h1_initial = h1_norm(u0);
  stp.h1_initial = tr.h1_initial;

  auto record = [&](double t) {
    Snapshot s;
    s.t = t;
    s.u = st.synthesize(stp.uhat, t);
    s.uhat = stp.uhat;
    s.l2 = l2_norm(s.u);
    s.sup = sup_norm(s.u);
    s.h1 = h1_norm(s.u);
    tr.max_boundary_residual = std::max(tr.max_boundary_residual, s.u.boundary_residual);
    tr.snapshots.push_back(std::move(s));
  };

  const auto times = sample_schedule(t_end, opt);
  double t = 0.0;
  record(0.0);
  for (std::size_t q = 1; q < times.size(); ++q) {
    const double span = times[q] - t;
    const auto steps = static_cast<std::size_t>(std::ceil(span / opt.dt - 1e-9));
    const double tau = span / static_cast<double>(steps);
    stp.nonlinear(0.5 * tau, t);
    for (std::size_t s = 0; s < steps; ++s) {
      stp.linear(tau);
      stp.nonlinear(s + 1 == steps ? 0.5 * tau : tau, t + (s + 1) * tau);
    }
    tr.steps += steps;
    t = times[q];
    record(t);
  }
  return tr;
}

}  // namespace halfline
