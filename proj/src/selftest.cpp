#include <cmath>
#include <functional>
#include <numbers>

#include "config.hpp"
#include "errors.hpp"
#include "evolve.hpp"
#include "jost.hpp"
#include "linemap.hpp"
#include "pipeline.hpp"
#include "spectral.hpp"

namespace halfline {

namespace {

constexpr double pi = std::numbers::pi;

cplx free_gaussian(double x, double c, double a, double t) {
  const cplx s(a, t);
  return std::sqrt(a / s) * std::exp(-(x - c) * (x - c) / (4.0 * s));
}

FieldState sample(const XGrid& g, const std::function<cplx(double)>& f) {
  FieldState u;
  u.grid = g;
  u.values.resize(g.count);
  for (std::size_t l = 0; l < g.count; ++l) u.values[l] = f(g.at(l));
  return u;
}

double free_s_error(const BoundaryPair& bp, const std::function<cplx(double)>& exact) {
  const KGrid k{1e-3, 0.01, 3000};
  const auto sd = scattering_matrix(solve_m(zero_potential(bp.dim(), XGrid{0.0, 0.005, 3}), k), bp);
  double e = 0;
  for (std::size_t j = 0; j < sd.k.size(); ++j) {
    for (std::size_t i = 0; i < bp.dim(); ++i) e = std::max(e, std::abs(sd.S[j](i, i) - exact(sd.k[j])));
  }
  return e;
}

TransformBundle free_transform(const BoundaryPair& bp) {
  TransformSetup s;
  s.grids = transform_grids(40.0, 0.05, 4.9, 0.035);
  s.scan = false;
  return make_transform(zero_potential(bp.dim(), XGrid{0.0, 0.025, 3}), bp, s);
}

}  // namespace

std::vector<SelftestCase> run_selftest() {
  std::vector<SelftestCase> out;
  auto run = [&](const std::string& name, double threshold, const std::function<double()>& measure) {
    SelftestCase c;
    c.name = name;
    c.threshold = threshold;
    try {
      c.value = measure();
      c.pass = std::isfinite(c.value) && c.value < threshold;
    } catch (const std::exception& e) {
      c.pass = false;
      c.value = NAN;
      c.message = e.what();
    }
    out.push_back(c);
  };
  auto check = [&](const std::string& name, const std::function<bool()>& pred) {
    run(name, 0.5, [&] { return pred() ? 0.0 : 1.0; });
  };

  check("complex literal parsing", [] {
    return parse_complex("0.3+0.4i") == cplx(0.3, 0.4) && parse_complex("-2i") == cplx(0, -2) &&
           std::abs(parse_real("2*pi/3") - 2 * pi / 3) < 1e-15 && parse_complex("1e-3-1e+2i") == cplx(1e-3, -1e2);
  });
  check("from_angles passes validation", [] {
    for (double th : {0.1, pi / 4, pi / 2, 2.0, pi}) {
      const auto bp = from_angles(std::vector<double>{th, pi / 2});
      validate(bp.a, bp.b);
    }
    return true;
  });
  run("free Dirichlet S = -I", 1e-8, [] { return free_s_error(dirichlet(1), [](double) { return cplx(-1.0); }); });
  run("free Neumann S = I", 1e-8, [] { return free_s_error(neumann(1), [](double) { return cplx(1.0); }); });
  run("free Robin S closed form", 1e-8, [] {
    const double th = pi / 4;
    return free_s_error(from_angles(std::vector<double>{th}), [th](double k) {
      return -(std::cos(th) - cplx(0, k) * std::sin(th)) / (std::cos(th) + cplx(0, k) * std::sin(th));
    });
  });
  run("square well unitarity", 1e-6, [] {
    const auto v = square_well(2.0, 1.0, ComplexMatrix{{1.0}}, default_potential_grid(5.0, 0.005));
    return scattering_matrix(solve_m(v, KGrid{1e-3, 0.01, 400}), dirichlet(1)).unitarity_residual;
  });
  run("free Dirichlet flow vs odd extension", 1e-4, [] {
    const auto b = free_transform(dirichlet(1));
    const auto u0 = sample(b.transform.xgrid, [](double x) { return free_gaussian(x, 10, 1, 0) - free_gaussian(x, -10, 1, 0); });
    const auto want = sample(b.transform.xgrid, [](double x) { return free_gaussian(x, 10, 1, 1) - free_gaussian(x, -10, 1, 1); });
    return l2_distance(propagate_linear(b.transform, u0, 1.0), want);
  });
  run("spectral roundtrip", 1e-3, [] {
    const auto v = exponential_potential(1.0, 2.0, ComplexMatrix{{1.0}}, default_potential_grid(20.0, 0.005));
    TransformSetup s;
    s.grids = transform_grids(40.0, 0.05, 4.5, 0.025);
    const auto b = make_transform(v, dirichlet(1), s);
    const auto u = moving_packet(b.transform.xgrid, dirichlet(1), 1.0, 12.0, 1.5, -1.0);
    const auto back = b.transform.synthesize(b.transform.analyze(u), 0.0);
    return l2_distance(back, u) / l2_norm(u);
  });
  run("free W equals V", 1e-12, [] {
    TransformSetup s;
    s.grids = transform_grids(20.0, 0.05, 4.0, 0.05);
    s.scan = false;
    const auto b = make_transform(zero_potential(1, XGrid{0.0, 0.025, 3}), dirichlet(1), s);
    GridFunction phi{1, UniformGrid{-2.0, 0.01, 401}, {}};
    for (std::size_t j = 0; j < 401; ++j) {
      const double k = phi.grid.at(j);
      phi.values.push_back(std::exp(-k * k) * cplx(1, k));
    }
    const UniformGrid xi{0.0, 0.02, 101};
    const GridFunction w = op_W(b.jost, 2.0, phi, xi), v = op_V(2.0, phi, xi);
    return l2_distance(w, v);
  });
  run("delta line scattering", 1e-6, [] {
    double e = 0;
    for (double lam : {0.0, 1.0, 4.0}) {
      const auto rep = verify_line_scattering(lam, KGrid{1e-3, 0.01, 1000});
      e = std::max({e, rep.max_error, rep.max_unitarity});
    }
    return e;
  });
  check("bound-state gate", [] {
    const auto v = square_well(-10.0, 1.0, ComplexMatrix{{1.0}}, default_potential_grid(5.0, 0.005));
    TransformSetup s;
    s.grids = transform_grids(20.0, 0.05, 3.0, 0.05);
    const auto b = make_transform(v, dirichlet(1), s);
    if (!b.transform.has_bound_states) return false;
    try {
      propagate_linear(b.transform, sample(b.transform.xgrid, [](double x) { return x * std::exp(-x * x); }), 1.0);
    } catch (const Error& e) {
      return e.kind() == ErrorKind::bound_states_present;
    }
    return false;
  });
  return out;
}

}  // namespace halfline
