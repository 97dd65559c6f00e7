#include <doctest.h>

#include <cmath>
#include <numbers>

#include "errors.hpp"
#include "linemap.hpp"

using namespace halfline;

namespace {

const double pi = std::numbers::pi;

LineField line_sample(const XGrid& g, const std::function<cplx(double)>& f) {
  LineField v;
  v.half = g;
  v.plus.resize(g.count);
  v.minus.resize(g.count);
  for (std::size_t l = 0; l < g.count; ++l) {
    v.plus[l] = f(g.at(l));
    v.minus[l] = f(-g.at(l));
  }
  return v;
}

// reflection and transmission for incidence from x > 0 on a delta of strength lam
std::pair<cplx, cplx> matching_oracle(double lam, double k) {
  const cplx ik(0, k);
  // r - t = -1 (continuity), ik r + (ik - lam) t = ik (derivative jump)
  const ComplexMatrix m{{1.0, -1.0}, {ik, ik - lam}};
  const CVector rhs{-1.0, ik};
  const CVector sol = inverse(m) * std::span<const cplx>(rhs);
  return {sol[0], sol[1]};
}

cplx free_gaussian(double x, double c, double a, double t) {
  const cplx s(a, t);
  return std::sqrt(a / s) * std::exp(-(x - c) * (x - c) / (4.0 * s));
}

}  // namespace

TEST_CASE("delta boundary pair") {
  const auto b0 = delta_boundary(1, ComplexMatrix{{0.0}});
  CHECK(b0.dim() == 2);
  // Lambda = 0: continuity of v and v' in folded variables
  CHECK(residual(b0, CVector{1.0, 1.0}, CVector{0.5, -0.5}) < 1e-15);
  CHECK(residual(b0, CVector{1.0, 0.9}, CVector{0.5, -0.5}) > 1e-3);
  const ComplexMatrix lam{{1.0, cplx(0, 0.5)}, {cplx(0, -0.5), 2.0}};
  CHECK(delta_boundary(2, lam).dim() == 4);
  CHECK_THROWS_AS(delta_boundary(2, ComplexMatrix{{1.0, 0.5}, {0.2, 1.0}}), Error);
}

TEST_CASE("to_halfline assembles the block problem") {
  LineProblem lp;
  lp.grid = XGrid{0.0, 0.01, 501};
  lp.transmission = delta_boundary(1, ComplexMatrix{{0.0}});
  auto z = to_halfline(lp);
  CHECK(z.potential.max_norm() == 0.0);
  CHECK(z.nonlinearity.is_zero());

  lp.q = [](double x) { return ComplexMatrix{{1.0 / std::cosh(x)}}; };
  auto even = to_halfline(lp);
  double d = 0;
  for (const auto& s : even.potential.samples) d = std::max(d, std::abs(s(0, 0) - s(1, 1)));
  CHECK(d == 0.0);
  lp.q = [](double x) { return ComplexMatrix{{std::exp(-(x - 1) * (x - 1))}}; };
  auto odd = to_halfline(lp);
  d = 0;
  for (const auto& s : odd.potential.samples) d = std::max(d, std::abs(s(0, 0) - s(1, 1)));
  CHECK(d > 0.1);

  lp.n_plus = [](std::span<const double> mu) { return ComplexMatrix{{mu[0] * mu[0] * mu[0]}}; };
  auto withn = to_halfline(lp);
  const std::vector<double> mu{0.5, 2.0};
  const auto nm = withn.nonlinearity(mu);
  CHECK(std::abs(nm(0, 0) - 0.125) < 1e-15);
  CHECK(std::abs(nm(1, 1)) == 0.0);
}

TEST_CASE("fold and unfold") {
  const XGrid g{0.0, 0.01, 1001};
  const auto v = line_sample(g, [](double x) { return std::exp(-x * x) * cplx(1.0 + x, 0.3 * x * x); });
  const auto psi = fold(v);
  const auto back = unfold(psi);
  CHECK(back.plus == v.plus);
  CHECK(back.minus == v.minus);
  CHECK(std::abs(l2_norm(psi) - l2_norm(v)) < 1e-12);
  const auto odd = fold(line_sample(g, [](double x) { return x * std::exp(-x * x); }));
  for (std::size_t l = 0; l < g.count; l += 37) CHECK(odd.values[2 * l + 1] == -odd.values[2 * l]);
}

TEST_CASE("delta scattering against the matching conditions") {
  const KGrid k{1e-3, 5e-3, 2000};
  for (double lam : {0.0, 1.0, 4.0}) {
    const auto rep = verify_line_scattering(lam, k);
    double err = 0;
    for (std::size_t j = 0; j < rep.k.size(); ++j) {
      const auto [r, t] = matching_oracle(lam, rep.k[j]);
      err = std::max({err, std::abs(rep.r[j] - r), std::abs(rep.t[j] - t)});
    }
    CHECK(err < 1e-6);
    CHECK(rep.max_error < 1e-6);
    CHECK(rep.max_unitarity < 1e-8);
    if (lam == 0.0) {
      CHECK(std::abs(rep.r.front()) < 1e-12);
      CHECK(std::abs(rep.t.front() - 1.0) < 1e-12);
      CHECK(rep.classification == Classification::exceptional);
    } else {
      CHECK(rep.classification == Classification::generic);
    }
  }
}

TEST_CASE("folded dynamics: free line and even/odd sectors") {
  const auto grids = transform_grids(40.0, 0.05, 4.9, 0.035);
  TransformSetup s;
  s.grids = grids;
  {
    // Lambda = 0, Q = 0 is the free line
    const auto bp = delta_boundary(1, ComplexMatrix{{0.0}});
    const auto b = make_transform(zero_potential(2, XGrid{0, 0.025, 3}), bp, s);
    auto v0 = line_sample(grids.x, [](double x) { return free_gaussian(x, 3.0, 1.0, 0.0); });
    auto psi0 = fold(v0);
    psi0.value_at_0 = CVector{free_gaussian(0, 3, 1, 0), free_gaussian(0, 3, 1, 0)};
    const cplx d = free_gaussian(0, 3, 1, 0) * (3.0 / 2.0);
    psi0.derivative_at_0 = CVector{d, -d};
    const auto v1 = unfold(propagate_linear(b.transform, psi0, 1.0));
    const auto want = line_sample(grids.x, [](double x) { return free_gaussian(x, 3.0, 1.0, 1.0); });
    CHECK(l2_distance(v1, want) < 1e-4);
  }
  for (double lam : {0.0, 1.0, 4.0}) {
    const auto bp = delta_boundary(1, ComplexMatrix{{lam}});
    const auto b = make_transform(zero_potential(2, XGrid{0, 0.025, 3}), bp, s);
    const double theta = pi / 2 + std::atan(lam / 2);
    const auto even_b = make_transform(zero_potential(1, XGrid{0, 0.025, 3}), from_angles(std::vector<double>{theta}), s);
    const auto odd_b = make_transform(zero_potential(1, XGrid{0, 0.025, 3}), dirichlet(1), s);
    for (int parity : {1, -1}) {
      auto g = [parity](double x) {
        const double ax = std::abs(x);
        return (x < 0 ? parity : 1) * std::exp(-(ax - 10) * (ax - 10) / 2) * std::exp(cplx(0, -ax));
      };
      const auto v0 = line_sample(grids.x, g);
      const auto line = unfold(propagate_linear(b.transform, fold(v0), 1.0));
      FieldState half;
      half.grid = grids.x;
      half.values = v0.plus;
      const auto sector = propagate_linear(parity > 0 ? even_b.transform : odd_b.transform, half, 1.0);
      LineField direct;
      direct.half = grids.x;
      direct.plus = sector.values;
      direct.minus = sector.values;
      for (auto& c : direct.minus) c *= parity;
      CHECK(l2_distance(line, direct) < 1e-4);
      if (lam == 4.0) {
        const auto folded = propagate_linear(b.transform, fold(v0), 1.0);
        CHECK(delta_jump_residual(folded, ComplexMatrix{{lam}}) < 1e-5);
      }
    }
  }
}

TEST_CASE("zero-energy classification on the line matches the folded problem") {
  const auto free_line = zero_energy_line([](double) { return 0.0; }, 20.0);
  CHECK(free_line.classification == Classification::exceptional);
  const auto barrier = zero_energy_line([](double x) { return 2.0 * std::exp(-x * x); }, 20.0);
  CHECK(barrier.classification == Classification::generic);

  const KGrid k{1e-3, 5e-3, 400};
  for (bool with_barrier : {false, true}) {
    LineProblem lp;
    lp.grid = default_potential_grid(10.0, 0.005);
    lp.transmission = delta_boundary(1, ComplexMatrix{{0.0}});
    if (with_barrier) lp.q = [](double x) { return ComplexMatrix{{2.0 * std::exp(-x * x)}}; };
    const auto h = to_halfline(lp);
    const auto sd = scattering_matrix(solve_m(h.potential, k), h.boundary);
    CHECK(sd.classification == (with_barrier ? barrier : free_line).classification);
    CHECK(sd.classification != Classification::purely_exceptional);
  }
}
