#include <doctest.h>

#include <cmath>
#include <numbers>

#include "errors.hpp"
#include "jost.hpp"
#include "oracles.hpp"

using namespace halfline;

namespace {

const double pi = std::numbers::pi;

KGrid scatter_grid(double k_min = 1e-3, double k_max = 30.0, double dk = 5e-3) {
  const auto count = static_cast<std::size_t>(std::floor((k_max - k_min) / dk + 1e-9)) + 1;
  return KGrid{k_min, dk, count};
}

oracle::PotentialFn well_fn(double c, double a) {
  return [c, a](double x) { return ComplexMatrix{{x < a ? c : 0.0}}; };
}

}  // namespace

TEST_CASE("free potential gives identity") {
  const auto v = zero_potential(2, default_potential_grid(40.0, 0.005));
  JostOptions opt;
  opt.store_profiles = true;
  opt.profile_stride = 10;
  const auto jt = solve_m(v, KGrid{0.0, 0.5, 9}, opt);
  for (std::size_t i = 0; i < jt.k.size(); ++i) {
    CHECK(max_abs(jt.m0[i] - ComplexMatrix::identity(2)) == 0.0);
    CHECK(max_abs(jt.dm_dx0[i]) == 0.0);
    CHECK(max_abs(jt.dm_dk0[i]) == 0.0);
  }
  CHECK(max_abs(jt.m(1.3, 0.7) - ComplexMatrix::identity(2)) < 1e-15);
}

TEST_CASE("free Jost matrices and scattering matrices") {
  const auto v = zero_potential(1, default_potential_grid(40.0, 0.005));
  const auto jt = solve_m(v, scatter_grid());
  const BoundaryPair dir = dirichlet(1), neu = neumann(1);
  const double th = pi / 4;
  const BoundaryPair rob = from_angles(std::vector<double>{th});
  for (double k : {0.001, 0.5, 7.25, 29.996}) {
    CHECK(std::abs(jost_matrix(jt, dir, k)(0, 0) - 1.0) < 1e-14);
    CHECK(std::abs(jost_matrix(jt, neu, k)(0, 0) - cplx(0, -k)) < 1e-14);
    // from_angles stores A = -sin, B = cos: J = cos + ik sin
    CHECK(std::abs(jost_matrix(jt, rob, k)(0, 0) - (std::cos(th) + cplx(0, k) * std::sin(th))) < 1e-14);
  }
  const auto sd = scattering_matrix(jt, dir);
  CHECK(sd.classification == Classification::generic);
  CHECK(max_abs(sd.P_minus - ComplexMatrix::identity(1)) < 1e-12);
  const auto sn = scattering_matrix(jt, neu);
  CHECK(sn.classification == Classification::purely_exceptional);
  CHECK(max_abs(sn.P_plus - ComplexMatrix::identity(1)) < 1e-12);
  const auto sr = scattering_matrix(jt, rob);
  double err = 0;
  for (std::size_t i = 0; i < sr.k.size(); ++i) {
    const double k = sr.k[i];
    const cplx expect = -(std::cos(th) - cplx(0, k) * std::sin(th)) / (std::cos(th) + cplx(0, k) * std::sin(th));
    err = std::max(err, std::abs(sr.S[i](0, 0) - expect));
  }
  CHECK(err < 1e-12);
  CHECK(sr.unitarity_residual < 1e-13);
}

TEST_CASE("triangular solve matches the backward ODE on the square well") {
  const double c = 2.0, a = 1.0, h = 0.005;
  const auto v = square_well(c, a, ComplexMatrix::identity(1), default_potential_grid(40.0, h));
  const auto grid = scatter_grid();
  const auto jt = solve_m(v, grid);
  JostOptions raw;
  raw.richardson = false;
  const auto jt_raw = solve_m(v, grid, raw);
  double err = 0, err_raw = 0, err_dx = 0;
  for (std::size_t i = 0; i < jt.k.size(); i += 37) {
    const double k = jt.k[i];
    const auto ref = oracle::backward_ode(well_fn(c, a), 1, k, a, h / 4, true);
    err = std::max(err, max_abs(jt.m0[i] - ref.m));
    err_raw = std::max(err_raw, max_abs(jt_raw.m0[i] - ref.m));
    err_dx = std::max(err_dx, max_abs(jt.dm_dx0[i] - ref.dm));
  }
  MESSAGE("richardson err " << err << ", raw err " << err_raw << ", dx err " << err_dx);
  CHECK(err < 1e-6);
  CHECK(err_dx < 1e-5);  // trapezoid remainder grows like (kh)^4
}

TEST_CASE("Neumann series converges to the triangular solve") {
  const double c = 2.0, a = 1.0, h = 0.005;
  const auto v = square_well(c, a, ComplexMatrix::identity(1), default_potential_grid(40.0, h));
  JostOptions raw;
  raw.richardson = false;
  const double moment = v.first_moment();
  CHECK(moment == doctest::Approx(c * a * a / 2).epsilon(1e-4));
  const auto terms = static_cast<std::size_t>(std::ceil(std::exp(1.0) * moment)) + 10;
  const std::size_t last = static_cast<std::size_t>(std::llround(a / h)) + 1;
  // the library samples the jump node with the mean value
  auto fn = [&](double x) {
    if (std::abs(x - a) < 1e-9) return ComplexMatrix{{c / 2}};
    return ComplexMatrix{{x < a ? c : 0.0}};
  };
  for (double k : {0.001, 0.731, 4.0, 17.5, 29.0}) {
    const auto p = jost_point(v, k, raw);
    const auto series = oracle::neumann_series(fn, 1, k, h, last, terms);
    CHECK(max_abs(p.m - series) < 1e-10);
  }
}

TEST_CASE("dm/dk agrees with centred differences") {
  const cplx i(0, 1);
  const auto v = exponential_potential(1.0, 2.0, ComplexMatrix{{1.0, 0.5 * i}, {-0.5 * i, -0.5}},
                                       default_potential_grid(20.0, 0.005));
  for (double k : {0.3, 2.0, 9.0}) {
    double prev = 0;
    for (double dk : {0.02, 0.01}) {
      const auto p = jost_point(v, k, {});
      const auto pp = jost_point(v, k + dk, {});
      const auto pm = jost_point(v, k - dk, {});
      const double err = max_abs((pp.m - pm.m) * cplx(1.0 / (2 * dk)) - p.dm_dk);
      if (prev > 0) CHECK(prev / err == doctest::Approx(4.0).epsilon(0.1));
      prev = err;
    }
  }
}

TEST_CASE("symmetry S(-k) = S(k)^dagger from a direct J(-k) solve") {
  const cplx i(0, 1);
  const auto v = square_well(1.0, 2.0, ComplexMatrix{{1.0, 0.3 + 0.4 * i}, {0.3 - 0.4 * i, 2.0}},
                             default_potential_grid(40.0, 0.005));
  const BoundaryPair bp = from_angles(std::vector<double>{2 * pi / 3, 5 * pi / 6});
  const auto jt = solve_m(v, scatter_grid());
  const auto sd = scattering_matrix(jt, bp);
  CHECK(sd.unitarity_residual < 1e-8);
  for (int r = 0; r < 10; ++r) {
    const double k = 0.1 + 2.9 * r;
    auto jm = [&](double q) {
      const JostPoint p = jost_point(v, -q, {});
      return jost_matrix_from(p, -q, bp);
    };
    const ComplexMatrix s_plus = jm(-k) * inverse(jm(k)) * cplx(-1);
    const ComplexMatrix s_minus = jm(k) * inverse(jm(-k)) * cplx(-1);
    CHECK(max_abs(s_minus - adjoint(s_plus)) < 1e-10);
    CHECK(max_abs(s_plus - sd.at(k)) < 1e-8);
  }
  // |S(k) - S0| <k> / k stays bounded and S0 is the -I of the generic case
  CHECK(sd.classification == Classification::generic);
  double ratio_max = 0, ratio_min = 1e300;
  for (std::size_t j = 0; j < sd.k.size(); j += 50) {
    const double k = sd.k[j];
    const double r = norm(sd.S[j] - sd.S0) * std::sqrt(1 + k * k) / k;
    ratio_max = std::max(ratio_max, r);
    ratio_min = std::min(ratio_min, r);
  }
  MESSAGE("|S-S0|<k>/k in [" << ratio_min << ", " << ratio_max << "]");
  CHECK(ratio_max < 50.0);
  CHECK(norm(sd.P_minus * sd.P_minus - sd.P_minus) < 1e-8);
  CHECK(norm(sd.P_plus + sd.P_minus - ComplexMatrix::identity(2)) < 1e-8);
}

TEST_CASE("Jost envelope ||m - I|| <k> <x>^{1+delta} stays bounded") {
  const auto v = exponential_potential(1.0, 1.0, ComplexMatrix::identity(1), default_potential_grid(40.0, 0.005));
  JostOptions opt;
  opt.store_profiles = true;
  opt.profile_stride = 20;
  opt.k_derivative = false;
  const auto jt = solve_m(v, KGrid{0.05, 0.25, 60}, opt);
  double env = 0;
  for (std::size_t ik = 0; ik < jt.k.size(); ++ik)
    for (std::size_t ix = 0; ix < jt.profile_grid.count; ++ix) {
      const double k = jt.k[ik], x = jt.profile_grid.at(ix);
      const double d = std::abs(jt.m_profile(ik, ix)[0] - 1.0);
      env = std::max(env, d * std::sqrt(1 + k * k) * std::pow(1 + x * x, 1.5));
    }
  MESSAGE("envelope " << env);
  CHECK(env < 10.0);
  // interpolation reproduces nodes and stays close between them
  const double k = jt.k[jt.k.size() / 2 + 3];
  CHECK(std::abs(jt.m(k, 0.0)(0, 0) - jt.m0[jt.k.size() / 2 + 3](0, 0)) < 1e-14);
  const auto direct = jost_point(v, 1.234, {});
  CHECK(std::abs(jt.m_at_0(1.234)(0, 0) - direct.m(0, 0)) < 1e-3);  // cubic in k at dk = 0.25
}

TEST_CASE("grid guard") {
  const auto v = zero_potential(1, default_potential_grid(40.0, 0.01));
  CHECK_THROWS_AS(solve_m(v, scatter_grid()), Error);
  CHECK_NOTHROW(check_grid_guard(30.0, 0.005));
}

TEST_CASE("bound state scan") {
  const auto grid = default_potential_grid(40.0, 0.005);
  SUBCASE("free Dirichlet has none") {
    const auto scan = bound_state_scan(zero_potential(1, grid), dirichlet(1), 5.0, 100);
    CHECK(scan.detected.empty());
  }
  SUBCASE("free Neumann has none") {
    const auto scan = bound_state_scan(zero_potential(1, grid), neumann(1), 5.0, 400);
    CHECK(scan.detected.empty());
  }
  SUBCASE("attractive Robin: kappa = cot theta") {
    const double th = pi / 2 - 0.3;
    const auto scan = bound_state_scan(zero_potential(1, grid), from_angles(std::vector<double>{th}), 2.0, 100);
    REQUIRE(scan.detected.size() == 1);
    CHECK(scan.detected[0] == doctest::Approx(1.0 / std::tan(th)).epsilon(1e-6));
  }
  SUBCASE("square wells agree with shooting") {
    for (double depth : {0.5, 2.0, 3.5, 10.0, 25.0}) {
      const auto v = square_well(-depth, 1.0, ComplexMatrix::identity(1), grid);
      const auto scan = bound_state_scan(v, dirichlet(1), std::sqrt(depth) + 1.0, 200);
      const int shots = oracle::shooting_bound_states(-depth, 1.0, pi, std::sqrt(depth) + 1.0, 400);
      CHECK_MESSAGE(static_cast<int>(scan.detected.size()) == shots, "depth " << depth);
      for (double kappa : scan.detected) {
        // Dirichlet well: sqrt(c - kappa^2) cot(sqrt(c - kappa^2)) = -kappa
        const double q = std::sqrt(depth - kappa * kappa);
        CHECK(q / std::tan(q) == doctest::Approx(-kappa).epsilon(1e-5));
      }
    }
  }
}
