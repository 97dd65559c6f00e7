#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "field.hpp"
#include "spectral.hpp"

namespace halfline {

enum class NonlinearityForm { scalar_power, diagonal_power, user };

const char* nonlinearity_form_name(NonlinearityForm form);

// N(mu), mu_j = |u_j|. scalar_power: lambda |mu|^alpha I; diagonal_power: diag(lambda_j mu_j^alpha).
struct NonlinearitySpec {
  NonlinearityForm form = NonlinearityForm::scalar_power;
  double alpha = 3.0;
  double lambda = 0.0;
  std::vector<double> lambdas;
  std::function<ComplexMatrix(std::span<const double>)> user;

  bool is_zero() const;
  ComplexMatrix operator()(std::span<const double> mu) const;
};

NonlinearitySpec scalar_power(double lambda, double alpha);
NonlinearitySpec diagonal_power(std::vector<double> lambdas, double alpha);
NonlinearitySpec user_nonlinearity(std::function<ComplexMatrix(std::span<const double>)> map, double alpha);

struct GrowthReport {
  bool pass = true;
  double constant = 0.0;  // max |N(mu)| / |mu|^alpha over the sweep
  double spread = 0.0;    // that maximum over its value at |mu| = 1
  std::string message;
};

GrowthReport check_growth(const NonlinearitySpec& nl, std::size_t n);
// max ||N(mu) P - P N(mu)|| over a deterministic sample of mu
double commutator_residual(const NonlinearitySpec& nl, const ComplexMatrix& p, std::size_t samples = 64);

// Phase multiplication by exp(i x^2 / 4t).
GridFunction op_M(double t, GridFunction phi);
// (it)^{-1/2} phi(x / t) sampled on target, cubic interpolation, zero outside phi's grid.
GridFunction op_Dt(double t, const GridFunction& phi, const UniformGrid& target);

// phi on st.kgrid (k >= 0) extended to the symmetric grid: E phi(-k) = S(k)^dagger phi(k).
GridFunction extend_E(const SpectralTransform& st, const GridFunction& phi);
// max_{k > 0} |S(k) f(-k) - f(k)| on a symmetric grid
double e_symmetry_residual(const SpectralTransform& st, const GridFunction& f);

// Throws resolution if 2 K t d >= 0.5 for the dilated oscillatory quadratures.
void check_oscillatory_guard(double t, double k_max, double step);

// W(t) phi(xi) = sqrt(it / 2pi) int e^{-it (k - xi/2)^2} m(k, t xi) phi(k) dk; phi on a symmetric k grid.
GridFunction op_W(const JostTable& jt, double t, const GridFunction& phi, const UniformGrid& xi);
GridFunction op_V(double t, const GridFunction& phi, const UniformGrid& xi);

// W_pm(t) phi(k) = sqrt(t / 2pi i) int_0^inf e^{it (k pm xi/2)^2} m(-+k, t xi)^dagger phi(xi) dxi
GridFunction op_Wpm(const JostTable& jt, double t, int sign, const GridFunction& phi, const UniformGrid& k);
GridFunction op_Vpm(double t, int sign, const GridFunction& phi, const UniformGrid& k);
// S(k) W_+ phi + W_- phi
GridFunction op_What(const JostTable& jt, const ScatteringData& sd, double t, const GridFunction& phi,
                     const UniformGrid& k);
GridFunction op_Vhat(const BoundaryPair& bp, double t, const GridFunction& phi, const UniformGrid& k);

// amplitude * (A v + x B v) exp(-x^2 / 2 width^2); satisfies the boundary condition exactly.
FieldState boundary_packet(const XGrid& grid, const BoundaryPair& bp, double amplitude, double width,
                           std::span<const cplx> v = {});
// amplitude * exp(-(x - centre)^2 / 2 width^2 + i p x) v
FieldState moving_packet(const XGrid& grid, const BoundaryPair& bp, double amplitude, double centre, double width,
                         double momentum, std::span<const cplx> v = {});

struct EvolveOptions {
  double dt = 0.01;
  double sample_every = 0.5;
  std::vector<double> sample_times;  // overrides sample_every when non-empty
  double blowup_factor = 10.0;
};

struct Snapshot {
  double t = 0.0;
  FieldState u;
  CVector uhat;  // F u(t) on the transform k grid
  double l2 = 0.0;
  double sup = 0.0;
  double h1 = 0.0;
};

struct Trajectory {
  std::vector<Snapshot> snapshots;
  double h1_initial = 0.0;
  double max_boundary_residual = 0.0;
  std::size_t steps = 0;
  double dt = 0.0;
};

// Strang splitting: exact linear flow in k space, frozen-coefficient exponential for N.
Trajectory evolve_nls(const SpectralTransform& st, const NonlinearitySpec& nl, const FieldState& u0, double t_end,
                      const EvolveOptions& opt = {});

}  // namespace halfline
