#pragma once

#include <optional>
#include <span>
#include <vector>

#include "boundary.hpp"
#include "field.hpp"
#include "jost.hpp"

namespace halfline {

// Psi(k, x) = f(-k, x) + f(k, x) S(k)
ComplexMatrix physical_solution(const JostTable& jt, const ScatteringData& sd, double k, double x);

struct TransformGrids {
  XGrid x;  // [0, L], Simpson
  KGrid k;  // [0, K], Simpson, starts at 0
};

// Dense F: (F u)(k_j) = (2 pi)^{-1/2} sum_l wx_l Psi(-k_j, x_l)^dagger u(x_l) and its
// quadrature adjoint (F^dagger z)(x_l) = (2 pi)^{-1/2} sum_j wk_j Psi(-k_j, x_l) z(k_j).
class SpectralTransform {
 public:
  std::size_t dim = 1;
  XGrid xgrid;
  KGrid kgrid;
  std::vector<double> wx, wk;
  BoundaryPair boundary;
  std::vector<ComplexMatrix> S;           // S(k_j), S(0) extrapolated
  std::vector<ComplexMatrix> psi0, dpsi0;  // Psi(-k_j, 0) and its x-derivative
  bool has_bound_states = false;
  std::vector<double> bound_state_kappas;
  double isometry_residual = 0.0;
  double k_tail = 0.0;  // max_x ||m(K, x) - I||

  std::size_t nx() const { return xgrid.count; }
  std::size_t nk() const { return kgrid.count; }

  CVector forward(std::span<const cplx> u) const;
  CVector adjoint(std::span<const cplx> z) const;
  FieldState synthesize(std::span<const cplx> z, double t) const;
  CVector analyze(const FieldState& u) const;
  double k_norm(std::span<const cplx> z) const;

  // (2 pi)^{-1/2} Psi(-k_j, x_l)^dagger
  const cplx* kernel(std::size_t j, std::size_t l) const { return &a_[(j * nx() + l) * dim * dim]; }

 private:
  friend SpectralTransform build_transform(const JostTable&, const ScatteringData&, const BoundaryPair&,
                                           const TransformGrids&, const BoundStateScan*);
  CVector a_;
};

// jt must contain the nodes +-k_j of grids.k with stored profiles.
SpectralTransform build_transform(const JostTable& jt, const ScatteringData& sd, const BoundaryPair& bp,
                                  const TransformGrids& grids, const BoundStateScan* scan = nullptr);

struct TransformSetup {
  TransformGrids grids;
  double jost_step = 0.005;     // Volterra step, refined to divide the x step
  double scan_kappa_max = 0.0;  // 0: sqrt(max ||V||) + 1
  std::size_t scan_count = 200;
  bool scan = true;
};

struct TransformBundle {
  JostTable jost;
  ScatteringData scattering;
  BoundStateScan scan;
  SpectralTransform transform;
};

// Resamples v onto a Volterra grid aligned with the transform x-grid, solves and builds F.
TransformBundle make_transform(const PotentialSpec& v, const BoundaryPair& bp, const TransformSetup& setup);

// Transform grids with 2 K h < 0.5 and Simpson aliasing dk < pi / (2 L).
TransformGrids transform_grids(double length, double h, double k_max, double dk);

FieldState propagate_linear(const SpectralTransform& st, const FieldState& psi, double t);

struct EnergyForm {
  double value = 0.0;
  bool boundary_term_included = false;
};

// h(psi, psi) = int |psi'|^2 + <V psi, psi> - sum_j cot(theta_j) |psi_j(0)|^2 (diagonal boundaries only)
EnergyForm energy_form(const BoundaryPair& bp, const PotentialSpec& v, const FieldState& psi);

}  // namespace halfline
