#pragma once

#include <functional>
#include <string>
#include <vector>

#include "evolve.hpp"
#include "potential.hpp"

namespace halfline {

// n x n problem on the line with a point interaction at 0, written through the
// stacked 2n x 2n boundary pair A = [A1; A2], B = [B1; B2].
struct LineProblem {
  std::size_t dim = 1;
  std::function<ComplexMatrix(double)> q;  // Q(x), x in R; empty means Q = 0
  XGrid grid;                              // sampling grid for x >= 0
  BoundaryPair transmission;               // 2n x 2n
  // N_{R,+} and N_{R,-} act on (|v(x)|, |v(-x)|) in R^{2n}; empty means zero
  std::function<ComplexMatrix(std::span<const double>)> n_plus, n_minus;
  double alpha = 3.0;
};

struct HalfLineForm {
  PotentialSpec potential;
  BoundaryPair boundary;
  NonlinearitySpec nonlinearity;
};

HalfLineForm to_halfline(const LineProblem& lp);

// Line function on a symmetric grid with the origin duplicated: plus[l] = v(x_l),
// minus[l] = v(-x_l), x_0 = 0 holds v(0+) and v(0-).
struct LineField {
  std::size_t dim = 1;
  XGrid half;
  CVector plus, minus;
  double t = 0.0;
};

FieldState fold(const LineField& v);
LineField unfold(const FieldState& psi);
double l2_norm(const LineField& v);
double l2_distance(const LineField& a, const LineField& b);

// A = [[0, I], [0, I]], B = [[-I, Lambda], [I, 0]]
BoundaryPair delta_boundary(std::size_t n, const ComplexMatrix& lambda);

// max over components of |v'(0+) - v'(0-) - Lambda v(0)| and |v(0+) - v(0-)|, from the
// boundary data carried by the folded state (exact when synthesized spectrally)
double delta_jump_residual(const FieldState& folded, const ComplexMatrix& lambda);

struct LineScatteringReport {
  double lambda = 0.0;
  std::vector<double> k;
  std::vector<cplx> r, t, r_exact, t_exact;
  double max_error = 0.0;       // max(|r - r_exact|, |t - t_exact|)
  double max_unitarity = 0.0;   // max ||r|^2 + |t|^2 - 1|
  Classification classification = Classification::generic;
};

// Q = 0, scalar delta of strength Lambda: the folded 2 x 2 scattering matrix against
// r = Lambda / (2ik - Lambda), t = 2ik / (2ik - Lambda).
LineScatteringReport verify_line_scattering(double lambda, const KGrid& k, double h = 0.005);

struct ZeroEnergyReport {
  Classification classification = Classification::generic;
  double slope = 0.0;  // v'(R) for the solution equal to 1 far to the left
};

// Bounded zero-energy solution on the line (scalar Q) by shooting over [-R, R].
ZeroEnergyReport zero_energy_line(const std::function<double(double)>& q, double R, double h = 1e-3,
                                  double tol = 1e-8);

}  // namespace halfline
