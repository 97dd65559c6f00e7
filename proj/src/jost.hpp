#pragma once

#include <span>
#include <vector>

#include "boundary.hpp"
#include "grid.hpp"
#include "linalg.hpp"
#include "potential.hpp"

namespace halfline {

struct JostOptions {
  // combine the h and 2h trapezoid solutions, (4 m_h - m_2h) / 3
  bool richardson = true;
  bool k_derivative = true;
  bool store_profiles = false;
  // profile spacing in solve-grid nodes; rounded up to even under richardson
  std::size_t profile_stride = 2;
  double support_cut = 1e-15;
};

// Boundary values at x = 0 for one (possibly complex) k.
struct JostPoint {
  ComplexMatrix m, dm_dx, dm_dk;
};

JostPoint jost_point(const PotentialSpec& v, cplx k, const JostOptions& opt = {});

// Faded Jost solution m(k, x) = e^{-ikx} f(k, x) on a signed k list.
class JostTable {
 public:
  std::size_t dim = 1;
  std::vector<double> k;          // ascending, mirrored about 0
  double solve_step = 0.0;
  bool richardson = false;
  double x_support = 0.0;         // m = I for x >= x_support
  XGrid profile_grid{0.0, 1.0, 0};
  std::vector<ComplexMatrix> m0, dm_dx0, dm_dk0;

  bool has_profiles() const { return profile_grid.count > 0; }
  std::size_t k_node(double kv) const;  // exact node index, throws otherwise
  bool is_node(double kv) const;

  ComplexMatrix m_at_0(double kv) const;
  ComplexMatrix dm_dx_at_0(double kv) const;
  ComplexMatrix dm_dk_at_0(double kv) const;

  // Interpolated profile; even extension to x < 0, identity beyond support.
  ComplexMatrix m(double kv, double x) const;
  ComplexMatrix dm_dx(double kv, double x) const;
  ComplexMatrix dm_dk(double kv, double x) const;

  // Raw profile block (n*n entries) at k node ik and profile node ix.
  const cplx* m_profile(std::size_t ik, std::size_t ix) const {
    return &m_prof_[(ik * profile_grid.count + ix) * dim * dim];
  }
  const cplx* dm_dx_profile(std::size_t ik, std::size_t ix) const {
    return &dmdx_prof_[(ik * profile_grid.count + ix) * dim * dim];
  }

 private:
  friend JostTable solve_m(const PotentialSpec&, std::span<const double>, const JostOptions&);
  std::vector<cplx> m_prof_, dmdx_prof_, dmdk_prof_;
  ComplexMatrix interp_0(const std::vector<ComplexMatrix>& vals, double kv) const;
  ComplexMatrix interp_profile(const std::vector<cplx>& prof, double kv, double x, double sign) const;
};

// k_positive: ascending nonnegative k; negatives are added by mirroring.
JostTable solve_m(const PotentialSpec& v, std::span<const double> k_positive, const JostOptions& opt = {});
JostTable solve_m(const PotentialSpec& v, const KGrid& k_positive, const JostOptions& opt = {});

// f(k,0) = m, f'(k,0) = ik m + dm_dx; J(k) = f(-k*,0)^dagger B - f'(-k*,0)^dagger A.
// point must hold the boundary values at q = -conj(k).
ComplexMatrix jost_matrix_from(const JostPoint& point, cplx q, const BoundaryPair& bp);
ComplexMatrix jost_matrix(const JostTable& jt, const BoundaryPair& bp, double k);
ComplexMatrix free_scattering_matrix(const BoundaryPair& bp, double k);

enum class Classification { generic, exceptional, purely_exceptional };
const char* classification_name(Classification c);

struct ScatteringData {
  std::vector<double> k;            // positive grid
  std::vector<ComplexMatrix> S;
  ComplexMatrix S0, S_inf, P_plus, P_minus;
  std::vector<double> s0_eigenvalues;
  std::size_t count_plus = 0, count_minus = 0;
  bool s0_ambiguous = false;
  Classification classification = Classification::generic;
  double unitarity_residual = 0.0;
  double extrapolation_residual = 0.0;

  // Cubic interpolation in k through (0, S0) and the grid; S(-k) = S(k)^dagger.
  ComplexMatrix at(double kv) const;
};

ScatteringData scattering_matrix(const JostTable& jt, const BoundaryPair& bp);

struct BoundStateScan {
  std::vector<double> kappa;
  std::vector<double> sigma;   // smallest singular value of J(i kappa)
  double median = 0.0;
  std::vector<double> detected;  // kappa of candidates; eigenvalues are -kappa^2
};

BoundStateScan bound_state_scan(const PotentialSpec& v, const BoundaryPair& bp, double kappa_max,
                                std::size_t count, const JostOptions& opt = {});

// Largest allowed trapezoid step for a k range: 2 K h < 0.5.
void check_grid_guard(double k_max, double h);

}  // namespace halfline
