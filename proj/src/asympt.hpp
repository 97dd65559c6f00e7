#pragma once

#include <string>
#include <vector>

#include "evolve.hpp"
#include "grid.hpp"

namespace halfline {

struct FitWindow {
  double t_lo = 5.0;
  double t_hi = 100.0;
  std::size_t min_samples = 20;
};

// A table value(t) and its power-law fit over a window.
struct DecayTable {
  std::vector<double> t;
  std::vector<double> value;
  PowerLawFit fit;
  bool monotone = true;  // non-increasing over the fitted samples
  std::string warning;
};

// Log-spaced subset of the snapshot indices inside the window (at least min_samples when available).
std::vector<std::size_t> window_samples(const Trajectory& tr, const FitWindow& win);
DecayTable fit_table(std::vector<double> t, std::vector<double> value);

// w(t, k) = e^{itk^2} (F u(t))(k) on k >= 0, extended to the symmetric grid by w(-k) = S(k)^dagger w(k).
GridFunction extract_w(const SpectralTransform& st, const Snapshot& s);
// L2 distance of two interaction-picture states over k >= 0
double w_distance(const SpectralTransform& st, const GridFunction& a, const GridFunction& b);

struct FinalState {
  GridFunction w_final;
  double t_final = 0.0;
  DecayTable cauchy;  // ||w(2s) - w(s)|| against s
};

// w_final is the last snapshot; Cauchy differences over dyadic pairs with s in [a, t_end / 2].
FinalState final_state(const SpectralTransform& st, const Trajectory& tr, double a = 2.0);

DecayTable verify_decay(const Trajectory& tr, const FitWindow& win);

// sup_x |u(t, x) - 2^{-1/2} e^{ix^2/4t} (it)^{-1/2} m(x/2t, x) w(x/2t)|
DecayTable verify_profile(const Trajectory& tr, const JostTable& jt, const SpectralTransform& st,
                          const GridFunction& w_final, const FitWindow& win);

// || u(t) - e^{-itH_0} F_0^dagger w || with the free transform on the same grids and boundary
DecayTable verify_free_state(const Trajectory& tr, const SpectralTransform& free_st, const GridFunction& w_final,
                             const FitWindow& win);

struct AsymptoticsReport {
  double alpha = 0.0;
  std::vector<double> times;
  std::vector<double> sup_norm;
  DecayTable decay;
  FinalState final;
  DecayTable profile;
  DecayTable free_state;
  DecayTable free_state_control;  // same with w_final scaled by 1.1
  std::vector<std::string> warnings;
};

// Full suite on one trajectory; free_st is the V = 0 transform on the same grids and boundary.
AsymptoticsReport analyze_trajectory(const TransformBundle& b, const SpectralTransform& free_st, const Trajectory& tr,
                                     double alpha, const FitWindow& win, double a = 2.0, double control_scale = 1.1);

std::string to_json(const AsymptoticsReport& r);

}  // namespace halfline
