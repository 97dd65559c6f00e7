#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "grid.hpp"
#include "linalg.hpp"

namespace halfline {

enum class PotentialKind { zero, piecewise_constant, sampled, closed_form };

const char* potential_kind_name(PotentialKind kind);

// Matrix potential sampled on a uniform grid over [0, x_max]. At a declared
// breakpoint that falls on a node the sample holds the mean of both sides.
struct PotentialSpec {
  std::size_t dim = 1;
  PotentialKind kind = PotentialKind::zero;
  std::string tag;
  XGrid grid;
  std::vector<ComplexMatrix> samples;
  std::vector<double> breakpoints;
  std::optional<double> decay_delta;
  // closed-form builtins keep their formula so they can be resampled exactly
  std::function<ComplexMatrix(double)> exact;

  double x_max() const { return grid.back(); }
  // Linear interpolation between samples; zero beyond x_max.
  ComplexMatrix at(double x) const;
  // One past the last node with nonzero V (tail below rel_cut * max is dropped).
  std::size_t support_count(double rel_cut = 1e-15) const;
  double support_end(double rel_cut = 1e-15) const;
  double max_norm() const;
  // integral of y * ||V(y)|| dy, the a-priori growth exponent of m
  double first_moment() const;
};

double weighted_l1_norm(const PotentialSpec& v, double sigma);

struct RegularityReport {
  bool pass = true;
  std::vector<double> jump_nodes;   // x of jumps away from declared breakpoints
  double tail_integral = 0.0;       // int_{x_N}^{x_max} <x>^{2+delta} ||V'|| dx
  double tail_outer_fraction = 0.0;  // share of that integral from the outer half
  bool tail_converging = true;
  double tail_bound = 0.0;          // max ||V|| <x>^{2+delta} beyond x_N
  std::string message;
};

RegularityReport check_regular_decomposition(const PotentialSpec& v, double delta);

XGrid default_potential_grid(double x_max = 40.0, double h = 0.005);

PotentialSpec zero_potential(std::size_t n, const XGrid& grid);
// c * chi_[0,a] * M0
PotentialSpec square_well(double c, double a, const ComplexMatrix& m0, const XGrid& grid);
// c * exp(-mu x) * M0
PotentialSpec exponential_potential(double c, double mu, const ComplexMatrix& m0, const XGrid& grid);
// c * exp(-(x/width)^2) * M0
PotentialSpec gaussian_potential(double c, double width, const ComplexMatrix& m0, const XGrid& grid);
// table rows (x, V) resampled linearly onto grid; zero beyond the last row
PotentialSpec table_potential(std::span<const double> x, std::span<const ComplexMatrix> v,
                              const XGrid& grid, std::vector<double> breakpoints = {});
// CSV columns: x, Re V_ij, Im V_ij in row-major ij order
PotentialSpec potential_from_csv(const std::string& path, std::size_t n, const XGrid& grid);

// Same potential on another grid. Closed forms are re-evaluated, piecewise
// constants keep their breakpoints, tables are interpolated.
PotentialSpec resample(const PotentialSpec& v, const XGrid& grid);

void check_hermitian(const ComplexMatrix& m, const char* what);

}  // namespace halfline
