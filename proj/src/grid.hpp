#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace halfline {

// Uniform grid start + i*step, i < count.
struct UniformGrid {
  double start = 0.0;
  double step = 1.0;
  std::size_t count = 0;

  double at(std::size_t i) const { return start + static_cast<double>(i) * step; }
  double back() const { return at(count - 1); }
  std::vector<double> points() const;
  void validate(const char* what) const;

  // Grid on [a, b] with step close to h and an odd node count (Simpson-ready).
  static UniformGrid covering(double a, double b, double h, bool odd = true);
};

using XGrid = UniformGrid;
using KGrid = UniformGrid;

// Composite Simpson weights; an even count gets a trapezoid panel at the end.
std::vector<double> simpson_weights(std::size_t count, double step);
std::vector<double> trapezoid_weights(std::size_t count, double step);

// Four-point Lagrange stencil on sorted nodes around t.
struct Stencil {
  std::size_t first = 0;
  std::size_t size = 0;
  double w[4] = {0, 0, 0, 0};
};
Stencil lagrange_stencil(std::span<const double> nodes, double t);
Stencil lagrange_stencil_uniform(double start, double step, std::size_t count, double t);

// Weighted least-squares line fit in log-log coordinates.
struct PowerLawFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  std::size_t samples = 0;
};
PowerLawFit fit_power_law(std::span<const double> t, std::span<const double> value);

}  // namespace halfline
