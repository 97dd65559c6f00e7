#include "grid.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace halfline {

std::vector<double> UniformGrid::points() const {
  std::vector<double> p(count);
  for (std::size_t i = 0; i < count; ++i) p[i] = at(i);
  return p;
}

void UniformGrid::validate(const char* what) const {
  if (!(step > 0.0) || count < 2 || !std::isfinite(start)) {
    throw Error(ErrorKind::invalid_argument,
                std::string(what) + ": grid needs step > 0 and at least 2 nodes");
  }
}

UniformGrid UniformGrid::covering(double a, double b, double h, bool odd) {
  if (!(b > a) || !(h > 0)) throw Error(ErrorKind::invalid_argument, "empty grid interval");
  auto intervals = static_cast<std::size_t>(std::ceil((b - a) / h - 1e-9));
  if (intervals < 1) intervals = 1;
  if (odd && intervals % 2 == 1) ++intervals;
  return UniformGrid{a, (b - a) / static_cast<double>(intervals), intervals + 1};
}

std::vector<double> simpson_weights(std::size_t count, double step) {
  std::vector<double> w(count, 0.0);
  if (count < 2) return w;
  std::size_t simpson_end = (count % 2 == 1) ? count - 1 : count - 2;
  for (std::size_t i = 0; i + 2 <= simpson_end; i += 2) {
    w[i] += step / 3.0;
    w[i + 1] += 4.0 * step / 3.0;
    w[i + 2] += step / 3.0;
  }
  if (simpson_end != count - 1) {
    w[count - 2] += step / 2.0;
    w[count - 1] += step / 2.0;
  }
  return w;
}

std::vector<double> trapezoid_weights(std::size_t count, double step) {
  std::vector<double> w(count, step);
  if (count > 0) {
    w.front() = step / 2.0;
    w.back() = step / 2.0;
  }
  return w;
}

namespace {

Stencil make_stencil(std::size_t first, std::size_t size, const double* x, double t) {
  Stencil s;
  s.first = first;
  s.size = size;
  for (std::size_t i = 0; i < size; ++i) {
    double w = 1.0;
    for (std::size_t j = 0; j < size; ++j)
      if (j != i) w *= (t - x[j]) / (x[i] - x[j]);
    s.w[i] = w;
  }
  return s;
}

}  // namespace

Stencil lagrange_stencil(std::span<const double> nodes, double t) {
  const std::size_t n = nodes.size();
  if (n == 0) throw Error(ErrorKind::out_of_range, "interpolation on empty nodes");
  if (n == 1) return make_stencil(0, 1, nodes.data(), t);
  auto it = std::upper_bound(nodes.begin(), nodes.end(), t);
  std::size_t hi = static_cast<std::size_t>(it - nodes.begin());
  hi = std::clamp<std::size_t>(hi, 1, n - 1);
  if (nodes[hi - 1] == t) return make_stencil(hi - 1, 1, nodes.data() + hi - 1, t);
  const std::size_t size = std::min<std::size_t>(4, n);
  std::size_t first = hi >= 2 ? hi - 2 : 0;
  first = std::min(first, n - size);
  return make_stencil(first, size, nodes.data() + first, t);
}

Stencil lagrange_stencil_uniform(double start, double step, std::size_t count, double t) {
  if (count == 0) throw Error(ErrorKind::out_of_range, "interpolation on empty grid");
  const double u = (t - start) / step;
  const double r = std::round(u);
  if (std::abs(u - r) < 1e-10 && r >= 0 && r < static_cast<double>(count)) {
    Stencil s;
    s.first = static_cast<std::size_t>(r);
    s.size = 1;
    s.w[0] = 1.0;
    return s;
  }
  const std::size_t size = std::min<std::size_t>(4, count);
  long first = static_cast<long>(std::floor(u)) - 1;
  first = std::clamp<long>(first, 0, static_cast<long>(count - size));
  double x[4];
  for (std::size_t i = 0; i < size; ++i) x[i] = static_cast<double>(first + static_cast<long>(i));
  return make_stencil(static_cast<std::size_t>(first), size, x, u);
}

PowerLawFit fit_power_law(std::span<const double> t, std::span<const double> value) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < t.size() && i < value.size(); ++i) {
    if (t[i] > 0 && value[i] > 0 && std::isfinite(value[i])) {
      lx.push_back(std::log(t[i]));
      ly.push_back(std::log(value[i]));
    }
  }
  PowerLawFit fit;
  fit.samples = lx.size();
  if (lx.size() < 2) return fit;
  const double n = static_cast<double>(lx.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0) return fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (lx.size() > 2) {
    double sse = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      const double r = ly[i] - fit.intercept - fit.slope * lx[i];
      sse += r * r;
    }
    fit.slope_stderr = std::sqrt(sse / (n - 2) / sxx);
  }
  return fit;
}

}  // namespace halfline
