#include "potential.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace halfline {

const char* potential_kind_name(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::zero: return "zero";
    case PotentialKind::piecewise_constant: return "piecewise-constant";
    case PotentialKind::sampled: return "sampled";
    case PotentialKind::closed_form: return "closed-form";
  }
  return "unknown";
}

void check_hermitian(const ComplexMatrix& m, const char* what) {
  if (!m.all_finite()) throw Error(ErrorKind::invalid_argument, std::string(what) + " has non-finite entries");
  const double d = max_abs(m - adjoint(m));
  if (d > 1e-12 * std::max(1.0, max_abs(m))) {
    throw Error(ErrorKind::hermiticity_violation,
                std::string(what) + " is not Hermitian, defect " + std::to_string(d), d);
  }
}

ComplexMatrix PotentialSpec::at(double x) const {
  if (samples.empty()) throw Error(ErrorKind::invalid_argument, "potential has no samples");
  if (x > grid.back() + 1e-12) return ComplexMatrix(dim);
  const double u = std::max(0.0, (x - grid.start) / grid.step);
  auto i = static_cast<std::size_t>(std::floor(u));
  if (i >= samples.size() - 1) return samples.back();
  const double f = u - static_cast<double>(i);
  if (f < 1e-12) return samples[i];
  return samples[i] * cplx(1.0 - f) + samples[i + 1] * cplx(f);
}

std::size_t PotentialSpec::support_count(double rel_cut) const {
  const double peak = max_norm();
  if (peak == 0.0) return 0;
  for (std::size_t i = samples.size(); i-- > 0;)
    if (max_abs(samples[i]) > rel_cut * peak) return i + 1;
  return 0;
}

double PotentialSpec::support_end(double rel_cut) const {
  const std::size_t c = support_count(rel_cut);
  return c == 0 ? grid.start : grid.at(c - 1);
}

double PotentialSpec::max_norm() const {
  double m = 0;
  for (const auto& s : samples) m = std::max(m, max_abs(s));
  return m;
}

double PotentialSpec::first_moment() const {
  const auto w = trapezoid_weights(samples.size(), grid.step);
  double s = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) s += w[i] * grid.at(i) * norm(samples[i]);
  return s;
}

double weighted_l1_norm(const PotentialSpec& v, double sigma) {
  if (v.samples.empty()) throw Error(ErrorKind::invalid_argument, "weighted_l1_norm: empty samples");
  if (!(sigma >= 0)) throw Error(ErrorKind::invalid_argument, "weighted_l1_norm: sigma must be >= 0");
  const auto w = trapezoid_weights(v.samples.size(), v.grid.step);
  double s = 0;
  for (std::size_t i = 0; i < v.samples.size(); ++i)
    s += w[i] * std::pow(1.0 + v.grid.at(i), sigma) * norm(v.samples[i]);
  return s;
}

RegularityReport check_regular_decomposition(const PotentialSpec& v, double delta) {
  RegularityReport rep;
  const std::size_t n = v.samples.size();
  if (n < 3) return rep;
  const double h = v.grid.step;
  std::vector<double> d(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) d[i] = max_abs(v.samples[i + 1] - v.samples[i]);
  const double floor = 1e-9 * std::max(v.max_norm(), 1e-300);

  auto excused = [&](std::size_t i) {
    const double lo = v.grid.at(i) - 1e-9, hi = v.grid.at(i + 1) + 1e-9;
    return std::any_of(v.breakpoints.begin(), v.breakpoints.end(),
                       [&](double b) { return b >= lo && b <= hi; });
  };

  std::vector<std::size_t> flagged;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    // skip the adjacent intervals: a jump averaged onto a node splits across two
    const double left = i >= 2 ? d[i - 2] : (i + 2 < n - 1 ? d[i + 2] : 0.0);
    const double right = i + 2 < n - 1 ? d[i + 2] : left;
    if (d[i] > 8.0 * std::max(left, right) + floor && !excused(i)) flagged.push_back(i);
  }
  for (std::size_t r = 0; r < flagged.size();) {
    std::size_t e = r;
    while (e + 1 < flagged.size() && flagged[e + 1] == flagged[e] + 1) ++e;
    rep.jump_nodes.push_back(v.grid.at((flagged[r] + flagged[e] + 1) / 2));
    r = e + 1;
  }

  const double x_n = v.breakpoints.empty() ? v.grid.start : v.breakpoints.back();
  const double mid = 0.5 * (x_n + v.grid.back());
  double outer = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double xm = v.grid.at(i) + 0.5 * h;
    if (xm < x_n || excused(i)) continue;
    const double weight = std::pow(1.0 + xm * xm, 0.5 * (2.0 + delta));
    const double contrib = weight * d[i];  // ||V'|| h
    rep.tail_integral += contrib;
    if (xm > mid) outer += contrib;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double x = v.grid.at(i);
    if (x < x_n) continue;
    rep.tail_bound = std::max(rep.tail_bound, max_abs(v.samples[i]) * std::pow(1.0 + x * x, 0.5 * (2.0 + delta)));
  }
  rep.tail_outer_fraction = rep.tail_integral > 0 ? outer / rep.tail_integral : 0.0;
  rep.tail_converging = rep.tail_integral < 1e-12 || rep.tail_outer_fraction <= 0.25;
  rep.pass = rep.jump_nodes.empty() && rep.tail_converging;
  std::ostringstream msg;
  if (!rep.jump_nodes.empty()) {
    msg << "discontinuity away from declared breakpoints near x =";
    for (double x : rep.jump_nodes) msg << ' ' << x;
    msg << ". ";
  }
  if (!rep.tail_converging)
    msg << "weighted derivative tail does not settle (outer-half share " << rep.tail_outer_fraction << ").";
  rep.message = msg.str();
  return rep;
}

XGrid default_potential_grid(double x_max, double h) {
  const auto count = static_cast<std::size_t>(std::llround(x_max / h)) + 1;
  return XGrid{0.0, x_max / static_cast<double>(count - 1), count};
}

namespace {

PotentialSpec make(std::size_t n, PotentialKind kind, std::string tag, const XGrid& grid) {
  grid.validate("potential grid");
  PotentialSpec v;
  v.dim = n;
  v.kind = kind;
  v.tag = std::move(tag);
  v.grid = grid;
  v.samples.assign(grid.count, ComplexMatrix(n));
  return v;
}

}  // namespace

PotentialSpec zero_potential(std::size_t n, const XGrid& grid) {
  return make(n, PotentialKind::zero, "zero", grid);
}

PotentialSpec square_well(double c, double a, const ComplexMatrix& m0, const XGrid& grid) {
  check_hermitian(m0, "M0");
  if (!(a > 0)) throw Error(ErrorKind::invalid_argument, "square well width must be positive");
  auto v = make(m0.dim(), PotentialKind::piecewise_constant, "square_well", grid);
  const ComplexMatrix full = m0 * cplx(c);
  for (std::size_t i = 0; i < grid.count; ++i) {
    const double x = grid.at(i);
    if (std::abs(x - a) < 1e-9 * std::max(1.0, a)) v.samples[i] = full * cplx(0.5);
    else if (x < a) v.samples[i] = full;
  }
  v.breakpoints = {0.0, a};
  return v;
}

PotentialSpec exponential_potential(double c, double mu, const ComplexMatrix& m0, const XGrid& grid) {
  check_hermitian(m0, "M0");
  if (!(mu > 0)) throw Error(ErrorKind::invalid_argument, "exponential rate must be positive");
  auto v = make(m0.dim(), PotentialKind::closed_form, "exponential", grid);
  v.exact = [m0, c, mu](double x) { return m0 * cplx(c * std::exp(-mu * x)); };
  for (std::size_t i = 0; i < grid.count; ++i) v.samples[i] = v.exact(grid.at(i));
  v.breakpoints = {0.0};
  return v;
}

PotentialSpec gaussian_potential(double c, double width, const ComplexMatrix& m0, const XGrid& grid) {
  check_hermitian(m0, "M0");
  if (!(width > 0)) throw Error(ErrorKind::invalid_argument, "gaussian width must be positive");
  auto v = make(m0.dim(), PotentialKind::closed_form, "gaussian", grid);
  v.exact = [m0, c, width](double x) {
    const double s = x / width;
    return m0 * cplx(c * std::exp(-s * s));
  };
  for (std::size_t i = 0; i < grid.count; ++i) v.samples[i] = v.exact(grid.at(i));
  v.breakpoints = {0.0};
  return v;
}

PotentialSpec table_potential(std::span<const double> x, std::span<const ComplexMatrix> vals,
                              const XGrid& grid, std::vector<double> breakpoints) {
  if (x.size() != vals.size() || x.empty()) throw Error(ErrorKind::invalid_argument, "potential table is empty or ragged");
  if (!std::is_sorted(x.begin(), x.end())) throw Error(ErrorKind::invalid_argument, "potential table x must increase");
  const std::size_t n = vals.front().dim();
  for (const auto& m : vals) {
    if (m.dim() != n) throw Error(ErrorKind::dimension_mismatch, "potential table rows differ in dimension");
    check_hermitian(m, "potential sample");
  }
  auto v = make(n, PotentialKind::sampled, "table", grid);
  for (std::size_t i = 0; i < grid.count; ++i) {
    const double xi = grid.at(i);
    if (xi > x.back() + 1e-12) break;
    auto it = std::upper_bound(x.begin(), x.end(), xi);
    if (it == x.begin()) {
      v.samples[i] = vals.front();
      continue;
    }
    const std::size_t hi = static_cast<std::size_t>(it - x.begin());
    if (hi == x.size()) {
      v.samples[i] = vals.back();
      continue;
    }
    const double f = (xi - x[hi - 1]) / (x[hi] - x[hi - 1]);
    v.samples[i] = vals[hi - 1] * cplx(1.0 - f) + vals[hi] * cplx(f);
  }
  v.breakpoints = std::move(breakpoints);
  if (v.breakpoints.empty()) v.breakpoints = {0.0};
  return v;
}

PotentialSpec potential_from_csv(const std::string& path, std::size_t n, const XGrid& grid) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open potential table " + path);
  std::vector<double> xs;
  std::vector<ComplexMatrix> vs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    std::vector<double> nums;
    double d;
    while (row >> d) nums.push_back(d);
    if (nums.empty() && lineno == 1) continue;  // header
    if (nums.size() != 1 + 2 * n * n) {
      throw Error(ErrorKind::config, path + ":" + std::to_string(lineno) + ": expected " +
                                         std::to_string(1 + 2 * n * n) + " columns");
    }
    ComplexMatrix m(n);
    for (std::size_t k = 0; k < n * n; ++k) m.data()[k] = cplx(nums[1 + 2 * k], nums[2 + 2 * k]);
    xs.push_back(nums[0]);
    vs.push_back(std::move(m));
  }
  return table_potential(xs, vs, grid);
}

PotentialSpec resample(const PotentialSpec& v, const XGrid& grid) {
  if (grid.count == v.grid.count && grid.step == v.grid.step && grid.start == v.grid.start) return v;
  auto out = make(v.dim, v.kind, v.tag, grid);
  out.breakpoints = v.breakpoints;
  out.decay_delta = v.decay_delta;
  out.exact = v.exact;
  if (v.kind == PotentialKind::zero) return out;
  std::vector<double> bp = v.breakpoints;
  bp.push_back(v.x_max());
  std::sort(bp.begin(), bp.end());
  for (std::size_t i = 0; i < grid.count; ++i) {
    const double x = grid.at(i);
    if (x > v.x_max() + 1e-12) break;
    if (v.exact) {
      out.samples[i] = v.exact(x);
      continue;
    }
    if (v.kind != PotentialKind::piecewise_constant) {
      out.samples[i] = v.at(x);
      continue;
    }
    // constant on each piece: read it at the piece midpoint, average at a breakpoint
    auto piece_value = [&](double y) {
      auto it = std::upper_bound(bp.begin(), bp.end(), y);
      if (it == bp.begin() || it == bp.end()) return ComplexMatrix(v.dim);
      return v.at(0.5 * (*(it - 1) + *it));
    };
    bool on_break = false;
    for (double b : bp)
      if (b > 0 && std::abs(x - b) < 1e-9 * std::max(1.0, b)) {
        out.samples[i] = (piece_value(b - 1e-9 * std::max(1.0, b) * 2) + piece_value(b + 1e-9 * std::max(1.0, b) * 2)) * cplx(0.5);
        on_break = true;
      }
    if (!on_break) out.samples[i] = piece_value(x);
  }
  return out;
}

}  // namespace halfline
