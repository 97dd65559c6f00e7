#include "asympt.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "errors.hpp"
#include "io.hpp"
#include "parallel.hpp"

namespace halfline {

std::vector<std::size_t> window_samples(const Trajectory& tr, const FitWindow& win) {
  std::vector<std::size_t> inside;
  for (std::size_t i = 0; i < tr.snapshots.size(); ++i) {
    const double t = tr.snapshots[i].t;
    if (t >= win.t_lo - 1e-12 && t <= win.t_hi + 1e-12 && t > 0) inside.push_back(i);
  }
  if (inside.size() <= win.min_samples) return inside;
  // log-spaced targets; refine the count until enough distinct snapshots are hit
  const double lo = std::log(tr.snapshots[inside.front()].t), hi = std::log(tr.snapshots[inside.back()].t);
  for (std::size_t want = win.min_samples + 4; want <= inside.size(); want += 4) {
    std::vector<std::size_t> pick;
    for (std::size_t q = 0; q < want; ++q) {
      const double target = std::exp(lo + (hi - lo) * static_cast<double>(q) / static_cast<double>(want - 1));
      std::size_t best = inside.front();
      for (std::size_t i : inside)
        if (std::abs(tr.snapshots[i].t - target) < std::abs(tr.snapshots[best].t - target)) best = i;
      if (pick.empty() || pick.back() != best) pick.push_back(best);
    }
    if (pick.size() >= win.min_samples) return pick;
  }
  return inside;
}

DecayTable fit_table(std::vector<double> t, std::vector<double> value) {
  DecayTable d;
  d.t = std::move(t);
  d.value = std::move(value);
  d.fit = fit_power_law(d.t, d.value);
  for (std::size_t i = 1; i < d.value.size(); ++i)
    if (d.value[i] > d.value[i - 1] * (1.0 + 1e-9)) d.monotone = false;
  return d;
}

GridFunction extract_w(const SpectralTransform& st, const Snapshot& s) {
  const std::size_t n = st.dim;
  GridFunction pos{n, st.kgrid, s.uhat};
  for (std::size_t j = 0; j < st.nk(); ++j) {
    const double k = st.kgrid.at(j);
    const cplx ph = std::exp(cplx(0, s.t * k * k));
    for (std::size_t i = 0; i < n; ++i) pos.values[j * n + i] *= ph;
  }
  return extend_E(st, pos);
}

double w_distance(const SpectralTransform& st, const GridFunction& a, const GridFunction& b) {
  const std::size_t nk = st.nk(), n = st.dim;
  if (a.values.size() != b.values.size() || a.grid.count != 2 * nk - 1) {
    throw Error(ErrorKind::dimension_mismatch, "interaction-picture states differ in shape");
  }
  double s = 0;
  for (std::size_t j = 0; j < nk; ++j)
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t q = (nk - 1 + j) * n + i;
      s += st.wk[j] * std::norm(a.values[q] - b.values[q]);
    }
  return std::sqrt(s);
}

FinalState final_state(const SpectralTransform& st, const Trajectory& tr, double a) {
  if (tr.snapshots.empty()) throw Error(ErrorKind::invalid_argument, "final_state needs snapshots");
  FinalState fs;
  fs.t_final = tr.snapshots.back().t;
  fs.w_final = extract_w(st, tr.snapshots.back());
  std::vector<double> s_vals, diffs;
  for (std::size_t i = 0; i < tr.snapshots.size(); ++i) {
    const double s = tr.snapshots[i].t;
    if (s < a - 1e-12 || 2 * s > fs.t_final + 1e-12) continue;
    const auto it = std::find_if(tr.snapshots.begin(), tr.snapshots.end(),
                                 [&](const Snapshot& q) { return std::abs(q.t - 2 * s) < 1e-9; });
    if (it == tr.snapshots.end()) continue;
    s_vals.push_back(s);
    diffs.push_back(w_distance(st, extract_w(st, *it), extract_w(st, tr.snapshots[i])));
  }
  fs.cauchy = fit_table(std::move(s_vals), std::move(diffs));
  if (fs.cauchy.t.size() >= 2 && !(fs.cauchy.fit.slope < 0)) {
    fs.cauchy.warning = "Cauchy differences do not decrease";
  }
  return fs;
}

DecayTable verify_decay(const Trajectory& tr, const FitWindow& win) {
  std::vector<double> t, v;
  for (std::size_t i : window_samples(tr, win)) {
    t.push_back(tr.snapshots[i].t);
    v.push_back(tr.snapshots[i].sup);
  }
  auto d = fit_table(std::move(t), std::move(v));
  if (!d.monotone) d.warning = "sup norm is not monotone over the window";
  return d;
}

DecayTable verify_profile(const Trajectory& tr, const JostTable& jt, const SpectralTransform& st,
                          const GridFunction& w_final, const FitWindow& win) {
  const std::size_t n = st.dim, nk = st.nk();
  const double K = st.kgrid.back();
  // w on k >= 0 is the upper half of the symmetric grid
  const std::size_t off = nk - 1;
  const auto idx = window_samples(tr, win);
  std::vector<double> t(idx.size()), v(idx.size());
  parallel_for(idx.size(), [&](std::size_t q) {
    const Snapshot& s = tr.snapshots[idx[q]];
    const double tt = s.t;
    const cplx pref = 1.0 / (std::sqrt(2.0) * std::sqrt(cplx(0, tt)));
    double worst = 0;
    for (std::size_t l = 0; l < st.nx(); ++l) {
      const double x = st.xgrid.at(l);
      const double k = x / (2 * tt);
      CVector p(n, 0.0);
      if (k <= K) {
        const Stencil sten = lagrange_stencil_uniform(0.0, st.kgrid.step, nk, k);
        CVector wk(n, 0.0);
        for (std::size_t r = 0; r < sten.size; ++r)
          for (std::size_t i = 0; i < n; ++i) wk[i] += sten.w[r] * w_final.values[(off + sten.first + r) * n + i];
        const CVector mw = jt.m(k, x) * std::span<const cplx>(wk);
        const cplx ph = pref * std::exp(cplx(0, x * x / (4 * tt)));
        for (std::size_t i = 0; i < n; ++i) p[i] = ph * mw[i];
      }
      double e = 0;
      for (std::size_t i = 0; i < n; ++i) e += std::norm(s.u.values[l * n + i] - p[i]);
      worst = std::max(worst, std::sqrt(e));
    }
    t[q] = tt;
    v[q] = worst;
  });
  return fit_table(std::move(t), std::move(v));
}

DecayTable verify_free_state(const Trajectory& tr, const SpectralTransform& free_st, const GridFunction& w_final,
                             const FitWindow& win) {
  const std::size_t n = free_st.dim, nk = free_st.nk();
  if (w_final.grid.count != 2 * nk - 1 || w_final.dim != n) {
    throw Error(ErrorKind::dimension_mismatch, "free transform grid does not match the final state");
  }
  const auto idx = window_samples(tr, win);
  std::vector<double> t(idx.size()), v(idx.size());
  for (std::size_t q = 0; q < idx.size(); ++q) {
    const Snapshot& s = tr.snapshots[idx[q]];
    CVector z(nk * n);
    for (std::size_t j = 0; j < nk; ++j) {
      const double k = free_st.kgrid.at(j);
      const cplx ph = std::exp(cplx(0, -s.t * k * k));
      for (std::size_t i = 0; i < n; ++i) z[j * n + i] = ph * w_final.values[(nk - 1 + j) * n + i];
    }
    const FieldState f = free_st.synthesize(z, s.t);
    t[q] = s.t;
    v[q] = l2_distance(s.u, f);
  }
  return fit_table(std::move(t), std::move(v));
}

AsymptoticsReport analyze_trajectory(const TransformBundle& b, const SpectralTransform& free_st, const Trajectory& tr,
                                     double alpha, const FitWindow& win, double a, double control_scale) {
  AsymptoticsReport r;
  r.alpha = alpha;
  for (const auto& s : tr.snapshots) {
    r.times.push_back(s.t);
    r.sup_norm.push_back(s.sup);
  }
  r.decay = verify_decay(tr, win);
  r.final = final_state(b.transform, tr, a);
  r.profile = verify_profile(tr, b.jost, b.transform, r.final.w_final, win);
  r.free_state = verify_free_state(tr, free_st, r.final.w_final, win);
  GridFunction ctl = r.final.w_final;
  for (auto& c : ctl.values) c *= control_scale;
  r.free_state_control = verify_free_state(tr, free_st, ctl, win);
  for (const DecayTable* d : {&r.decay, &r.final.cauchy, &r.profile, &r.free_state}) {
    if (!d->warning.empty()) r.warnings.push_back(d->warning);
  }
  if (r.decay.fit.samples < win.min_samples) {
    r.warnings.push_back("decay fit used " + std::to_string(r.decay.fit.samples) + " samples, fewer than requested");
  }
  return r;
}

namespace {

void table_json(std::ostringstream& o, const char* name, const DecayTable& d) {
  o << "  \"" << name << "\": {\"slope\": " << fmt(d.fit.slope) << ", \"slope_stderr\": " << fmt(d.fit.slope_stderr)
    << ", \"samples\": " << d.fit.samples << ", \"monotone\": " << (d.monotone ? "true" : "false")
    << ", \"warning\": " << json_string(d.warning) << ", \"t\": " << json_array(d.t) << ", \"value\": " << json_array(d.value)
    << "}";
}

}  // namespace

std::string to_json(const AsymptoticsReport& r) {
  std::ostringstream o;
  o << "{\n  \"alpha\": " << fmt(r.alpha) << ",\n";
  o << "  \"times\": " << json_array(r.times) << ",\n";
  o << "  \"sup_norm\": " << json_array(r.sup_norm) << ",\n";
  table_json(o, "decay", r.decay);
  o << ",\n";
  table_json(o, "cauchy", r.final.cauchy);
  o << ",\n  \"t_final\": " << fmt(r.final.t_final) << ",\n";
  table_json(o, "profile", r.profile);
  o << ",\n";
  table_json(o, "free_state", r.free_state);
  o << ",\n";
  table_json(o, "free_state_control", r.free_state_control);
  o << ",\n  \"warnings\": [";
  for (std::size_t i = 0; i < r.warnings.size(); ++i) o << (i ? ", " : "") << json_string(r.warnings[i]);
  o << "]\n}\n";
  return o.str();
}

}  // namespace halfline
