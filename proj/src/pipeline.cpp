#include "pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "asympt.hpp"
#include "errors.hpp"
#include "evolve.hpp"
#include "io.hpp"
#include "jost.hpp"
#include "linemap.hpp"
#include "spectral.hpp"

namespace halfline {

namespace {

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

std::string json_matrix(const ComplexMatrix& m) {
  std::ostringstream o;
  o << "{\"re\": [";
  for (std::size_t i = 0; i < m.dim(); ++i) {
    o << (i ? ", " : "") << "[";
    for (std::size_t j = 0; j < m.dim(); ++j) o << (j ? ", " : "") << fmt(m(i, j).real());
    o << "]";
  }
  o << "], \"im\": [";
  for (std::size_t i = 0; i < m.dim(); ++i) {
    o << (i ? ", " : "") << "[";
    for (std::size_t j = 0; j < m.dim(); ++j) o << (j ? ", " : "") << fmt(m(i, j).imag());
    o << "]";
  }
  o << "]}";
  return o.str();
}

std::string json_strings(const std::vector<std::string>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + json_string(v[i]);
  return s + "]";
}

std::string component_header(std::size_t n, const char* name) {
  std::string h;
  for (std::size_t i = 1; i <= n; ++i) {
    h += ",re_" + std::string(name) + std::to_string(i) + ",im_" + std::string(name) + std::to_string(i);
  }
  return h;
}

PotentialSpec potential_on_jost_grid(const RunConfig& rc) {
  PotentialSpec v = build_potential(rc.potential);
  if (v.dim != rc.boundary.dim()) {
    throw Error(ErrorKind::config, "[potential] dim does not match the boundary dimension");
  }
  if (std::abs(v.grid.step - rc.grids.jost_h) > 1e-15 * rc.grids.jost_h) {
    v = resample(v, default_potential_grid(rc.potential.x_max, rc.grids.jost_h));
  }
  return v;
}

TransformSetup setup_for(const RunConfig& rc) {
  TransformSetup s;
  s.grids = transform_grids(rc.grids.length, rc.grids.h, rc.grids.k_max, rc.grids.dk);
  s.jost_step = rc.grids.jost_h;
  return s;
}

TransformBundle free_bundle(std::size_t dim, const BoundaryPair& bp, TransformSetup s) {
  s.scan = false;
  return make_transform(zero_potential(dim, XGrid{0.0, s.jost_step, 3}), bp, s);
}

FieldState initial_state(const RunConfig& rc, const SpectralTransform& st) {
  const auto& in = rc.initial;
  if (in.kind == "boundary_packet") return boundary_packet(st.xgrid, rc.boundary, in.amplitude, in.width, in.direction);
  return moving_packet(st.xgrid, rc.boundary, in.amplitude, in.centre, in.width, in.momentum, in.direction);
}

Trajectory run_evolution(const RunConfig& rc, const TransformBundle& b) {
  EvolveOptions opt;
  opt.dt = rc.evolution.dt;
  opt.sample_every = rc.evolution.sample_every;
  return evolve_nls(b.transform, rc.nonlinearity, initial_state(rc, b.transform), rc.evolution.t_end, opt);
}

std::string trajectory_csv(const Trajectory& tr, const OutputConfig& oc) {
  std::ostringstream o;
  const std::size_t n = tr.snapshots.empty() ? 1 : tr.snapshots.front().u.dim;
  o << "t,x" << component_header(n, "u") << "\n";
  for (std::size_t s = 0; s < tr.snapshots.size(); s += oc.t_stride) {
    const auto& u = tr.snapshots[s].u;
    for (std::size_t l = 0; l < u.grid.count; l += oc.x_stride) {
      o << fmt(tr.snapshots[s].t) << "," << fmt(u.grid.at(l));
      for (const auto& c : u.at(l)) o << "," << fmt(c.real()) << "," << fmt(c.imag());
      o << "\n";
    }
  }
  return o.str();
}

std::string trajectory_json(const RunConfig& rc, const TransformBundle& b, const Trajectory& tr) {
  std::vector<double> t, l2, sup, h1;
  for (const auto& s : tr.snapshots) {
    t.push_back(s.t);
    l2.push_back(s.l2);
    sup.push_back(s.sup);
    h1.push_back(s.h1);
  }
  std::ostringstream o;
  o << "{\n  \"dim\": " << b.transform.dim << ",\n  \"dt\": " << fmt(tr.dt) << ",\n  \"steps\": " << tr.steps
    << ",\n  \"t_end\": " << fmt(rc.evolution.t_end) << ",\n  \"nonlinearity\": "
    << json_string(rc.nonlinearity.is_zero() ? "none" : nonlinearity_form_name(rc.nonlinearity.form))
    << ",\n  \"alpha\": " << fmt(rc.nonlinearity.alpha)
    << ",\n  \"classification\": " << json_string(classification_name(b.scattering.classification))
    << ",\n  \"isometry_residual\": " << fmt(b.transform.isometry_residual)
    << ",\n  \"nx\": " << b.transform.nx() << ",\n  \"nk\": " << b.transform.nk()
    << ",\n  \"h1_initial\": " << fmt(tr.h1_initial)
    << ",\n  \"max_boundary_residual\": " << fmt(tr.max_boundary_residual) << ",\n  \"t\": " << json_array(t)
    << ",\n  \"l2\": " << json_array(l2) << ",\n  \"sup\": " << json_array(sup) << ",\n  \"h1\": " << json_array(h1)
    << "\n}\n";
  return o.str();
}

std::string table_csv(const char* tname, const char* vname, const DecayTable& d) {
  std::ostringstream o;
  o << tname << "," << vname << "\n";
  for (std::size_t i = 0; i < d.t.size(); ++i) o << fmt(d.t[i]) << "," << fmt(d.value[i]) << "\n";
  return o.str();
}

void emit(CommandResult& res, const std::string& dir, const std::string& name, const std::string& content) {
  write_file(join(dir, name), content);
  res.files.push_back(name);
}

}  // namespace

CommandResult cmd_scatter(const RunConfig& rc, const std::string& out_dir) {
  ensure_directory(out_dir);
  CommandResult res;
  res.warnings = rc.warnings;
  const auto v = potential_on_jost_grid(rc);
  const auto& g = rc.grids;
  check_grid_guard(g.k_max, v.grid.step);
  const auto count = static_cast<std::size_t>(std::floor((g.k_max - g.k_min) / g.dk + 1e-9)) + 1;
  const KGrid kg{g.k_min, g.dk, count};
  JostOptions jo;
  jo.k_derivative = false;
  const auto jt = solve_m(v, kg, jo);
  const auto sd = scattering_matrix(jt, rc.boundary);
  const double kappa_max = std::sqrt(v.max_norm()) + 1.0;
  const auto scan = bound_state_scan(v, rc.boundary, kappa_max, 200);

  const std::size_t n = sd.S0.dim();
  std::ostringstream csv;
  csv << "k";
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= n; ++j) csv << ",re_S" << i << j << ",im_S" << i << j;
  csv << "\n";
  for (std::size_t q = 0; q < sd.k.size(); ++q) {
    csv << fmt(sd.k[q]);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) csv << "," << fmt(sd.S[q](i, j).real()) << "," << fmt(sd.S[q](i, j).imag());
    csv << "\n";
  }
  emit(res, out_dir, "scattering.csv", csv.str());

  std::vector<double> energies;
  for (double kap : scan.detected) energies.push_back(-kap * kap);
  std::ostringstream js;
  js << "{\n  \"dim\": " << n << ",\n  \"potential\": " << json_string(rc.potential.kind)
     << ",\n  \"boundary\": {\"A\": " << json_matrix(rc.boundary.a) << ", \"B\": " << json_matrix(rc.boundary.b) << "}"
     << ",\n  \"k_count\": " << sd.k.size()
     << ",\n  \"classification\": " << json_string(classification_name(sd.classification))
     << ",\n  \"S0\": " << json_matrix(sd.S0) << ",\n  \"S0_eigenvalues\": " << json_array(sd.s0_eigenvalues)
     << ",\n  \"S0_ambiguous\": " << (sd.s0_ambiguous ? "true" : "false")
     << ",\n  \"count_plus\": " << sd.count_plus << ",\n  \"count_minus\": " << sd.count_minus
     << ",\n  \"unitarity_residual\": " << fmt(sd.unitarity_residual)
     << ",\n  \"extrapolation_residual\": " << fmt(sd.extrapolation_residual)
     << ",\n  \"scan\": {\"kappa\": " << json_array(scan.kappa) << ", \"sigma\": " << json_array(scan.sigma)
     << ", \"median\": " << fmt(scan.median) << ", \"detected_kappa\": " << json_array(scan.detected)
     << ", \"eigenvalues\": " << json_array(energies) << "}"
     << ",\n  \"bound_states_present\": " << (scan.detected.empty() ? "false" : "true")
     << ",\n  \"warnings\": " << json_strings(res.warnings) << "\n}\n";
  emit(res, out_dir, "scatter.json", js.str());
  res.summary = std::string("classification ") + classification_name(sd.classification) + ", unitarity residual " +
                fmt(sd.unitarity_residual) + ", bound states " + std::to_string(scan.detected.size());
  return res;
}

CommandResult cmd_evolve(const RunConfig& rc, const std::string& out_dir) {
  ensure_directory(out_dir);
  CommandResult res;
  res.warnings = rc.warnings;
  const auto b = make_transform(potential_on_jost_grid(rc), rc.boundary, setup_for(rc));
  const auto tr = run_evolution(rc, b);
  emit(res, out_dir, "trajectory.csv", trajectory_csv(tr, rc.output));
  emit(res, out_dir, "evolve.json", trajectory_json(rc, b, tr));
  const auto& last = tr.snapshots.back();
  res.summary = "t " + fmt(last.t) + ", steps " + std::to_string(tr.steps) + ", L2 " + fmt(last.l2) + ", sup " +
                fmt(last.sup);
  return res;
}

CommandResult cmd_verify(const RunConfig& rc, const std::string& out_dir) {
  ensure_directory(out_dir);
  CommandResult res;
  res.warnings = rc.warnings;
  const auto setup = setup_for(rc);
  const auto b = make_transform(potential_on_jost_grid(rc), rc.boundary, setup);
  const auto fb = free_bundle(b.transform.dim, rc.boundary, setup);
  const auto tr = run_evolution(rc, b);
  FitWindow win{rc.verify.fit_lo, std::min(rc.verify.fit_hi, rc.evolution.t_end), rc.verify.min_samples};
  auto rep = analyze_trajectory(b, fb.transform, tr, rc.nonlinearity.alpha, win, rc.evolution.a,
                                rc.verify.control_scale);
  for (const auto& w : rep.warnings) res.warnings.push_back(w);
  rep.warnings = res.warnings;
  emit(res, out_dir, "report.json", to_json(rep));
  emit(res, out_dir, "evolve.json", trajectory_json(rc, b, tr));
  emit(res, out_dir, "decay.csv", table_csv("t", "sup_norm", rep.decay));
  emit(res, out_dir, "cauchy.csv", table_csv("s", "w_difference", rep.final.cauchy));
  emit(res, out_dir, "profile.csv", table_csv("t", "profile_error", rep.profile));
  std::ostringstream fs;
  fs << "t,free_state_distance,control_distance\n";
  for (std::size_t i = 0; i < rep.free_state.t.size(); ++i) {
    fs << fmt(rep.free_state.t[i]) << "," << fmt(rep.free_state.value[i]) << ","
       << fmt(rep.free_state_control.value[i]) << "\n";
  }
  emit(res, out_dir, "free_state.csv", fs.str());
  res.summary = "decay slope " + fmt(rep.decay.fit.slope) + ", cauchy " + fmt(rep.final.cauchy.fit.slope) +
                ", profile " + fmt(rep.profile.fit.slope) + ", free state " + fmt(rep.free_state.fit.slope) +
                ", control " + fmt(rep.free_state_control.fit.slope);
  return res;
}

CommandResult cmd_line(const RunConfig& rc, const std::string& out_dir) {
  ensure_directory(out_dir);
  CommandResult res;
  res.warnings = rc.warnings;
  const auto& lc = rc.line;
  const std::size_t n = lc.lambda.dim();
  LineProblem lp;
  lp.dim = n;
  lp.grid = default_potential_grid(rc.potential.x_max, rc.grids.jost_h);
  if (lc.q == "gaussian") {
    const double c = lc.q_c, w = lc.q_width;
    lp.q = [c, w, n](double x) {
      ComplexMatrix m = ComplexMatrix::identity(n);
      for (std::size_t i = 0; i < n; ++i) m(i, i) = c * std::exp(-x * x / (w * w));
      return m;
    };
  }
  try {
    lp.transmission = delta_boundary(n, lc.lambda);
  } catch (const Error& e) {
    throw Error(ErrorKind::config, std::string("[line] lambda: ") + e.what());
  }
  lp.alpha = rc.nonlinearity.alpha;
  const auto half = to_halfline(lp);
  const auto setup = setup_for(rc);
  const auto b = make_transform(half.potential, half.boundary, setup);
  const auto& st = b.transform;

  // packet at +centre moving with momentum, mirrored with the chosen parity
  const double sign = lc.parity == "even" ? 1.0 : (lc.parity == "odd" ? -1.0 : 0.0);
  auto packet = [&](double x) {
    return lc.amplitude * std::exp(-(x - lc.centre) * (x - lc.centre) / (2 * lc.width * lc.width)) *
           std::exp(cplx(0, lc.momentum * x));
  };
  LineField v0;
  v0.dim = n;
  v0.half = st.xgrid;
  v0.plus.assign(st.nx() * n, 0.0);
  v0.minus.assign(st.nx() * n, 0.0);
  for (std::size_t l = 0; l < st.nx(); ++l) {
    const double x = st.xgrid.at(l);
    for (std::size_t i = 0; i < n; ++i) {
      v0.plus[l * n + i] = packet(x);
      v0.minus[l * n + i] = sign * packet(x);
    }
  }
  FieldState psi0 = fold(v0);
  const double res0 = boundary_residual(half.boundary, psi0);
  if (res0 > 1e-8) {
    throw Error(ErrorKind::config, "[line] initial packet does not vanish near the origin; move centre away", res0);
  }
  const auto psi1 = propagate_linear(st, psi0, lc.t);
  const LineField v1 = unfold(psi1);

  std::ostringstream csv;
  csv << "t,x" << component_header(n, "v") << "\n";
  for (const LineField* f : std::initializer_list<const LineField*>{&v0, &v1}) {
    const double t = f == &v0 ? 0.0 : lc.t;
    for (std::size_t l = st.nx(); l-- > 1;) {
      if ((l % rc.output.x_stride) != 0) continue;
      csv << fmt(t) << "," << fmt(-st.xgrid.at(l));
      for (std::size_t i = 0; i < n; ++i) csv << "," << fmt(f->minus[l * n + i].real()) << "," << fmt(f->minus[l * n + i].imag());
      csv << "\n";
    }
    for (std::size_t l = 0; l < st.nx(); l += rc.output.x_stride) {
      csv << fmt(t) << "," << fmt(st.xgrid.at(l));
      for (std::size_t i = 0; i < n; ++i) csv << "," << fmt(f->plus[l * n + i].real()) << "," << fmt(f->plus[l * n + i].imag());
      csv << "\n";
    }
  }
  emit(res, out_dir, "line.csv", csv.str());

  std::ostringstream js;
  js << "{\n  \"dim\": " << n << ",\n  \"lambda\": " << json_matrix(lc.lambda) << ",\n  \"q\": " << json_string(lc.q)
     << ",\n  \"t\": " << fmt(lc.t) << ",\n  \"classification\": "
     << json_string(classification_name(b.scattering.classification))
     << ",\n  \"isometry_residual\": " << fmt(st.isometry_residual) << ",\n  \"norm_initial\": " << fmt(l2_norm(v0))
     << ",\n  \"norm_final\": " << fmt(l2_norm(v1)) << ",\n  \"jump_residual\": "
     << fmt(delta_jump_residual(psi1, lc.lambda));
  std::string summary = std::string("classification ") + classification_name(b.scattering.classification);

  const bool scalar_free = n == 1 && lc.q == "zero" && std::abs(lc.lambda(0, 0).imag()) == 0.0;
  if (scalar_free) {
    const double lam = lc.lambda(0, 0).real();
    const auto count = static_cast<std::size_t>(std::floor((rc.grids.k_max - rc.grids.k_min) / rc.grids.dk + 1e-9)) + 1;
    const auto rep = verify_line_scattering(lam, KGrid{rc.grids.k_min, rc.grids.dk, count}, rc.grids.jost_h);
    js << ",\n  \"scattering\": {\"max_error\": " << fmt(rep.max_error) << ", \"max_unitarity\": "
       << fmt(rep.max_unitarity) << ", \"classification\": " << json_string(classification_name(rep.classification))
       << "}";
    std::ostringstream sc;
    sc << "k,re_r,im_r,re_t,im_t,re_r_exact,im_r_exact,re_t_exact,im_t_exact\n";
    for (std::size_t j = 0; j < rep.k.size(); ++j) {
      sc << fmt(rep.k[j]) << "," << fmt(rep.r[j].real()) << "," << fmt(rep.r[j].imag()) << "," << fmt(rep.t[j].real())
         << "," << fmt(rep.t[j].imag()) << "," << fmt(rep.r_exact[j].real()) << "," << fmt(rep.r_exact[j].imag()) << ","
         << fmt(rep.t_exact[j].real()) << "," << fmt(rep.t_exact[j].imag()) << "\n";
    }
    emit(res, out_dir, "line_scattering.csv", sc.str());
    summary += ", scattering error " + fmt(rep.max_error);

    if (sign != 0.0) {
      // even data lives in the Robin sector, odd data in the Dirichlet sector
      const BoundaryPair sector_bp =
          sign > 0 ? from_angles(std::vector<double>{std::numbers::pi / 2 + std::atan(lam / 2)}) : dirichlet(1);
      const auto sb = make_transform(zero_potential(1, XGrid{0.0, setup.jost_step, 3}), sector_bp, setup);
      FieldState h0;
      h0.grid = st.xgrid;
      h0.values = v0.plus;
      const auto h1 = propagate_linear(sb.transform, h0, lc.t);
      LineField direct;
      direct.half = st.xgrid;
      direct.plus = h1.values;
      direct.minus = h1.values;
      for (auto& c : direct.minus) c *= sign;
      const double err = l2_distance(v1, direct);
      js << ",\n  \"sector_distance\": " << fmt(err);
      summary += ", sector distance " + fmt(err);
    }
  }
  js << ",\n  \"warnings\": " << json_strings(res.warnings) << "\n}\n";
  emit(res, out_dir, "line.json", js.str());
  res.summary = summary;
  return res;
}

CommandResult cmd_selftest(const std::string& out_dir, std::vector<SelftestCase>* cases) {
  ensure_directory(out_dir);
  CommandResult res;
  const auto all = run_selftest();
  std::ostringstream js;
  js << "{\n  \"cases\": [\n";
  std::size_t failed = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    const auto& c = all[i];
    failed += !c.pass;
    js << "    {\"name\": " << json_string(c.name) << ", \"pass\": " << (c.pass ? "true" : "false")
       << ", \"value\": " << fmt(c.value) << ", \"threshold\": " << fmt(c.threshold)
       << ", \"message\": " << json_string(c.message) << "}" << (i + 1 < all.size() ? "," : "") << "\n";
  }
  js << "  ],\n  \"failed\": " << failed << "\n}\n";
  emit(res, out_dir, "selftest.json", js.str());
  res.summary = std::to_string(all.size() - failed) + "/" + std::to_string(all.size()) + " passed";
  if (cases) *cases = all;
  return res;
}

}  // namespace halfline
