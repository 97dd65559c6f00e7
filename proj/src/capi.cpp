#include "halfline/halfline.h"

#include <cmath>
#include <new>
#include <string>
#include <vector>

#include "config.hpp"
#include "errors.hpp"
#include "jost.hpp"
#include "parallel.hpp"
#include "pipeline.hpp"

struct hl_config {
  halfline::RunConfig rc;
};

struct hl_scattering {
  halfline::ScatteringData sd;
};

namespace {

thread_local std::string last_error, last_kind, last_summary;
thread_local std::vector<std::string> last_files;
thread_local std::vector<halfline::SelftestCase> last_cases;

hl_status fail(hl_status s, const std::string& kind, const std::string& msg) {
  last_kind = kind;
  last_error = msg;
  return s;
}

template <class F>
hl_status guarded(F&& f) {
  last_error.clear();
  last_kind.clear();
  try {
    f();
    return HL_OK;
  } catch (const halfline::Error& e) {
    const bool cfg = e.kind() == halfline::ErrorKind::config;
    return fail(cfg ? HL_ERR_CONFIG : HL_ERR_NUMERICAL, halfline::error_kind_name(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(HL_ERR_NUMERICAL, "out_of_memory", "allocation failed");
  } catch (const std::exception& e) {
    return fail(HL_ERR_NUMERICAL, "internal", e.what());
  }
}

hl_status run(const hl_config* cfg, const char* out_dir,
              halfline::CommandResult (*cmd)(const halfline::RunConfig&, const std::string&)) {
  if (!cfg || !out_dir) return fail(HL_ERR_CONFIG, "config", "null config or output directory");
  return guarded([&] {
    auto r = cmd(cfg->rc, out_dir);
    last_summary = r.summary;
    last_files = r.files;
  });
}

}  // namespace

extern "C" {

const char* hl_version(void) { return "0.1.0"; }
size_t hl_worker_count(void) { return halfline::worker_count(); }

const char* hl_last_error(void) { return last_error.c_str(); }
const char* hl_last_error_kind(void) { return last_kind.c_str(); }
const char* hl_last_summary(void) { return last_summary.c_str(); }
size_t hl_last_file_count(void) { return last_files.size(); }
const char* hl_last_file(size_t i) { return i < last_files.size() ? last_files[i].c_str() : nullptr; }

hl_status hl_config_load(const char* path, hl_config** out) {
  if (!path || !out) return fail(HL_ERR_CONFIG, "config", "null argument");
  *out = nullptr;
  return guarded([&] { *out = new hl_config{halfline::load_run_config(path)}; });
}

hl_status hl_config_parse(const char* text, hl_config** out) {
  if (!text || !out) return fail(HL_ERR_CONFIG, "config", "null argument");
  *out = nullptr;
  return guarded([&] { *out = new hl_config{halfline::parse_run_config(halfline::ConfigFile::parse(text))}; });
}

void hl_config_free(hl_config* cfg) { delete cfg; }

size_t hl_config_warning_count(const hl_config* cfg) { return cfg ? cfg->rc.warnings.size() : 0; }
const char* hl_config_warning(const hl_config* cfg, size_t i) {
  return cfg && i < cfg->rc.warnings.size() ? cfg->rc.warnings[i].c_str() : nullptr;
}

hl_status hl_run_scatter(const hl_config* cfg, const char* out_dir) { return run(cfg, out_dir, halfline::cmd_scatter); }
hl_status hl_run_evolve(const hl_config* cfg, const char* out_dir) { return run(cfg, out_dir, halfline::cmd_evolve); }
hl_status hl_run_verify(const hl_config* cfg, const char* out_dir) { return run(cfg, out_dir, halfline::cmd_verify); }
hl_status hl_run_line(const hl_config* cfg, const char* out_dir) { return run(cfg, out_dir, halfline::cmd_line); }

hl_status hl_selftest(const char* out_dir, size_t* failed) {
  if (!out_dir) return fail(HL_ERR_CONFIG, "config", "null output directory");
  return guarded([&] {
    auto r = halfline::cmd_selftest(out_dir, &last_cases);
    last_summary = r.summary;
    last_files = r.files;
    size_t n = 0;
    for (const auto& c : last_cases) n += !c.pass;
    if (failed) *failed = n;
  });
}

size_t hl_selftest_case_count(void) { return last_cases.size(); }

hl_status hl_selftest_case(size_t i, const char** name, int* pass, double* value, double* threshold) {
  if (i >= last_cases.size()) return fail(HL_ERR_CONFIG, "out_of_range", "selftest case index out of range");
  const auto& c = last_cases[i];
  if (name) *name = c.name.c_str();
  if (pass) *pass = c.pass ? 1 : 0;
  if (value) *value = c.value;
  if (threshold) *threshold = c.threshold;
  return HL_OK;
}

hl_status hl_scattering_create(const hl_config* cfg, hl_scattering** out) {
  if (!cfg || !out) return fail(HL_ERR_CONFIG, "config", "null argument");
  *out = nullptr;
  return guarded([&] {
    const auto& rc = cfg->rc;
    auto v = halfline::build_potential(rc.potential);
    if (v.dim != rc.boundary.dim()) {
      throw halfline::Error(halfline::ErrorKind::config, "[potential] dim does not match the boundary dimension");
    }
    if (v.grid.step != rc.grids.jost_h) v = halfline::resample(v, halfline::default_potential_grid(rc.potential.x_max, rc.grids.jost_h));
    const auto count = static_cast<std::size_t>(std::floor((rc.grids.k_max - rc.grids.k_min) / rc.grids.dk + 1e-9)) + 1;
    halfline::JostOptions jo;
    jo.k_derivative = false;
    const auto jt = halfline::solve_m(v, halfline::KGrid{rc.grids.k_min, rc.grids.dk, count}, jo);
    *out = new hl_scattering{halfline::scattering_matrix(jt, rc.boundary)};
  });
}

void hl_scattering_free(hl_scattering* s) { delete s; }
size_t hl_scattering_dim(const hl_scattering* s) { return s ? s->sd.S0.dim() : 0; }
const char* hl_scattering_classification(const hl_scattering* s) {
  return s ? halfline::classification_name(s->sd.classification) : "";
}
double hl_scattering_unitarity(const hl_scattering* s) { return s ? s->sd.unitarity_residual : NAN; }

hl_status hl_scattering_at(const hl_scattering* s, double k, double* re, double* im) {
  if (!s || !re || !im) return fail(HL_ERR_CONFIG, "invalid_argument", "null argument");
  return guarded([&] {
    const auto m = s->sd.at(k);
    const std::size_t n = m.dim();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        re[i * n + j] = m(i, j).real();
        im[i * n + j] = m(i, j).imag();
      }
  });
}

}  // extern "C"
