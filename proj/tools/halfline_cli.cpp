#include <CLI11.hpp>

#include <cstdio>
#include <string>

#include "halfline/halfline.h"

namespace {

int report_failure(hl_status s) {
  std::fprintf(stderr, "error[%s]: %s\n", hl_last_error_kind(), hl_last_error());
  return static_cast<int>(s);
}

void report_success() {
  std::printf("%s\n", hl_last_summary());
  for (size_t i = 0; i < hl_last_file_count(); ++i) std::printf("wrote %s\n", hl_last_file(i));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Half-line matrix Schroedinger scattering and NLS evolution"};
  app.set_version_flag("--version", std::string(hl_version()));
  app.require_subcommand(1, 1);

  std::string config, out = "out";
  const char* names[] = {"scatter", "evolve", "verify", "line"};
  const char* help[] = {"scattering matrix, classification and bound-state scan",
                        "nonlinear evolution and trajectory export",
                        "large-time asymptotics report",
                        "line problem with a point interaction, folded to the half-line"};
  for (int i = 0; i < 4; ++i) {
    auto* sub = app.add_subcommand(names[i], help[i]);
    sub->add_option("--config", config, "config file")->required();
    sub->add_option("--out", out, "output directory");
  }
  auto* self = app.add_subcommand("selftest", "built-in oracle suite");
  self->add_option("--config", config, "ignored");
  self->add_option("--out", out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : HL_ERR_CONFIG;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  if (cmd == "selftest") {
    size_t failed = 0;
    const hl_status s = hl_selftest(out.c_str(), &failed);
    if (s != HL_OK) return report_failure(s);
    for (size_t i = 0; i < hl_selftest_case_count(); ++i) {
      const char* name = nullptr;
      int pass = 0;
      double value = 0, threshold = 0;
      hl_selftest_case(i, &name, &pass, &value, &threshold);
      std::printf("%s  %-40s %.3e (< %.1e)\n", pass ? "PASS" : "FAIL", name, value, threshold);
    }
    report_success();
    return failed ? HL_ERR_NUMERICAL : HL_OK;
  }

  hl_config* cfg = nullptr;
  hl_status s = hl_config_load(config.c_str(), &cfg);
  if (s != HL_OK) return report_failure(s);
  for (size_t i = 0; i < hl_config_warning_count(cfg); ++i) std::fprintf(stderr, "warning: %s\n", hl_config_warning(cfg, i));

  if (cmd == "scatter") s = hl_run_scatter(cfg, out.c_str());
  else if (cmd == "evolve") s = hl_run_evolve(cfg, out.c_str());
  else if (cmd == "verify") s = hl_run_verify(cfg, out.c_str());
  else s = hl_run_line(cfg, out.c_str());
  hl_config_free(cfg);
  if (s != HL_OK) return report_failure(s);
  report_success();
  return 0;
}
