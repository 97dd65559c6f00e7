#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "halfline/halfline.h"

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* free_config =
    "[potential]\nkind = zero\n[boundary]\ntype = dirichlet\n"
    "[grids]\nx_max = 20\nh = 0.05\nk_min = 0.01\nk_max = 3\ndk = 0.01\n";

}  // namespace

TEST_CASE("version and workers") {
  CHECK(std::string(hl_version()).size() > 0);
  CHECK(hl_worker_count() >= 1);
}

TEST_CASE("config errors come back as status codes") {
  hl_config* cfg = nullptr;
  CHECK(hl_config_parse("[grids]\nk_max = 10\nh = 0.05\n", &cfg) == HL_ERR_CONFIG);
  CHECK(cfg == nullptr);
  CHECK(std::string(hl_last_error_kind()) == "config");
  CHECK(std::string(hl_last_error()).find("guard") != std::string::npos);
  CHECK(hl_config_load("/nonexistent/x.ini", &cfg) == HL_ERR_CONFIG);
  CHECK(hl_config_parse(nullptr, &cfg) == HL_ERR_CONFIG);
  CHECK(hl_run_scatter(nullptr, "/tmp") == HL_ERR_CONFIG);

  REQUIRE(hl_config_parse(free_config, &cfg) == HL_OK);
  CHECK(std::string(hl_last_error_kind()).empty());
  CHECK(hl_config_warning_count(cfg) == 0);
  hl_config_free(cfg);
}

TEST_CASE("scattering handle") {
  hl_config* cfg = nullptr;
  REQUIRE(hl_config_parse(free_config, &cfg) == HL_OK);
  hl_scattering* s = nullptr;
  REQUIRE(hl_scattering_create(cfg, &s) == HL_OK);
  CHECK(hl_scattering_dim(s) == 1);
  CHECK(std::string(hl_scattering_classification(s)) == "generic");
  CHECK(hl_scattering_unitarity(s) < 1e-12);
  double re = 0, im = 0;
  for (double k : {-2.0, 0.5, 1.234}) {
    REQUIRE(hl_scattering_at(s, k, &re, &im) == HL_OK);
    CHECK(std::abs(re + 1.0) < 1e-12);
    CHECK(std::abs(im) < 1e-12);
  }
  hl_scattering_free(s);
  hl_config_free(cfg);

  REQUIRE(hl_config_parse("[potential]\nkind = exponential\ndim = 2\nm0 = [[1, 0.5i], [-0.5i, 2]]\n"
                          "[boundary]\ntheta = [2*pi/3, pi]\n[grids]\nk_max = 3\ndk = 0.01\n", &cfg) == HL_OK);
  REQUIRE(hl_scattering_create(cfg, &s) == HL_OK);
  REQUIRE(hl_scattering_dim(s) == 2);
  double r[4], i[4], rm[4], imm[4];
  REQUIRE(hl_scattering_at(s, 1.3, r, i) == HL_OK);
  REQUIRE(hl_scattering_at(s, -1.3, rm, imm) == HL_OK);
  // S(-k) = S(k)^dagger
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      CHECK(std::abs(rm[a * 2 + b] - r[b * 2 + a]) < 1e-12);
      CHECK(std::abs(imm[a * 2 + b] + i[b * 2 + a]) < 1e-12);
    }
  hl_scattering_free(s);
  hl_config_free(cfg);
}

TEST_CASE("scatter run writes identical artifacts twice") {
  hl_config* cfg = nullptr;
  REQUIRE(hl_config_parse(free_config, &cfg) == HL_OK);
  const auto base = std::filesystem::temp_directory_path() / "halfline_capi_test";
  std::filesystem::remove_all(base);
  REQUIRE(hl_run_scatter(cfg, (base / "a").c_str()) == HL_OK);
  CHECK(hl_last_file_count() == 2);
  REQUIRE(hl_run_scatter(cfg, (base / "b").c_str()) == HL_OK);
  const auto a = slurp(base / "a" / "scattering.csv");
  CHECK(a.size() > 1000);
  CHECK(a == slurp(base / "b" / "scattering.csv"));
  CHECK(a.substr(0, a.find('\n')) == "k,re_S11,im_S11");
  CHECK(slurp(base / "a" / "scatter.json").find("\"classification\": \"generic\"") != std::string::npos);
  hl_config_free(cfg);
  std::filesystem::remove_all(base);
}

TEST_CASE("numerical failures are status 1") {
  hl_config* cfg = nullptr;
  REQUIRE(hl_config_parse("[potential]\nkind = square_well\nc = -10\na = 1\nx_max = 5\n"
                          "[grids]\nx_max = 20\nh = 0.05\nk_max = 3\ndk = 0.05\n"
                          "[initial]\nkind = boundary_packet\n[evolution]\nt_end = 3\n", &cfg) == HL_OK);
  const auto dir = std::filesystem::temp_directory_path() / "halfline_capi_bound";
  CHECK(hl_run_evolve(cfg, dir.c_str()) == HL_ERR_NUMERICAL);
  CHECK(std::string(hl_last_error_kind()) == "bound-states-present");
  hl_config_free(cfg);
  std::filesystem::remove_all(dir);
}

TEST_CASE("selftest through the C API") {
  const auto dir = std::filesystem::temp_directory_path() / "halfline_capi_selftest";
  size_t failed = 99;
  REQUIRE(hl_selftest(dir.c_str(), &failed) == HL_OK);
  CHECK(failed == 0);
  CHECK(hl_selftest_case_count() >= 10);
  const char* name = nullptr;
  int pass = 0;
  CHECK(hl_selftest_case(0, &name, &pass, nullptr, nullptr) == HL_OK);
  CHECK(name != nullptr);
  CHECK(hl_selftest_case(1000, &name, &pass, nullptr, nullptr) != HL_OK);
  std::filesystem::remove_all(dir);
}
