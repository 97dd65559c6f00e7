#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "boundary.hpp"
#include "evolve.hpp"
#include "linalg.hpp"
#include "potential.hpp"

namespace halfline {

// Sectioned key = value text. '#' and ';' start comments, values may span lines
// while brackets are open.
class ConfigFile {
 public:
  static ConfigFile parse(const std::string& text, const std::string& origin = "<string>");
  static ConfigFile load(const std::string& path);

  bool has(const std::string& section, const std::string& key) const;
  std::string raw(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  std::size_t get_size(const std::string& section, const std::string& key, std::size_t fallback) const;
  std::vector<double> get_doubles(const std::string& section, const std::string& key) const;
  std::vector<cplx> get_complexes(const std::string& section, const std::string& key) const;
  ComplexMatrix get_matrix(const std::string& section, const std::string& key) const;
  // keys never read by the program, as "section.key"
  std::vector<std::string> unused() const;

 private:
  std::string origin_;
  std::map<std::string, std::map<std::string, std::string>> data_;
  mutable std::map<std::string, bool> used_;
  std::string where(const std::string& section, const std::string& key) const;
};

// "1.5", "-2i", "0.3+0.4i", "i", "pi", "2pi/3", "5*pi/6"
double parse_real(const std::string& s);
cplx parse_complex(const std::string& s);
ComplexMatrix parse_matrix(const std::string& s);
std::vector<std::string> split_list(const std::string& s);

struct PotentialConfig {
  std::string kind = "zero";  // zero | square_well | exponential | gaussian | table
  std::size_t dim = 1;
  double c = 0.0;
  double a = 1.0;      // square well width
  double mu = 1.0;     // exponential rate
  double width = 1.0;  // gaussian width
  ComplexMatrix m0 = ComplexMatrix::identity(1);
  std::string file;
  double x_max = 40.0;
  double h = 0.005;
};

struct InitialConfig {
  std::string kind = "boundary_packet";  // boundary_packet | moving_packet
  double amplitude = 0.05;
  double width = 1.5;
  double centre = 10.0;
  double momentum = 0.0;
  std::vector<cplx> direction;
};

struct GridConfig {
  double length = 40.0;  // transform window [0, L]
  double h = 0.05;
  double k_min = 1e-3;
  double k_max = 4.0;
  double dk = 0.005;
  double jost_h = 0.005;
};

struct EvolutionConfig {
  double dt = 0.01;
  double t_end = 10.0;
  double sample_every = 0.5;
  double a = 2.0;
};

struct VerifyConfig {
  double fit_lo = 5.0;
  double fit_hi = 100.0;
  std::size_t min_samples = 20;
  double control_scale = 1.1;
};

struct LineConfig {
  ComplexMatrix lambda = ComplexMatrix(1);
  std::string q = "zero";  // zero | gaussian
  double q_c = 0.0;
  double q_width = 1.0;
  std::string parity = "even";  // even | odd | none
  double t = 1.0;
  double amplitude = 1.0;
  double centre = 10.0;
  double width = 1.0;
  double momentum = -1.0;
};

struct OutputConfig {
  std::size_t x_stride = 10;
  std::size_t t_stride = 1;
};

struct RunConfig {
  PotentialConfig potential;
  BoundaryPair boundary;
  std::string boundary_text;
  NonlinearitySpec nonlinearity;
  InitialConfig initial;
  GridConfig grids;
  EvolutionConfig evolution;
  VerifyConfig verify;
  LineConfig line;
  OutputConfig output;
  std::vector<std::string> warnings;
};

// Throws Error(config) with a file:section.key diagnostic on any problem.
RunConfig parse_run_config(const ConfigFile& f);
RunConfig load_run_config(const std::string& path);

PotentialSpec build_potential(const PotentialConfig& pc, const std::string& base_dir = ".");

}  // namespace halfline
