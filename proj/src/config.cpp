#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "errors.hpp"
#include "spectral.hpp"

namespace halfline {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string strip_comment(const std::string& line) {
  const auto p = line.find_first_of("#;");
  return p == std::string::npos ? line : line.substr(0, p);
}

int bracket_balance(const std::string& s) {
  int b = 0;
  for (char c : s) b += (c == '[') - (c == ']');
  return b;
}

double parse_number(const std::string& tok) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    throw Error(ErrorKind::config, "not a number: '" + tok + "'");
  }
  if (used != tok.size()) throw Error(ErrorKind::config, "not a number: '" + tok + "'");
  return v;
}

}  // namespace

double parse_real(const std::string& in) {
  std::string s = lower(trim(in));
  s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); }), s.end());
  if (s.empty()) throw Error(ErrorKind::config, "empty number");
  const auto p = s.find("pi");
  if (p == std::string::npos) return parse_number(s);
  // [coef[*]]pi[/den]
  std::string coef = s.substr(0, p), rest = s.substr(p + 2);
  if (!coef.empty() && coef.back() == '*') coef.pop_back();
  double c = 1.0;
  if (coef == "-") c = -1.0;
  else if (coef == "+") c = 1.0;
  else if (!coef.empty()) c = parse_number(coef);
  double den = 1.0;
  if (!rest.empty()) {
    if (rest[0] != '/') throw Error(ErrorKind::config, "cannot read '" + in + "'");
    den = parse_number(rest.substr(1));
    if (den == 0.0) throw Error(ErrorKind::config, "division by zero in '" + in + "'");
  }
  return c * std::numbers::pi / den;
}

cplx parse_complex(const std::string& in) {
  std::string s = lower(trim(in));
  s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); }), s.end());
  if (s.empty()) throw Error(ErrorKind::config, "empty complex literal");
  if (s.back() != 'i' || s.find("pi") != std::string::npos) return parse_real(s);
  s.pop_back();
  // split at the last sign that is not an exponent sign or the leading sign
  std::size_t split = std::string::npos;
  for (std::size_t q = s.size(); q-- > 1;) {
    if ((s[q] == '+' || s[q] == '-') && s[q - 1] != 'e') {
      split = q;
      break;
    }
  }
  auto imag_part = [&](const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return parse_number(t);
  };
  if (split == std::string::npos) return cplx(0.0, imag_part(s));
  return cplx(parse_number(s.substr(0, split)), imag_part(s.substr(split)));
}

std::vector<std::string> split_list(const std::string& in) {
  std::string s = trim(in);
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') throw Error(ErrorKind::config, "expected a [..] list: '" + in + "'");
  s = s.substr(1, s.size() - 2);
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '[') ++depth;
    if (c == ']') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (depth != 0) throw Error(ErrorKind::config, "unbalanced brackets in '" + in + "'");
  if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
  for (const auto& e : out)
    if (e.empty()) throw Error(ErrorKind::config, "empty list entry in '" + in + "'");
  return out;
}

ComplexMatrix parse_matrix(const std::string& s) {
  const auto t = trim(s);
  if (t.empty() || t.front() != '[') return ComplexMatrix{{parse_complex(t)}};
  const auto rows = split_list(t);
  const std::size_t n = rows.size();
  if (n == 0) throw Error(ErrorKind::config, "empty matrix");
  ComplexMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto cols = split_list(rows[i]);
    if (cols.size() != n) throw Error(ErrorKind::config, "matrix must be square: '" + s + "'");
    for (std::size_t j = 0; j < n; ++j) m(i, j) = parse_complex(cols[j]);
  }
  return m;
}

ConfigFile ConfigFile::parse(const std::string& text, const std::string& origin) {
  ConfigFile f;
  f.origin_ = origin;
  std::istringstream in(text);
  std::string line, section = "";
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string body = trim(strip_comment(line));
    if (body.empty()) continue;
    if (body.front() == '[' && body.find('=') == std::string::npos) {
      if (body.back() != ']') throw Error(ErrorKind::config, origin + ":" + std::to_string(lineno) + ": malformed section header");
      section = lower(trim(body.substr(1, body.size() - 2)));
      if (section.empty()) throw Error(ErrorKind::config, origin + ":" + std::to_string(lineno) + ": empty section name");
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::config, origin + ":" + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = lower(trim(body.substr(0, eq)));
    std::string value = trim(body.substr(eq + 1));
    if (key.empty()) throw Error(ErrorKind::config, origin + ":" + std::to_string(lineno) + ": empty key");
    const std::size_t start = lineno;
    while (bracket_balance(value) > 0 && std::getline(in, line)) {
      ++lineno;
      value += " " + trim(strip_comment(line));
    }
    if (bracket_balance(value) != 0) {
      throw Error(ErrorKind::config, origin + ":" + std::to_string(start) + ": unbalanced brackets for '" + key + "'");
    }
    if (section.empty()) throw Error(ErrorKind::config, origin + ":" + std::to_string(lineno) + ": key outside any section");
    auto& sec = f.data_[section];
    if (sec.count(key)) throw Error(ErrorKind::config, origin + ":" + std::to_string(start) + ": duplicate key '" + key + "'");
    sec[key] = value;
  }
  return f;
}

ConfigFile ConfigFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::config, "cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

std::string ConfigFile::where(const std::string& section, const std::string& key) const {
  return origin_ + ": [" + section + "] " + key;
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  auto it = data_.find(section);
  return it != data_.end() && it->second.count(key);
}

std::string ConfigFile::raw(const std::string& section, const std::string& key) const {
  auto it = data_.find(section);
  if (it == data_.end() || !it->second.count(key)) throw Error(ErrorKind::config, where(section, key) + ": missing");
  used_[section + "." + key] = true;
  return it->second.at(key);
}

std::string ConfigFile::get_string(const std::string& section, const std::string& key, const std::string& fallback) const {
  return has(section, key) ? lower(raw(section, key)) : fallback;
}

double ConfigFile::get_double(const std::string& section, const std::string& key, double fallback) const {
  if (!has(section, key)) return fallback;
  try {
    const double v = parse_real(raw(section, key));
    if (!std::isfinite(v)) throw Error(ErrorKind::config, "not finite");
    return v;
  } catch (const Error& e) {
    throw Error(ErrorKind::config, where(section, key) + ": " + e.what());
  }
}

std::size_t ConfigFile::get_size(const std::string& section, const std::string& key, std::size_t fallback) const {
  if (!has(section, key)) return fallback;
  const double v = get_double(section, key, 0.0);
  if (v < 0 || v != std::floor(v)) throw Error(ErrorKind::config, where(section, key) + ": expected a non-negative integer");
  return static_cast<std::size_t>(v);
}

std::vector<double> ConfigFile::get_doubles(const std::string& section, const std::string& key) const {
  try {
    std::vector<double> out;
    for (const auto& e : split_list(raw(section, key))) out.push_back(parse_real(e));
    return out;
  } catch (const Error& e) {
    throw Error(ErrorKind::config, where(section, key) + ": " + e.what());
  }
}

std::vector<cplx> ConfigFile::get_complexes(const std::string& section, const std::string& key) const {
  try {
    std::vector<cplx> out;
    for (const auto& e : split_list(raw(section, key))) out.push_back(parse_complex(e));
    return out;
  } catch (const Error& e) {
    throw Error(ErrorKind::config, where(section, key) + ": " + e.what());
  }
}

ComplexMatrix ConfigFile::get_matrix(const std::string& section, const std::string& key) const {
  try {
    return parse_matrix(raw(section, key));
  } catch (const Error& e) {
    throw Error(ErrorKind::config, where(section, key) + ": " + e.what());
  }
}

std::vector<std::string> ConfigFile::unused() const {
  std::vector<std::string> out;
  for (const auto& [sec, kv] : data_)
    for (const auto& [k, v] : kv)
      if (!used_.count(sec + "." + k)) out.push_back(sec + "." + k);
  return out;
}

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw Error(ErrorKind::config, msg);
}

}  // namespace

RunConfig parse_run_config(const ConfigFile& f) {
  RunConfig rc;
  auto& p = rc.potential;
  p.kind = f.get_string("potential", "kind", "zero");
  p.dim = f.get_size("potential", "dim", 1);
  require(p.dim >= 1 && p.dim <= 8, "[potential] dim must be between 1 and 8");
  p.c = f.get_double("potential", "c", 0.0);
  p.a = f.get_double("potential", "a", 1.0);
  p.mu = f.get_double("potential", "mu", 1.0);
  p.width = f.get_double("potential", "width", 1.0);
  p.m0 = f.has("potential", "m0") ? f.get_matrix("potential", "m0") : ComplexMatrix::identity(p.dim);
  require(p.m0.dim() == p.dim, "[potential] m0 must be dim x dim");
  p.file = f.has("potential", "file") ? f.raw("potential", "file") : "";
  p.x_max = f.get_double("potential", "x_max", 40.0);
  p.h = f.get_double("potential", "h", 0.005);
  require(p.x_max > 0 && p.h > 0, "[potential] x_max and h must be positive");
  const std::vector<std::string> kinds{"zero", "square_well", "exponential", "gaussian", "table"};
  require(std::find(kinds.begin(), kinds.end(), p.kind) != kinds.end(), "[potential] unknown kind '" + p.kind + "'");
  require(p.kind != "table" || !p.file.empty(), "[potential] kind = table needs file");

  // boundary
  const bool has_theta = f.has("boundary", "theta");
  const bool has_ab = f.has("boundary", "a") || f.has("boundary", "b");
  const std::string named = f.get_string("boundary", "type", "");
  require(int(has_theta) + int(has_ab) + int(!named.empty()) <= 1,
          "[boundary] give only one of theta = [..], A/B matrices, or type = dirichlet|neumann");
  try {
    if (has_theta) {
      const auto th = f.get_doubles("boundary", "theta");
      require(th.size() == p.dim, "[boundary] theta needs dim entries");
      rc.boundary = from_angles(th);
      rc.boundary_text = "theta";
    } else if (has_ab) {
      const auto a = f.get_matrix("boundary", "a"), b = f.get_matrix("boundary", "b");
      require(a.dim() == p.dim && b.dim() == p.dim, "[boundary] A and B must be dim x dim");
      rc.boundary = validate(a, b);
      rc.boundary_text = "matrices";
    } else if (named.empty() || named == "dirichlet") {
      rc.boundary = dirichlet(p.dim);
      rc.boundary_text = "dirichlet";
    } else if (named == "neumann") {
      rc.boundary = neumann(p.dim);
      rc.boundary_text = "neumann";
    } else {
      require(false, "[boundary] unknown type '" + named + "'");
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::config) throw;
    throw Error(ErrorKind::config, std::string("[boundary] ") + e.what());
  }

  // nonlinearity
  const std::string form = f.get_string("nonlinearity", "form", "none");
  const double alpha = f.get_double("nonlinearity", "alpha", 3.0);
  try {
    if (form == "scalar_power") {
      rc.nonlinearity = scalar_power(f.get_double("nonlinearity", "lambda", 1.0), alpha);
    } else if (form == "diagonal_power") {
      auto l = f.get_doubles("nonlinearity", "lambdas");
      require(l.size() == p.dim, "[nonlinearity] lambdas needs dim entries");
      rc.nonlinearity = diagonal_power(std::move(l), alpha);
    } else {
      require(form == "none", "[nonlinearity] unknown form '" + form + "'");
      rc.nonlinearity = NonlinearitySpec{};
      rc.nonlinearity.alpha = alpha;
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::config) throw;
    throw Error(ErrorKind::config, std::string("[nonlinearity] ") + e.what());
  }

  auto& in = rc.initial;
  in.kind = f.get_string("initial", "kind", "boundary_packet");
  require(in.kind == "boundary_packet" || in.kind == "moving_packet", "[initial] unknown kind '" + in.kind + "'");
  in.amplitude = f.get_double("initial", "amplitude", 0.05);
  in.width = f.get_double("initial", "width", 1.5);
  in.centre = f.get_double("initial", "centre", 10.0);
  in.momentum = f.get_double("initial", "momentum", 0.0);
  if (f.has("initial", "direction")) {
    in.direction = f.get_complexes("initial", "direction");
    require(in.direction.size() == p.dim, "[initial] direction needs dim entries");
  }
  require(in.width > 0, "[initial] width must be positive");

  auto& g = rc.grids;
  g.length = f.get_double("grids", "x_max", 40.0);
  g.h = f.get_double("grids", "h", 0.05);
  g.k_min = f.get_double("grids", "k_min", 1e-3);
  g.k_max = f.get_double("grids", "k_max", 4.0);
  g.dk = f.get_double("grids", "dk", 0.005);
  g.jost_h = f.get_double("grids", "jost_h", p.h);
  require(g.length > 0 && g.h > 0 && g.k_min > 0 && g.k_max > g.k_min && g.dk > 0 && g.jost_h > 0,
          "[grids] need x_max, h, dk, jost_h > 0 and 0 < k_min < k_max");
  require(2 * g.k_max * g.h < 0.5, "[grids] resolution guard violated: 2 k_max h must be < 0.5");
  require(2 * g.k_max * g.jost_h < 0.5, "[grids] resolution guard violated: 2 k_max jost_h must be < 0.5");

  auto& ev = rc.evolution;
  ev.dt = f.get_double("evolution", "dt", 0.01);
  ev.t_end = f.get_double("evolution", "t_end", 10.0);
  ev.sample_every = f.get_double("evolution", "sample_every", 0.5);
  ev.a = f.get_double("evolution", "a", 2.0);
  require(ev.dt > 0, "[evolution] dt must be positive");
  require(ev.t_end > ev.a && ev.a > 0, "[evolution] need t_end > a > 0");
  require(ev.sample_every > 0, "[evolution] sample_every must be positive");

  auto& vf = rc.verify;
  vf.fit_hi = f.get_double("verify", "fit_hi", std::min(100.0, ev.t_end));
  vf.fit_lo = f.get_double("verify", "fit_lo", std::min(5.0, 0.5 * vf.fit_hi));
  vf.min_samples = f.get_size("verify", "min_samples", 20);
  vf.control_scale = f.get_double("verify", "control_scale", 1.1);
  require(vf.fit_hi > vf.fit_lo && vf.fit_lo > 0, "[verify] need 0 < fit_lo < fit_hi");

  auto& ln = rc.line;
  ln.lambda = f.has("line", "lambda") ? f.get_matrix("line", "lambda") : ComplexMatrix(1);
  ln.q = f.get_string("line", "q", "zero");
  require(ln.q == "zero" || ln.q == "gaussian", "[line] q must be zero or gaussian");
  ln.q_c = f.get_double("line", "q_c", 0.0);
  ln.q_width = f.get_double("line", "q_width", 1.0);
  ln.parity = f.get_string("line", "parity", "even");
  require(ln.parity == "even" || ln.parity == "odd" || ln.parity == "none", "[line] parity must be even, odd or none");
  ln.t = f.get_double("line", "t", 1.0);
  ln.amplitude = f.get_double("line", "amplitude", 1.0);
  require(ln.t >= 0, "[line] t must be non-negative");
  ln.centre = f.get_double("line", "centre", 10.0);
  ln.width = f.get_double("line", "width", 1.0);
  ln.momentum = f.get_double("line", "momentum", -1.0);

  rc.output.x_stride = std::max<std::size_t>(1, f.get_size("output", "x_stride", 10));
  rc.output.t_stride = std::max<std::size_t>(1, f.get_size("output", "t_stride", 1));

  for (const auto& k : f.unused()) rc.warnings.push_back("unused config key " + k);
  return rc;
}

RunConfig load_run_config(const std::string& path) {
  RunConfig rc = parse_run_config(ConfigFile::load(path));
  if (rc.potential.kind == "table" && std::filesystem::path(rc.potential.file).is_relative()) {
    rc.potential.file = (std::filesystem::path(path).parent_path() / rc.potential.file).string();
  }
  return rc;
}

PotentialSpec build_potential(const PotentialConfig& pc, const std::string& base_dir) {
  const XGrid g = default_potential_grid(pc.x_max, pc.h);
  try {
    if (pc.kind == "zero") return zero_potential(pc.dim, g);
    if (pc.kind == "square_well") return square_well(pc.c, pc.a, pc.m0, g);
    if (pc.kind == "exponential") return exponential_potential(pc.c, pc.mu, pc.m0, g);
    if (pc.kind == "gaussian") return gaussian_potential(pc.c, pc.width, pc.m0, g);
    std::filesystem::path file(pc.file);
    if (file.is_relative()) file = std::filesystem::path(base_dir) / file;
    return potential_from_csv(file.string(), pc.dim, g);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::io || e.kind() == ErrorKind::hermiticity_violation || e.kind() == ErrorKind::invalid_argument) {
      throw Error(ErrorKind::config, std::string("[potential] ") + e.what());
    }
    throw;
  }
}

}  // namespace halfline
