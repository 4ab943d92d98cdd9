#include "chb/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <vector>

#include "chb/errors.hpp"

namespace chb {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

double parse_double(const std::string& s, int line) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ParseError("malformed number '" + s + "'", line);
  }
}

int parse_int(const std::string& s, int line) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ParseError("malformed integer '" + s + "'", line);
  }
}

VoigtMatrix parse_voigt(const std::string& s, int line) {
  std::istringstream iss(s);
  std::vector<double> v;
  std::string tok;
  while (iss >> tok) v.push_back(parse_double(tok, line));
  if (v.size() != 6)
    throw ParseError("stiffness needs 6 upper-triangle entries "
                     "(11 12 13 22 23 33)", line);
  return VoigtMatrix{{{v[0], v[1], v[2]}, {v[1], v[3], v[4]}, {v[2], v[4], v[5]}}};
}

}  // namespace

ParsedConfig parse_config(const std::string& text) {
  ParsedConfig cfg;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string s = trim(raw);
    if (s.empty()) continue;
    const std::size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw ParseError("expected 'key = value'", line);
    const std::string key = trim(s.substr(0, eq));
    const std::string val = trim(s.substr(eq + 1));
    if (key.empty()) throw ParseError("empty key", line);
    if (val.empty()) throw ParseError("empty value for '" + key + "'", line);

    if (key == "gamma") cfg.params.gamma = parse_double(val, line);
    else if (key == "ell") cfg.params.ell = parse_double(val, line);
    else if (key == "mobility") cfg.params.mobility = parse_double(val, line);
    else if (key == "kappa") cfg.params.kappa = parse_double(val, line);
    else if (key == "xi") cfg.params.xi = parse_double(val, line);
    else if (key == "beta") cfg.params.beta_cut = parse_double(val, line);
    else if (key == "M_minus") cfg.params.M_minus = parse_double(val, line);
    else if (key == "M_plus") cfg.params.M_plus = parse_double(val, line);
    else if (key == "alpha_minus") cfg.params.alpha_minus = parse_double(val, line);
    else if (key == "alpha_plus") cfg.params.alpha_plus = parse_double(val, line);
    else if (key == "C_minus") cfg.params.C_minus = parse_voigt(val, line);
    else if (key == "C_plus") cfg.params.C_plus = parse_voigt(val, line);
    else if (key == "tau") cfg.solver.tau = parse_double(val, line);
    else if (key == "n") cfg.mesh_n = parse_int(val, line);
    else if (key == "n_steps") cfg.solver.n_steps = parse_int(val, line);
    else if (key == "tol") cfg.solver.tol = parse_double(val, line);
    else if (key == "max_iter") cfg.solver.max_iter = parse_int(val, line);
    else if (key == "newton_tol") cfg.solver.newton_tol = parse_double(val, line);
    else if (key == "newton_max") cfg.solver.newton_max = parse_int(val, line);
    else if (key == "R") cfg.R_const = parse_double(val, line);
    else if (key == "S_f") cfg.Sf_const = parse_double(val, line);
    else if (key == "f_x") cfg.f_x_const = parse_double(val, line);
    else if (key == "f_y") cfg.f_y_const = parse_double(val, line);
    else throw ParseError("unknown key '" + key + "'", line);
  }
  try {
    cfg.params.validate();
    cfg.solver.validate();
    if (cfg.mesh_n < 1)
      throw std::invalid_argument("n must be at least 1");
  } catch (const std::exception& e) {
    throw ParseError(e.what(), line);
  }
  return cfg;
}

ParsedConfig parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

SourceData make_sources(const Mesh& mesh, const ParsedConfig& cfg) {
  SourceData src = SourceData::zero(mesh);
  std::fill(src.R.begin(), src.R.end(), cfg.R_const);
  std::fill(src.S_f.begin(), src.S_f.end(), cfg.Sf_const);
  std::fill(src.f_x.begin(), src.f_x.end(), cfg.f_x_const);
  std::fill(src.f_y.begin(), src.f_y.end(), cfg.f_y_const);
  return src;
}

}  // namespace chb
