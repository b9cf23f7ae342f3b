#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "predprey/errors.hpp"
#include "predprey/reaction.hpp"
#include "predprey/solver.hpp"

namespace predprey {

namespace detail {

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace detail

// Spatial profile of one coefficient or initial condition. Families are kept
// deliberately small so configs stay auditable:
//   constant c        -> c
//   affine c0 c1      -> c0 + c1 x
//   cosine c0 amp k   -> c0 + amp cos(k pi x)
struct FieldSpec {
  enum class Family { Constant, Affine, Cosine };
  Family family = Family::Constant;
  double c0 = 0.0;
  double c1 = 0.0;
  int mode = 0;

  static FieldSpec constant(double value) { return {Family::Constant, value, 0.0, 0}; }
  static FieldSpec affine(double c0, double c1) { return {Family::Affine, c0, c1, 0}; }
  static FieldSpec cosine(double c0, double amp, int k) { return {Family::Cosine, c0, amp, k}; }

  double operator()(double x) const {
    switch (family) {
      case Family::Constant: return c0;
      case Family::Affine: return c0 + c1 * x;
      default: return c0 + c1 * std::cos(mode * std::numbers::pi * x);
    }
  }

  ScalarField on(const Grid& grid) const {
    ScalarField f(grid.size);
    for (int j = 0; j < grid.size; ++j) f[j] = (*this)(grid.points[j]);
    return f;
  }

  std::string to_string() const {
    switch (family) {
      case Family::Constant: return "constant " + detail::format_double(c0);
      case Family::Affine:
        return "affine " + detail::format_double(c0) + " " + detail::format_double(c1);
      default:
        return "cosine " + detail::format_double(c0) + " " +
               detail::format_double(c1) + " " + std::to_string(mode);
    }
  }

  bool operator==(const FieldSpec&) const = default;
};

// Noise eigenvalue family per species:
//   none              -> no noise
//   single s2         -> lambda = (s2, 0, ...), the spatially flat mode
//   geometric s2 q n  -> lambda_k = s2 q^k for k = 0..n-1
struct NoiseFamilySpec {
  enum class Family { None, Single, Geometric };
  Family family = Family::None;
  double sigma2 = 0.0;
  double ratio = 0.5;
  int modes = 1;

  static NoiseFamilySpec none() { return {}; }
  static NoiseFamilySpec single(double s2) { return {Family::Single, s2, 0.5, 1}; }
  static NoiseFamilySpec geometric(double s2, double q, int n) {
    return {Family::Geometric, s2, q, n};
  }

  std::vector<double> eigenvalues() const {
    switch (family) {
      case Family::None: return {};
      case Family::Single: return {sigma2};
      default: {
        std::vector<double> lam(modes);
        double l = sigma2;
        for (int k = 0; k < modes; ++k, l *= ratio) lam[k] = l;
        return lam;
      }
    }
  }

  std::string to_string() const {
    switch (family) {
      case Family::None: return "none";
      case Family::Single: return "single " + detail::format_double(sigma2);
      default:
        return "geometric " + detail::format_double(sigma2) + " " +
               detail::format_double(ratio) + " " + std::to_string(modes);
    }
  }

  bool operator==(const NoiseFamilySpec&) const = default;
};

struct ExperimentConfig {
  FieldSpec a1, b1, c1, a2, b2, c2, m1, m2, m3;
  double d1 = 0.1, d2 = 0.1;
  NoiseFamilySpec noise1, noise2;
  FieldSpec u0, v0;
  int grid_size = 64;
  double dt = 1e-3;
  double horizon = 50.0;
  int record_stride = 100;
  double truncation_radius = std::numeric_limits<double>::infinity();
  PositivityPolicy positivity = PositivityPolicy::Clip;
  double reject_tolerance = 1e-8;
  int trajectories = 200;
  std::uint64_t seed = 1;
  std::string output_path = "ensemble.csv";

  bool operator==(const ExperimentConfig&) const = default;

  Grid make_grid() const { return build_grid(grid_size); }

  CoefficientSet make_coefficients(const Grid& grid) const {
    CoefficientSet co;
    co.a1 = a1.on(grid);
    co.b1 = b1.on(grid);
    co.c1 = c1.on(grid);
    co.a2 = a2.on(grid);
    co.b2 = b2.on(grid);
    co.c2 = c2.on(grid);
    co.m1 = m1.on(grid);
    co.m2 = m2.on(grid);
    co.m3 = m3.on(grid);
    co.d1 = d1;
    co.d2 = d2;
    return co;
  }

  NoiseSpec make_noise_spec() const {
    return {noise1.eigenvalues(), noise2.eigenvalues()};
  }

  SolverConfig make_solver_config() const {
    SolverConfig cfg;
    cfg.dt = dt;
    cfg.horizon = horizon;
    cfg.record_stride = record_stride;
    cfg.truncation_radius = truncation_radius;
    cfg.positivity = positivity;
    cfg.reject_tolerance = reject_tolerance;
    cfg.grid_size = grid_size;
    cfg.noise = make_noise_spec();
    return cfg;
  }
};

namespace detail {

inline std::vector<std::string> split_tokens(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> tok;
  std::string t;
  while (in >> t) tok.push_back(t);
  return tok;
}

inline double parse_number(const std::string& s, int line) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  std::size_t pos = 0;
  double x;
  try {
    x = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw ConfigError(line, "not a number: '" + s + "'");
  }
  if (pos != s.size()) throw ConfigError(line, "not a number: '" + s + "'");
  return x;
}

inline int parse_int(const std::string& s, int line) {
  std::size_t pos = 0;
  long x;
  try {
    x = std::stol(s, &pos);
  } catch (const std::exception&) {
    throw ConfigError(line, "not an integer: '" + s + "'");
  }
  if (pos != s.size()) throw ConfigError(line, "not an integer: '" + s + "'");
  return static_cast<int>(x);
}

inline FieldSpec parse_field_spec(const std::string& value, int line) {
  const std::vector<std::string> tok = split_tokens(value);
  if (tok.empty()) throw ConfigError(line, "empty field value");
  if (tok.size() == 1) return FieldSpec::constant(parse_number(tok[0], line));
  if (tok[0] == "constant" && tok.size() == 2)
    return FieldSpec::constant(parse_number(tok[1], line));
  if (tok[0] == "affine" && tok.size() == 3)
    return FieldSpec::affine(parse_number(tok[1], line), parse_number(tok[2], line));
  if (tok[0] == "cosine" && tok.size() == 4)
    return FieldSpec::cosine(parse_number(tok[1], line), parse_number(tok[2], line),
                             parse_int(tok[3], line));
  throw ConfigError(line, "bad field spec '" + value +
                              "' (expected: constant c | affine c0 c1 | cosine c0 amp k)");
}

inline NoiseFamilySpec parse_noise_spec(const std::string& value, int line) {
  const std::vector<std::string> tok = split_tokens(value);
  if (tok.empty()) throw ConfigError(line, "empty noise value");
  if (tok[0] == "none" && tok.size() == 1) return NoiseFamilySpec::none();
  if (tok[0] == "single" && tok.size() == 2) {
    const double s2 = parse_number(tok[1], line);
    if (s2 < 0.0) throw ConfigError(line, "noise intensity must be >= 0");
    return NoiseFamilySpec::single(s2);
  }
  if (tok[0] == "geometric" && tok.size() == 4) {
    const double s2 = parse_number(tok[1], line);
    const double q = parse_number(tok[2], line);
    const int n = parse_int(tok[3], line);
    if (s2 < 0.0) throw ConfigError(line, "noise intensity must be >= 0");
    if (!(q > 0.0 && q < 1.0)) throw ConfigError(line, "ratio must lie in (0,1)");
    if (n < 1) throw ConfigError(line, "mode count must be >= 1");
    return NoiseFamilySpec::geometric(s2, q, n);
  }
  throw ConfigError(line, "bad noise spec '" + value +
                              "' (expected: none | single s2 | geometric s2 q n)");
}

}  // namespace detail

inline ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::map<std::string, bool> seen;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;

  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);

    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(line_no, "unterminated section header");
      section = line.substr(1, line.size() - 2);
      if (section != "model" && section != "noise" && section != "init" &&
          section != "solver" && section != "ensemble" && section != "output")
        throw ConfigError(line_no, "unknown section [" + section + "]");
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(line_no, "expected key = value");
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    auto trim = [](std::string& s) {
      const auto a = s.find_first_not_of(" \t");
      const auto b = s.find_last_not_of(" \t");
      s = a == std::string::npos ? "" : s.substr(a, b - a + 1);
    };
    trim(key);
    trim(value);
    if (key.empty()) throw ConfigError(line_no, "missing key");
    if (value.empty()) throw ConfigError(line_no, "missing value for '" + key + "'");
    seen[section + "." + key] = true;

    if (section == "model") {
      if (key == "a1") cfg.a1 = detail::parse_field_spec(value, line_no);
      else if (key == "b1") cfg.b1 = detail::parse_field_spec(value, line_no);
      else if (key == "c1") cfg.c1 = detail::parse_field_spec(value, line_no);
      else if (key == "a2") cfg.a2 = detail::parse_field_spec(value, line_no);
      else if (key == "b2") cfg.b2 = detail::parse_field_spec(value, line_no);
      else if (key == "c2") cfg.c2 = detail::parse_field_spec(value, line_no);
      else if (key == "m1") cfg.m1 = detail::parse_field_spec(value, line_no);
      else if (key == "m2") cfg.m2 = detail::parse_field_spec(value, line_no);
      else if (key == "m3") cfg.m3 = detail::parse_field_spec(value, line_no);
      else if (key == "d1") cfg.d1 = detail::parse_number(value, line_no);
      else if (key == "d2") cfg.d2 = detail::parse_number(value, line_no);
      else throw ConfigError(line_no, "unknown key '" + key + "' in [model]");
    } else if (section == "noise") {
      if (key == "family1") cfg.noise1 = detail::parse_noise_spec(value, line_no);
      else if (key == "family2") cfg.noise2 = detail::parse_noise_spec(value, line_no);
      else throw ConfigError(line_no, "unknown key '" + key + "' in [noise]");
    } else if (section == "init") {
      if (key == "u0") cfg.u0 = detail::parse_field_spec(value, line_no);
      else if (key == "v0") cfg.v0 = detail::parse_field_spec(value, line_no);
      else throw ConfigError(line_no, "unknown key '" + key + "' in [init]");
    } else if (section == "solver") {
      if (key == "M") cfg.grid_size = detail::parse_int(value, line_no);
      else if (key == "dt") cfg.dt = detail::parse_number(value, line_no);
      else if (key == "T") cfg.horizon = detail::parse_number(value, line_no);
      else if (key == "record_stride") cfg.record_stride = detail::parse_int(value, line_no);
      else if (key == "truncation_radius")
        cfg.truncation_radius = detail::parse_number(value, line_no);
      else if (key == "positivity") {
        if (value == "clip") cfg.positivity = PositivityPolicy::Clip;
        else if (value == "reject") cfg.positivity = PositivityPolicy::Reject;
        else throw ConfigError(line_no, "positivity must be clip or reject");
      } else if (key == "reject_tolerance")
        cfg.reject_tolerance = detail::parse_number(value, line_no);
      else throw ConfigError(line_no, "unknown key '" + key + "' in [solver]");
    } else if (section == "ensemble") {
      if (key == "trajectories") cfg.trajectories = detail::parse_int(value, line_no);
      else if (key == "seed") {
        try {
          std::size_t pos = 0;
          cfg.seed = std::stoull(value, &pos);
          if (pos != value.size()) throw std::invalid_argument(value);
        } catch (const std::exception&) {
          throw ConfigError(line_no, "not a seed: '" + value + "'");
        }
      } else throw ConfigError(line_no, "unknown key '" + key + "' in [ensemble]");
    } else if (section == "output") {
      if (key == "path") cfg.output_path = value;
      else throw ConfigError(line_no, "unknown key '" + key + "' in [output]");
    } else {
      throw ConfigError(line_no, "key '" + key + "' outside any section");
    }
  }

  for (const char* req :
       {"model.a1", "model.b1", "model.c1", "model.a2", "model.b2", "model.c2",
        "model.m1", "model.m2", "model.m3", "model.d1", "model.d2", "init.u0",
        "init.v0", "solver.M", "solver.dt", "solver.T"}) {
    if (!seen.count(req))
      throw ConfigError(std::string("missing required key '") + req + "'");
  }

  // Full validation against the module invariants, reported as config errors.
  try {
    const Grid grid = cfg.make_grid();
    cfg.make_coefficients(grid).validate(grid);
    cfg.make_solver_config().validate();
    const ScalarField u0 = cfg.u0.on(grid);
    const ScalarField v0 = cfg.v0.on(grid);
    for (int j = 0; j < grid.size; ++j)
      if (!(u0[j] >= 0.0) || !(v0[j] >= 0.0))
        throw std::invalid_argument("initial data must be nonnegative");
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid configuration: ") + e.what());
  }
  if (cfg.trajectories < 1) throw ConfigError("trajectories must be >= 1");
  return cfg;
}

inline std::string serialize_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "[model]\n";
  out << "a1 = " << cfg.a1.to_string() << "\n";
  out << "b1 = " << cfg.b1.to_string() << "\n";
  out << "c1 = " << cfg.c1.to_string() << "\n";
  out << "a2 = " << cfg.a2.to_string() << "\n";
  out << "b2 = " << cfg.b2.to_string() << "\n";
  out << "c2 = " << cfg.c2.to_string() << "\n";
  out << "m1 = " << cfg.m1.to_string() << "\n";
  out << "m2 = " << cfg.m2.to_string() << "\n";
  out << "m3 = " << cfg.m3.to_string() << "\n";
  out << "d1 = " << detail::format_double(cfg.d1) << "\n";
  out << "d2 = " << detail::format_double(cfg.d2) << "\n";
  out << "[noise]\n";
  out << "family1 = " << cfg.noise1.to_string() << "\n";
  out << "family2 = " << cfg.noise2.to_string() << "\n";
  out << "[init]\n";
  out << "u0 = " << cfg.u0.to_string() << "\n";
  out << "v0 = " << cfg.v0.to_string() << "\n";
  out << "[solver]\n";
  out << "M = " << cfg.grid_size << "\n";
  out << "dt = " << detail::format_double(cfg.dt) << "\n";
  out << "T = " << detail::format_double(cfg.horizon) << "\n";
  out << "record_stride = " << cfg.record_stride << "\n";
  out << "truncation_radius = " << detail::format_double(cfg.truncation_radius)
      << "\n";
  out << "positivity = "
      << (cfg.positivity == PositivityPolicy::Clip ? "clip" : "reject") << "\n";
  out << "reject_tolerance = " << detail::format_double(cfg.reject_tolerance)
      << "\n";
  out << "[ensemble]\n";
  out << "trajectories = " << cfg.trajectories << "\n";
  out << "seed = " << cfg.seed << "\n";
  out << "[output]\n";
  out << "path = " << cfg.output_path << "\n";
  return out.str();
}

}  // namespace predprey
