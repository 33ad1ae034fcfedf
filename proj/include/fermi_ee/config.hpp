#pragma once

// Run configuration for the fermi-ee command-line tool: YAML in, JSON echo out.
// Requires yaml-cpp and nlohmann/json.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>
#include <yaml-cpp/yaml.h>

#include "fermi_ee/dispersion.hpp"
#include "fermi_ee/domain.hpp"
#include "fermi_ee/errors.hpp"
#include "fermi_ee/thermodynamics.hpp"

namespace fermi_ee::config {

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"entropy-density", "eta",          "oracle",          "low-t-report",
                                                 "high-t-report",   "crossover-report", "verify"};
  return names;
}

struct DispersionSpec {
  std::string kind = "ideal-gas";  // ideal-gas | power-law | tabulated | anisotropic-ideal-gas
  int dimension = 1;
  double hbar = 1.0;
  double mass = 1.0;
  double coefficient = 1.0;
  double exponent = 2.0;
  std::vector<double> momenta;
  std::vector<double> energies;
  std::vector<double> masses;

  bool operator==(const DispersionSpec&) const = default;

  Dispersion build() const {
    if (kind == "ideal-gas") return Dispersion(IdealGas{mass}, dimension, hbar);
    if (kind == "power-law") return Dispersion(IsotropicPowerLaw{coefficient, exponent}, dimension, hbar);
    if (kind == "tabulated") return Dispersion(TabulatedIsotropic{momenta, energies}, dimension, hbar);
    if (kind == "anisotropic-ideal-gas") return Dispersion(AnisotropicIdealGas{masses}, dimension, hbar);
    throw ConfigError("dispersion.kind: unknown kind '" + kind + "'");
  }
};

struct ThermoSpec {
  std::string constraint = "fixed-mu";  // fixed-mu | fixed-rho
  double mu = 1.0;
  double rho = 1.0;

  bool operator==(const ThermoSpec&) const = default;

  bool fixed_density() const { return constraint == "fixed-rho"; }
  ThermoConstraint build() const {
    if (fixed_density()) return ParticleDensity{rho};
    return ChemicalPotential{mu};
  }
};

struct DomainSpec {
  std::string shape = "intervals";  // intervals | ball | box
  std::vector<std::pair<double, double>> intervals = {{0.0, 1.0}};
  double radius = 1.0;
  std::vector<double> edges;

  bool operator==(const DomainSpec&) const = default;

  Domain build(int d) const {
    if (shape == "intervals") return Domain(Intervals{intervals}, d);
    if (shape == "ball") return Domain(Ball{radius}, d);
    if (shape == "box") return Domain(Box{edges}, d);
    throw ConfigError("domain.shape: unknown shape '" + shape + "'");
  }
};

struct RunConfig {
  DispersionSpec dispersion;
  ThermoSpec thermo;
  DomainSpec domain;
  std::vector<double> alphas = {1.0};
  std::vector<double> temperatures;
  std::vector<double> lengths;
  double tolerance = 1e-7;
  double nodes_per_length = 0.0;  // 0: automatic
  std::string output_dir = ".";
  std::uint64_t seed = 0;
  std::vector<int> criteria = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};

  bool operator==(const RunConfig&) const = default;
};

namespace detail {

inline void check_keys(const YAML::Node& node, const std::string& where, const std::set<std::string>& allowed) {
  if (!node.IsMap()) throw ConfigError(where + ": expected a table");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

template <class T>
T scalar(const YAML::Node& node, const std::string& where) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(where + ": cannot read value '" + (node.IsScalar() ? node.Scalar() : std::string("<non-scalar>")) +
                      "'");
  }
}

inline std::vector<double> number_list(const YAML::Node& node, const std::string& where) {
  if (node.IsScalar()) return {scalar<double>(node, where)};
  if (!node.IsSequence()) throw ConfigError(where + ": expected a number or a list of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < node.size(); ++i) out.push_back(scalar<double>(node[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

/// Either an explicit list or {min, max, points, spacing: log | linear}.
inline std::vector<double> grid(const YAML::Node& node, const std::string& where) {
  if (!node.IsMap()) return number_list(node, where);
  check_keys(node, where, {"min", "max", "points", "spacing"});
  if (!node["min"] || !node["max"] || !node["points"]) throw ConfigError(where + ": grid needs min, max and points");
  const double lo = scalar<double>(node["min"], where + ".min");
  const double hi = scalar<double>(node["max"], where + ".max");
  const int n = scalar<int>(node["points"], where + ".points");
  const std::string spacing = node["spacing"] ? scalar<std::string>(node["spacing"], where + ".spacing") : "log";
  if (n < 1) throw ConfigError(where + ".points must be >= 1");
  if (spacing != "log" && spacing != "linear") throw ConfigError(where + ".spacing must be 'log' or 'linear'");
  if (spacing == "log" && !(lo > 0.0 && hi > 0.0)) throw ConfigError(where + ": log spacing needs positive bounds");
  std::vector<double> out;
  for (int i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
    out.push_back(spacing == "log" ? std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo))) : lo + t * (hi - lo));
  }
  return out;
}

}  // namespace detail

/// Parses a configuration document. Unknown keys are rejected so that typos
/// do not silently fall back to defaults.
inline RunConfig parse(const YAML::Node& root) {
  using namespace detail;
  RunConfig c;
  if (!root || root.IsNull()) return c;
  check_keys(root, "config",
             {"dispersion", "thermo", "domain", "alpha", "temperatures", "lengths", "tolerance", "oracle", "output",
              "seed", "verify"});

  if (const auto d = root["dispersion"]) {
    check_keys(d, "dispersion",
               {"kind", "dimension", "hbar", "mass", "coefficient", "exponent", "momenta", "energies", "masses"});
    auto& s = c.dispersion;
    if (d["kind"]) s.kind = scalar<std::string>(d["kind"], "dispersion.kind");
    if (d["dimension"]) s.dimension = scalar<int>(d["dimension"], "dispersion.dimension");
    if (d["hbar"]) s.hbar = scalar<double>(d["hbar"], "dispersion.hbar");
    if (d["mass"]) s.mass = scalar<double>(d["mass"], "dispersion.mass");
    if (d["coefficient"]) s.coefficient = scalar<double>(d["coefficient"], "dispersion.coefficient");
    if (d["exponent"]) s.exponent = scalar<double>(d["exponent"], "dispersion.exponent");
    if (d["momenta"]) s.momenta = number_list(d["momenta"], "dispersion.momenta");
    if (d["energies"]) s.energies = number_list(d["energies"], "dispersion.energies");
    if (d["masses"]) s.masses = number_list(d["masses"], "dispersion.masses");
  }
  if (const auto t = root["thermo"]) {
    check_keys(t, "thermo", {"constraint", "mu", "rho"});
    if (t["constraint"]) c.thermo.constraint = scalar<std::string>(t["constraint"], "thermo.constraint");
    if (t["mu"]) c.thermo.mu = scalar<double>(t["mu"], "thermo.mu");
    if (t["rho"]) c.thermo.rho = scalar<double>(t["rho"], "thermo.rho");
  }
  if (c.dispersion.dimension >= 2) c.domain.shape = "ball";
  if (const auto m = root["domain"]) {
    check_keys(m, "domain", {"shape", "intervals", "radius", "edges"});
    if (m["shape"]) c.domain.shape = scalar<std::string>(m["shape"], "domain.shape");
    if (m["intervals"]) {
      const auto iv = m["intervals"];
      if (!iv.IsSequence()) throw ConfigError("domain.intervals: expected a list of [a, b] pairs");
      c.domain.intervals.clear();
      for (std::size_t i = 0; i < iv.size(); ++i) {
        const auto ab = number_list(iv[i], "domain.intervals[" + std::to_string(i) + "]");
        if (ab.size() != 2) throw ConfigError("domain.intervals[" + std::to_string(i) + "]: expected [a, b]");
        c.domain.intervals.emplace_back(ab[0], ab[1]);
      }
    }
    if (m["radius"]) c.domain.radius = scalar<double>(m["radius"], "domain.radius");
    if (m["edges"]) c.domain.edges = number_list(m["edges"], "domain.edges");
  }
  if (root["alpha"]) c.alphas = number_list(root["alpha"], "alpha");
  if (root["temperatures"]) c.temperatures = grid(root["temperatures"], "temperatures");
  if (root["lengths"]) c.lengths = grid(root["lengths"], "lengths");
  if (root["tolerance"]) c.tolerance = scalar<double>(root["tolerance"], "tolerance");
  if (const auto o = root["oracle"]) {
    check_keys(o, "oracle", {"nodes_per_length"});
    if (o["nodes_per_length"]) c.nodes_per_length = scalar<double>(o["nodes_per_length"], "oracle.nodes_per_length");
  }
  if (const auto o = root["output"]) {
    check_keys(o, "output", {"dir"});
    if (o["dir"]) c.output_dir = scalar<std::string>(o["dir"], "output.dir");
  }
  if (root["seed"]) c.seed = scalar<std::uint64_t>(root["seed"], "seed");
  if (const auto v = root["verify"]) {
    check_keys(v, "verify", {"criteria"});
    if (v["criteria"]) {
      c.criteria.clear();
      for (double x : number_list(v["criteria"], "verify.criteria")) c.criteria.push_back(static_cast<int>(x));
    }
  }
  return c;
}

inline RunConfig load(const std::string& path) {
  YAML::Node root;
  try {
    root = YAML::LoadFile(path);
  } catch (const YAML::BadFile&) {
    throw ConfigError("cannot open config file '" + path + "'");
  } catch (const YAML::Exception& e) {
    throw ConfigError("config file '" + path + "': " + e.what());
  }
  return parse(root);
}

/// Full echo of a configuration. JSON is valid YAML, so parse() reads it back.
inline nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json d = {{"kind", c.dispersion.kind}, {"dimension", c.dispersion.dimension}, {"hbar", c.dispersion.hbar}};
  if (c.dispersion.kind == "ideal-gas") d["mass"] = c.dispersion.mass;
  if (c.dispersion.kind == "power-law") {
    d["coefficient"] = c.dispersion.coefficient;
    d["exponent"] = c.dispersion.exponent;
  }
  if (c.dispersion.kind == "tabulated") {
    d["momenta"] = c.dispersion.momenta;
    d["energies"] = c.dispersion.energies;
  }
  if (c.dispersion.kind == "anisotropic-ideal-gas") d["masses"] = c.dispersion.masses;

  nlohmann::json domain = {{"shape", c.domain.shape}};
  if (c.domain.shape == "intervals") {
    nlohmann::json iv = nlohmann::json::array();
    for (const auto& [a, b] : c.domain.intervals) iv.push_back({a, b});
    domain["intervals"] = iv;
  } else if (c.domain.shape == "ball") {
    domain["radius"] = c.domain.radius;
  } else {
    domain["edges"] = c.domain.edges;
  }

  nlohmann::json thermo = {{"constraint", c.thermo.constraint}};
  if (c.thermo.fixed_density()) {
    thermo["rho"] = c.thermo.rho;
  } else {
    thermo["mu"] = c.thermo.mu;
  }

  return {{"dispersion", d},
          {"thermo", thermo},
          {"domain", domain},
          {"alpha", c.alphas},
          {"temperatures", c.temperatures},
          {"lengths", c.lengths},
          {"tolerance", c.tolerance},
          {"oracle", {{"nodes_per_length", c.nodes_per_length}}},
          {"output", {{"dir", c.output_dir}}},
          {"seed", c.seed},
          {"verify", {{"criteria", c.criteria}}}};
}

/// Equality up to fields the echo does not carry (unused dispersion and
/// domain parameters).
inline bool equivalent(const RunConfig& a, const RunConfig& b) {
  return to_json(a) == to_json(b);
}

namespace detail {

inline void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

inline void require_positive_list(const std::vector<double>& v, const std::string& what, std::size_t min_size) {
  require(v.size() >= min_size, what + ": need at least " + std::to_string(min_size) + " value(s)");
  for (double x : v) require(x > 0.0 && std::isfinite(x), what + ": values must be positive and finite");
}

}  // namespace detail

/// Checks everything a command needs before any computation starts. Throws
/// ConfigError, or UnsupportedConfiguration for requests outside the scope
/// of the method (anisotropic dispersions where eta is needed, d > 1 oracle).
inline void validate(const RunConfig& c, const std::string& command) {
  using detail::require;
  require(std::find(command_names().begin(), command_names().end(), command) != command_names().end(),
          "unknown command '" + command + "'");
  require(c.tolerance > 0.0 && c.tolerance < 0.1, "tolerance must lie in (0, 0.1)");
  for (int id : c.criteria) require(id >= 1 && id <= 10, "verify.criteria: ids run from 1 to 10");
  if (command == "verify") return;

  const auto& ds = c.dispersion;
  require(ds.dimension >= 1 && ds.dimension <= 3, "dispersion.dimension must be 1, 2 or 3");
  require(c.thermo.constraint == "fixed-mu" || c.thermo.constraint == "fixed-rho",
          "thermo.constraint must be 'fixed-mu' or 'fixed-rho'");
  require(std::isfinite(c.thermo.mu), "thermo.mu must be finite");
  if (c.thermo.fixed_density()) require(c.thermo.rho > 0.0, "thermo.rho must be positive");
  detail::require_positive_list(c.alphas, "alpha", 1);

  Dispersion disp = [&] {
    try {
      return ds.build();
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError(std::string("dispersion: ") + e.what());
    }
  }();
  Domain dom = [&] {
    try {
      return c.domain.build(ds.dimension);
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError(std::string("domain: ") + e.what());
    }
  }();
  (void)dom;

  const bool needs_eta = command == "eta" || command == "low-t-report" || command == "high-t-report" ||
                         command == "crossover-report" || command == "oracle";
  if (needs_eta) disp.require_isotropic(command);

  if (command == "entropy-density" || command == "eta") {
    detail::require_positive_list(c.temperatures, "temperatures", 1);
  } else if (command == "low-t-report" || command == "high-t-report") {
    detail::require_positive_list(c.temperatures, "temperatures", 3);
  } else if (command == "oracle") {
    if (ds.dimension != 1) {
      throw UnsupportedConfiguration("spectral-oracle",
                                     "unsupported-configuration: the spectral oracle is implemented for d = 1 only");
    }
    detail::require_positive_list(c.temperatures, "temperatures", 1);
    for (double T : c.temperatures) require(T >= 0.01, "oracle: temperatures below 0.01 need prohibitive matrix sizes");
    detail::require_positive_list(c.lengths, "lengths", 4);
    for (std::size_t i = 1; i < c.lengths.size(); ++i) {
      require(c.lengths[i] > c.lengths[i - 1], "lengths must be strictly increasing");
    }
    require(c.nodes_per_length >= 0.0, "oracle.nodes_per_length must be >= 0");
  } else if (command == "crossover-report") {
    if (!c.thermo.fixed_density()) require(c.thermo.mu > 0.0, "crossover-report needs mu > 0 (a Fermi surface)");
  }
}

}  // namespace fermi_ee::config
