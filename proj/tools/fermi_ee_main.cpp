// fermi-ee: batch front end for the thermal entanglement library.

#include <CLI11.hpp>

#include <algorithm>
#include <condition_variable>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "fermi_ee/acceptance.hpp"
#include "fermi_ee/analysis.hpp"
#include "fermi_ee/boundary_coefficient.hpp"
#include "fermi_ee/config.hpp"
#include "fermi_ee/crossover.hpp"
#include "fermi_ee/spectral_oracle.hpp"
#include "fermi_ee/thermodynamics.hpp"

#ifndef FERMI_EE_VERSION
#define FERMI_EE_VERSION "0.0.0"
#endif

namespace {

using nlohmann::json;
using namespace fermi_ee;
using config::RunConfig;

constexpr int kExitOk = 0;
constexpr int kExitComputation = 1;
constexpr int kExitConfig = 2;

// A CSV cell keeps its text and, when numeric, the value for the JSON rows.
struct Cell {
  std::string text;
  json value;
};

Cell num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return {buf, std::isfinite(x) ? json(x) : json(nullptr)};
}
Cell num(std::optional<double> x) { return x ? num(*x) : Cell{"", nullptr}; }
Cell integer(long long x) { return {std::to_string(x), x}; }
Cell flag(bool b) { return {b ? "true" : "false", b}; }
Cell text(const std::string& s) {
  const bool quote = s.find_first_of(",\"\n") != std::string::npos;
  std::string t = s;
  if (quote) {
    t.clear();
    for (char c : s) t += c == '"' ? std::string("\"\"") : std::string(1, c);
    t = "\"" + t + "\"";
  }
  return {t, s};
}

using Row = std::vector<Cell>;

struct ItemResult {
  std::vector<Row> rows;
  json detail;
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::string> comments;
};

// Computes items on a pool of workers and hands them to `emit` on the calling
// thread strictly in input order, as soon as each next item is ready.
void run_ordered(std::size_t n, unsigned threads, const std::function<ItemResult(std::size_t)>& compute,
                 const std::function<void(std::size_t, ItemResult&)>& emit) {
  std::vector<std::optional<ItemResult>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::vector<char> done(n, 0);
  std::mutex m;
  std::condition_variable cv;
  std::size_t next = 0;
  bool abort = false;

  auto worker = [&] {
    for (;;) {
      std::size_t i;
      {
        std::lock_guard lock(m);
        if (abort || next >= n) return;
        i = next++;
      }
      std::optional<ItemResult> r;
      std::exception_ptr e;
      try {
        r = compute(i);
      } catch (...) {
        e = std::current_exception();
      }
      {
        std::lock_guard lock(m);
        slots[i] = std::move(r);
        errors[i] = e;
        done[i] = 1;
      }
      cv.notify_all();
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);

  std::exception_ptr failure;
  for (std::size_t i = 0; i < n && !failure; ++i) {
    std::unique_lock lock(m);
    cv.wait(lock, [&] { return done[i] != 0; });
    if (errors[i]) {
      failure = errors[i];
      abort = true;
      break;
    }
    ItemResult item = std::move(*slots[i]);
    slots[i].reset();
    lock.unlock();
    emit(i, item);
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

const std::vector<std::string> kConventions = {
    "units: hbar = k_B = 1 unless dispersion.hbar says otherwise; T, mu and energies share one unit",
    "entropies in nats; s_alpha is per unit volume, eta per unit boundary area of the unit-scale domain",
};

class Output {
 public:
  Output(const std::filesystem::path& dir, const std::string& command, const Table& table, json header)
      : command_(command), header_(std::move(header)) {
    std::filesystem::create_directories(dir);
    csv_path_ = dir / (command_ + ".csv");
    json_path_ = dir / (command_ + ".json");
    csv_.open(csv_path_, std::ios::binary | std::ios::trunc);
    if (!csv_) throw std::runtime_error("cannot write " + csv_path_.string());
    for (const auto& c : kConventions) csv_ << "# " << c << '\n';
    for (const auto& c : table.comments) csv_ << "# " << c << '\n';
    columns_ = table.columns;
    for (std::size_t i = 0; i < columns_.size(); ++i) csv_ << (i ? "," : "") << columns_[i];
    csv_ << '\n';
  }

  void write(const Row& row) {
    json obj = json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      csv_ << (i ? "," : "") << row[i].text;
      obj[columns_[i]] = row[i].value;
    }
    csv_ << '\n';
    rows_.push_back(std::move(obj));
  }

  // `summary` is command specific; error columns are summarized here.
  void finish(json summary, json error_estimates = json::object()) {
    csv_.flush();
    if (!csv_) throw std::runtime_error("write failed for " + csv_path_.string());
    csv_.close();
    for (const char* key : {"s_error", "eta_error", "tail_bound"}) {
      if (std::find(columns_.begin(), columns_.end(), key) == columns_.end()) continue;
      double m = 0.0;
      for (const auto& r : rows_) {
        if (r[key].is_number()) m = std::max(m, std::abs(r[key].get<double>()));
      }
      error_estimates[std::string("max_") + key] = m;
    }
    json sidecar = header_;
    sidecar["summary"] = std::move(summary);
    sidecar["error_estimates"] = std::move(error_estimates);
    sidecar["csv"] = csv_path_.filename().string();
    sidecar["columns"] = columns_;
    sidecar["rows"] = rows_;
    std::ofstream out(json_path_, std::ios::binary | std::ios::trunc);
    out << sidecar.dump(2) << '\n';
    if (!out) throw std::runtime_error("cannot write " + json_path_.string());
  }

 private:
  std::string command_;
  json header_;
  std::filesystem::path csv_path_;
  std::filesystem::path json_path_;
  std::ofstream csv_;
  std::vector<std::string> columns_;
  json rows_ = json::array();
};

struct Context {
  RunConfig cfg;
  std::string command;
  unsigned threads = 1;
  Dispersion disp;
  Domain dom;
  ThermoConstraint constraint;

  json header;

  double tol() const { return cfg.tolerance; }
  Output open(const Table& t) const { return Output(cfg.output_dir, command, t, header); }
  // energy scale of the Fermi surface: mu, or eps_F at fixed density
  double reference_energy() const {
    if (cfg.thermo.fixed_density()) return fermi_energy(disp, cfg.thermo.rho);
    return cfg.thermo.mu;
  }
};

std::vector<double> sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

// -- commands ---------------------------------------------------------------

void cmd_entropy_density(Context& c) {
  Table t{{"alpha", "T", "mu", "rho", "s_alpha", "s_error"}, {"s_alpha: Renyi entropy density; rho: particle density"}};
  Output out = c.open(t);
  const auto& T = c.cfg.temperatures;
  const std::size_t n = c.cfg.alphas.size() * T.size();
  run_ordered(
      n, c.threads,
      [&](std::size_t i) {
        const double a = c.cfg.alphas[i / T.size()];
        const auto pt = ThermoPoint::resolve(c.disp, T[i % T.size()], c.constraint, c.tol());
        const auto s = entropy_density_estimate(c.disp, RenyiIndex(a), pt, c.tol());
        const double rho = density(c.disp, pt.temperature(), pt.mu(), c.tol());
        return ItemResult{{{num(a), num(pt.temperature()), num(pt.mu()), num(rho), num(s.value), num(s.error)}}, {}};
      },
      [&](std::size_t, ItemResult& r) {
        for (auto& row : r.rows) out.write(row);
      });
  out.finish({{"points", n}});
}

void cmd_eta(Context& c) {
  Table t{{"alpha", "T", "mu", "eta", "eta_error", "tail_bound", "low_T_prediction"},
          {"eta: boundary coefficient of the regularized trace; low_T_prediction empty when mu <= 0"}};
  Output out = c.open(t);
  const auto& T = c.cfg.temperatures;
  const std::size_t n = c.cfg.alphas.size() * T.size();
  json warnings = json::array();
  run_ordered(
      n, c.threads,
      [&](std::size_t i) {
        const double a = c.cfg.alphas[i / T.size()];
        const auto pt = ThermoPoint::resolve(c.disp, T[i % T.size()], c.constraint, c.tol());
        const auto e = eta_coefficient(c.disp, c.dom, RenyiIndex(a), pt, c.tol());
        const auto pred = eta_low_T_prediction(c.disp, c.dom, RenyiIndex(a), pt.mu(), pt.temperature());
        ItemResult r{{{num(a), num(pt.temperature()), num(pt.mu()), num(e.value), num(e.error), num(e.tail_bound),
                       num(pred)}},
                     {}};
        if (e.tail_warning) r.detail = {{"alpha", a}, {"T", pt.temperature()}, {"warning", "tail bound above tolerance"}};
        return r;
      },
      [&](std::size_t, ItemResult& r) {
        for (auto& row : r.rows) out.write(row);
        if (!r.detail.is_null()) warnings.push_back(r.detail);
      });
  out.finish({{"points", n}, {"warnings", warnings}});
}

void cmd_oracle(Context& c) {
  Table t{{"T", "alpha", "L", "nodes", "S_alpha", "trace_delta", "eta_formula"},
          {"S_alpha: local Renyi entropy of the interval family L*Omega; trace_delta = S_alpha - s_alpha |L Omega|"}};
  Output out = c.open(t);
  std::vector<RenyiIndex> alphas;
  for (double a : c.cfg.alphas) alphas.emplace_back(a);
  json fits = json::array();
  const auto& T = c.cfg.temperatures;
  run_ordered(
      T.size(), c.threads,
      [&](std::size_t i) {
        const auto pt = ThermoPoint::resolve(c.disp, T[i], c.constraint, c.tol());
        const auto study = scaling_study(c.disp, pt, c.dom, alphas, c.cfg.lengths, c.cfg.nodes_per_length);
        ItemResult r;
        r.detail = json::array();
        for (std::size_t k = 0; k < alphas.size(); ++k) {
          const auto& s = study.series[k];
          const auto eta = eta_coefficient(c.disp, c.dom, alphas[k], pt, c.tol());
          for (std::size_t j = 0; j < study.L.size(); ++j) {
            r.rows.push_back({num(pt.temperature()), num(s.alpha), num(study.L[j]),
                              integer(static_cast<long long>(study.matrix_sizes[j])), num(s.entropy[j]),
                              num(s.trace[j]), num(eta.value)});
          }
          json terms = json::object();
          for (std::size_t q = 0; q < s.fit.terms.size(); ++q) {
            terms[s.fit.terms[q]] = {{"value", s.fit.coefficients[q]}, {"standard_error", s.fit.standard_errors[q]}};
          }
          r.detail.push_back({{"T", pt.temperature()},
                              {"mu", pt.mu()},
                              {"alpha", s.alpha},
                              {"fit_model", fit_model_name(s.fit.model)},
                              {"fit_terms", terms},
                              {"fit_residual_norm", s.fit.residual_norm},
                              {"bulk_density", s.bulk_density},
                              {"measured_eta", s.measured_eta},
                              {"eta_at_largest_L", s.eta_at_largest_L},
                              {"last_increment", s.last_increment},
                              {"eta_formula", eta.value},
                              {"eta_formula_error", eta.error},
                              {"relative_deviation", (s.eta_at_largest_L - eta.value) / eta.value},
                              {"predicted_entanglement", s.predicted_entanglement},
                              {"max_trace_error", *std::max_element(study.trace_errors.begin(), study.trace_errors.end())}});
        }
        return r;
      },
      [&](std::size_t, ItemResult& r) {
        for (auto& row : r.rows) out.write(row);
        for (auto& f : r.detail) fits.push_back(f);
      });
  double trace_error = 0.0, eta_error = 0.0;
  for (const auto& f : fits) {
    trace_error = std::max(trace_error, f["max_trace_error"].get<double>());
    eta_error = std::max(eta_error, f["eta_formula_error"].get<double>());
  }
  out.finish({{"fits", fits}}, {{"max_trace_identity_error", trace_error}, {"max_eta_formula_error", eta_error}});
}

void cmd_low_t(Context& c) {
  Table t{{"alpha", "T", "mu", "s_over_T", "eta", "eta_prediction"},
          {"s_over_T tends to the Sommerfeld slope; eta_prediction is the leading ln(mu/T) law"}};
  Output out = c.open(t);
  const auto T = sorted(c.cfg.temperatures);
  const double ref = c.reference_energy();
  const bool surface = ref > 0.0;
  const std::size_t n = c.cfg.alphas.size() * T.size();
  std::vector<std::vector<double>> etas(c.cfg.alphas.size());
  run_ordered(
      n, c.threads,
      [&](std::size_t i) {
        const double a = c.cfg.alphas[i / T.size()];
        const auto pt = ThermoPoint::resolve(c.disp, T[i % T.size()], c.constraint, c.tol());
        const double s = entropy_density(c.disp, RenyiIndex(a), pt, c.tol());
        const auto e = eta_coefficient(c.disp, c.dom, RenyiIndex(a), pt, c.tol());
        const auto pred = eta_low_T_prediction(c.disp, c.dom, RenyiIndex(a), pt.mu(), pt.temperature());
        return ItemResult{{{num(a), num(pt.temperature()), num(pt.mu()), num(s / pt.temperature()), num(e.value),
                            num(pred)}},
                          e.value};
      },
      [&](std::size_t i, ItemResult& r) {
        for (auto& row : r.rows) out.write(row);
        etas[i / T.size()].push_back(r.detail.get<double>());
      });

  json per_alpha = json::array();
  for (std::size_t k = 0; k < c.cfg.alphas.size(); ++k) {
    const RenyiIndex alpha(c.cfg.alphas[k]);
    const auto rep = low_temperature_report(c.disp, alpha, c.constraint, T, c.tol());
    json entry = {{"alpha", alpha.value()},
                  {"sommerfeld_extrapolated", rep.extrapolated},
                  {"sommerfeld_predicted", rep.predicted},
                  {"sommerfeld_relative_deviation", rep.relative_deviation},
                  {"activated", rep.activated}};
    if (surface) {
      const auto fit = fit_log_law(SampleSeries{T, etas[k], "eta"}, ref);
      const double slope = alpha.low_temperature_factor() / 12.0 * fermi_surface_factor_J(c.disp, c.dom, ref);
      entry["eta_log_slope"] = fit.a;
      entry["eta_log_slope_error"] = fit.standard_error;
      entry["eta_log_slope_predicted"] = slope;
      entry["eta_log_slope_relative_deviation"] = (fit.a - slope) / slope;
      entry["eta_offset"] = fit.b;
    }
    per_alpha.push_back(entry);
  }
  out.finish({{"reference_energy", ref}, {"per_alpha", per_alpha}});
}

void cmd_high_t(Context& c) {
  Table t{{"alpha", "T", "mu", "s_alpha", "eta"}, {"exponents fitted on ln-ln axes are in the JSON sidecar"}};
  Output out = c.open(t);
  const auto T = sorted(c.cfg.temperatures);
  const bool fixed_rho = c.cfg.thermo.fixed_density();
  const std::size_t n = c.cfg.alphas.size() * T.size();
  std::vector<std::vector<double>> s_vals(c.cfg.alphas.size()), eta_vals(c.cfg.alphas.size());
  run_ordered(
      n, c.threads,
      [&](std::size_t i) {
        const double a = c.cfg.alphas[i / T.size()];
        const auto pt = ThermoPoint::resolve(c.disp, T[i % T.size()], c.constraint, c.tol());
        const double s = entropy_density(c.disp, RenyiIndex(a), pt, c.tol());
        const auto e = eta_coefficient(c.disp, c.dom, RenyiIndex(a), pt, c.tol());
        return ItemResult{{{num(a), num(pt.temperature()), num(pt.mu()), num(s), num(e.value)}}, json{s, e.value}};
      },
      [&](std::size_t i, ItemResult& r) {
        for (auto& row : r.rows) out.write(row);
        s_vals[i / T.size()].push_back(r.detail[0].get<double>());
        eta_vals[i / T.size()].push_back(r.detail[1].get<double>());
      });

  const double nu = c.disp.counting_exponent();
  json per_alpha = json::array();
  for (std::size_t k = 0; k < c.cfg.alphas.size(); ++k) {
    const RenyiIndex alpha(c.cfg.alphas[k]);
    json entry = {{"alpha", alpha.value()}};
    const bool log_law = fixed_rho && alpha.value() == 1.0;
    if (log_law) {
      // s_1 grows like rho * nu * ln T at fixed density
      const auto fit = fit_log_law(SampleSeries{T, s_vals[k], "s"}, 1.0);
      entry["s_log_slope"] = -fit.a;
      entry["s_log_slope_predicted"] = nu * c.cfg.thermo.rho;
    } else {
      const auto fit = fit_power_law(SampleSeries{T, s_vals[k], "s"});
      entry["s_exponent"] = fit.exponent;
      entry["s_exponent_error"] = fit.standard_error;
      entry["s_exponent_predicted"] = entropy_density_high_temperature_exponent(c.disp, alpha, fixed_rho);
    }
    const auto efit = fit_power_law(SampleSeries{T, eta_vals[k], "eta"});
    entry["eta_exponent"] = efit.exponent;
    entry["eta_exponent_error"] = efit.standard_error;
    entry["eta_exponent_predicted"] = eta_high_temperature_exponent(c.disp, alpha, fixed_rho);
    entry["eta_exponent_generic_formula"] = eta_high_temperature_exponent_generic(c.disp, alpha, fixed_rho);
    per_alpha.push_back(entry);
  }
  out.finish({{"counting_exponent", nu}, {"per_alpha", per_alpha}});
}

void cmd_crossover(Context& c) {
  Table t{{"alpha", "mu", "J", "A_alpha", "L0", "T0", "volume_ratio", "log_slope_ratio", "zero_T_model",
           "zero_T_exact", "high_T_deviation", "high_T_flagged"},
          {"ratios compare the interpolation formula with exact coefficients; flagged rows deviate above threshold"}};
  Output out = c.open(t);
  const double mu = c.reference_energy();
  if (!(mu > 0.0)) throw NoFermiSurface("crossover", "crossover report needs a Fermi surface (mu > 0)");
  json reports = json::array();
  run_ordered(
      c.cfg.alphas.size(), c.threads,
      [&](std::size_t i) {
        const auto r = crossover_consistency_report(c.disp, c.dom, RenyiIndex(c.cfg.alphas[i]), mu,
                                                    {1e-2, 3e-3, 1e-3, 3e-4}, c.tol());
        json d = {{"alpha", r.alpha},
                  {"T_low", r.T_low},
                  {"volume_model", r.volume_model},
                  {"volume_exact", r.volume_exact},
                  {"eta_temperatures", r.eta_temperatures},
                  {"eta_values", r.eta_values},
                  {"log_slope_model", r.log_slope_model},
                  {"log_slope_exact", r.log_slope_exact},
                  {"low_T_tolerance", r.low_T_tolerance},
                  {"low_T_consistent", r.low_T_consistent},
                  {"T_high", r.T_high},
                  {"high_T_model", r.high_T_model},
                  {"high_T_exact", r.high_T_exact},
                  {"high_T_threshold", r.high_T_threshold}};
        return ItemResult{{{num(r.alpha), num(r.mu), num(r.J), num(r.params.A_alpha), num(r.params.L0),
                            num(r.params.T0), num(r.volume_ratio), num(r.log_slope_ratio), num(r.zero_T_model),
                            num(r.zero_T_exact), num(r.high_T_deviation), flag(r.high_T_flagged)}},
                          d};
      },
      [&](std::size_t, ItemResult& r) {
        for (auto& row : r.rows) out.write(row);
        reports.push_back(r.detail);
      });
  out.finish({{"mu", mu}, {"reports", reports}});
}

void cmd_verify(Context& c, bool& all_pass) {
  Table t{{"criterion", "label", "measured", "expected", "tolerance", "relative", "pass"},
          {"one row per acceptance measurement; pass when |measured - expected| <= tolerance, scaled by |expected| if relative",
           "rows with tolerance 0 and note 'lower bound' in the JSON pass when measured >= expected"}};
  Output out = c.open(t);
  acceptance::Options o;
  o.criteria = c.cfg.criteria;
  o.threads = c.threads;
  const auto results = acceptance::run(o, [](const acceptance::Criterion& cr) {
    std::cerr << acceptance::summary_line(cr) << '\n';
  });
  json criteria = json::array();
  all_pass = true;
  for (const auto& cr : results) {
    all_pass = all_pass && cr.pass;
    json ms = json::array();
    for (const auto& m : cr.measurements) {
      out.write({integer(cr.id), text(m.label), num(m.measured), num(m.expected), num(m.tolerance), flag(m.relative),
                 flag(m.pass)});
      ms.push_back({{"label", m.label},
                    {"measured", m.measured},
                    {"expected", m.expected},
                    {"tolerance", m.tolerance},
                    {"relative", m.relative},
                    {"pass", m.pass},
                    {"note", m.note}});
    }
    criteria.push_back({{"id", cr.id},
                        {"title", cr.title},
                        {"pass", cr.pass},
                        {"worst_ratio", cr.worst_ratio()},
                        {"seconds", cr.seconds},
                        {"notes", cr.notes},
                        {"measurements", ms}});
  }
  out.finish({{"all_pass", all_pass}, {"criteria", criteria}});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thermal Renyi entanglement of free fermions: bulk densities, boundary coefficients, spectral checks"};
  std::string command, config_path, out_dir;
  std::optional<double> tol;
  unsigned threads = 0;
  app.add_option("command", command, "one of: entropy-density, eta, oracle, low-t-report, high-t-report, "
                                     "crossover-report, verify")
      ->required()
      ->check(CLI::IsMember(config::command_names()));
  app.add_option("--config", config_path, "YAML run configuration")->required();
  app.add_option("--out", out_dir, "output directory (overrides output.dir)");
  app.add_option("--tol", tol, "relative tolerance (overrides tolerance)");
  app.add_option("--threads", threads, "worker threads (default: hardware concurrency)");
  app.set_version_flag("--version", std::string(FERMI_EE_VERSION));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  Context ctx{.cfg = {}, .command = command, .threads = 1, .disp = Dispersion::ideal_gas(1),
              .dom = Domain::interval(0.0, 1.0), .constraint = ChemicalPotential{1.0}};
  try {
    ctx.cfg = config::load(config_path);
    if (tol) ctx.cfg.tolerance = *tol;
    if (!out_dir.empty()) ctx.cfg.output_dir = out_dir;
    config::validate(ctx.cfg, command);
    if (command != "verify") {
      ctx.disp = ctx.cfg.dispersion.build();
      ctx.dom = ctx.cfg.domain.build(ctx.cfg.dispersion.dimension);
      ctx.constraint = ctx.cfg.thermo.build();
    }
  } catch (const Error& e) {
    std::cerr << "fermi-ee: invalid configuration [" << e.module() << "]: " << e.what() << '\n';
    return kExitConfig;
  }
  ctx.threads = threads > 0 ? threads : std::max(1u, std::thread::hardware_concurrency());

  ctx.header = {{"schema", 1},
                {"tool", "fermi-ee"},
                {"version", FERMI_EE_VERSION},
                {"command", command},
                {"config", config::to_json(ctx.cfg)},
                {"conventions", kConventions}};
  bool all_pass = true;
  try {
    if (command == "entropy-density") cmd_entropy_density(ctx);
    else if (command == "eta") cmd_eta(ctx);
    else if (command == "oracle") cmd_oracle(ctx);
    else if (command == "low-t-report") cmd_low_t(ctx);
    else if (command == "high-t-report") cmd_high_t(ctx);
    else if (command == "crossover-report") cmd_crossover(ctx);
    else cmd_verify(ctx, all_pass);
  } catch (const UnsupportedConfiguration& e) {
    std::cerr << "fermi-ee: invalid configuration [" << e.module() << "]: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "fermi-ee: invalid configuration [" << e.module() << "]: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << "fermi-ee: " << command << " failed in module " << e.module() << ": " << e.what() << '\n';
    return kExitComputation;
  } catch (const std::exception& e) {
    std::cerr << "fermi-ee: " << command << " failed: " << e.what() << '\n';
    return kExitComputation;
  }
  return all_pass ? kExitOk : kExitComputation;
}
