#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>

#include "gausskey/attack.hpp"
#include "gausskey/cli.hpp"
#include "gausskey/kernels.hpp"
#include "gausskey/landscape.hpp"
#include "gausskey/rates.hpp"
#include "writers.hpp"

namespace gausskey::cli {

namespace {

using Entries = std::vector<std::pair<std::string, Cell>>;

double shown_rate(const RunConfig& c, double rate) {
  return c.clamp_nonnegative ? std::max(rate, 0.0) : rate;
}

AttackParams attack_params(const RunConfig& c) { return {c.tau, c.omega, c.g, c.g_prime}; }

Cell mu_cell(const RunConfig& c) {
  return c.mu ? Cell{*c.mu} : Cell{std::string("asymptotic")};
}

Entries param_entries(const RunConfig& c) {
  return {{"protocol", std::string(to_string(c.protocol))},
          {"tau", c.tau},
          {"omega", c.omega},
          {"g", c.g},
          {"g_prime", c.g_prime},
          {"mu", mu_cell(c)}};
}

void append_spectrum(Entries& e, const std::string& name, const Spectrum& s) {
  for (std::size_t i = 0; i < s.size(); ++i) e.emplace_back(name + "_" + std::to_string(i + 1), s[i]);
}

std::string emit(const RunConfig& c, const Table& table, nlohmann::json json) {
  return c.format == Format::csv ? to_csv(table) : dump(json);
}

std::string emit_entries(const RunConfig& c, const Entries& entries) {
  return emit(c, key_value_table(entries), key_value_json(entries));
}

std::string cmd_rate(const RunConfig& c) {
  const AttackParams p = attack_params(c);
  const RateReport r = c.mu ? key_rate_numeric(p, {c.protocol, *c.mu, false})
                            : key_rate_asymptotic_report(p, c.protocol);
  if (c.format == Format::json) {
    nlohmann::json doc;
    doc["params"] = key_value_json(param_entries(c));
    doc["evaluation_mu"] = r.mu;
    doc["mutual_information"] = r.mutual_information;
    doc["holevo"] = r.holevo;
    doc["rate"] = shown_rate(c, r.rate);
    doc["total_spectrum"] = r.total_spectrum.values;
    doc["conditional_spectrum"] = r.conditional_spectrum.values;
    if (r.conditional_spectrum_p) doc["conditional_spectrum_p"] = r.conditional_spectrum_p->values;
    return dump(doc);
  }
  Entries e = param_entries(c);
  e.emplace_back("evaluation_mu", r.mu);
  e.emplace_back("mutual_information", r.mutual_information);
  e.emplace_back("holevo", r.holevo);
  e.emplace_back("rate", shown_rate(c, r.rate));
  append_spectrum(e, "total_spectrum", r.total_spectrum);
  append_spectrum(e, "conditional_spectrum", r.conditional_spectrum);
  if (r.conditional_spectrum_p) append_spectrum(e, "conditional_spectrum_p", *r.conditional_spectrum_p);
  return to_csv(key_value_table(e));
}

Table scan_table(const RunConfig& c, const std::vector<ScanRow>& rows) {
  Table t{{"g", "g_prime", "rate", "physical", "on_boundary"}, {}};
  t.rows.reserve(rows.size());
  for (const auto& r : rows) {
    t.rows.push_back({r.g, r.g_prime, shown_rate(c, r.rate), r.physical, r.on_boundary});
  }
  return t;
}

nlohmann::json scan_params(const RunConfig& c) {
  nlohmann::json params;
  params["protocol"] = to_string(c.protocol);
  params["tau"] = c.tau;
  params["omega"] = c.omega;
  params["grid_resolution"] = c.grid_resolution;
  return params;
}

std::string cmd_scan(const RunConfig& c) {
  const auto report = verify_minimality(c.protocol, c.tau, c.omega, c.grid_resolution);
  const auto rows = scan_rows(c);
  const Table table = scan_table(c, rows);
  nlohmann::json doc;
  doc["params"] = scan_params(c);
  doc["rows"] = rows_to_json(table);
  doc["origin_rate"] = shown_rate(c, report.origin_rate);
  doc["verdict"] = report.verdict;
  return emit(c, table, std::move(doc));
}

std::string cmd_boundary(const RunConfig& c) {
  const double origin = key_rate(c.protocol, {c.tau, c.omega, 0.0, 0.0});
  const auto curve = boundary_curve(c.omega, boundary_samples_for(c.grid_resolution));
  const auto constants = kernels::make_rate_constants(c.protocol, c.tau, c.omega);
  std::vector<ScanRow> rows;
  bool dominated = true;
  for (const auto& s : curve.samples) {
    const double rate = kernels::rate_point(constants, s.g, s.g_prime);
    dominated = dominated && rate - origin >= kMinimalityMargin;
    rows.push_back({s.g, s.g_prime, rate, true, true});
  }
  const Table table = scan_table(c, rows);
  nlohmann::json doc;
  doc["params"] = scan_params(c);
  doc["rows"] = rows_to_json(table);
  doc["origin_rate"] = shown_rate(c, origin);
  doc["verdict"] = dominated;
  return emit(c, table, std::move(doc));
}

std::string cmd_critical(const RunConfig& c) {
  const auto r = critical_point_report(c.protocol, c.tau, c.omega, c.gradient_step.value_or(0.0),
                                       c.hessian_step.value_or(0.0));
  Entries e{{"protocol", std::string(to_string(c.protocol))}, {"tau", c.tau}, {"omega", c.omega}};
  e.emplace_back("gradient_g", r.gradient_at_origin[0]);
  e.emplace_back("gradient_g_prime", r.gradient_at_origin[1]);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const std::string idx = std::to_string(i + 1) + std::to_string(j + 1);
      e.emplace_back("hessian_" + idx, r.hessian_at_origin(i, j));
    }
  }
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const std::string idx = std::to_string(i + 1) + std::to_string(j + 1);
      e.emplace_back("analytic_hessian_" + idx, r.analytic_hessian(i, j));
    }
  }
  e.emplace_back("det_H", r.det_H);
  e.emplace_back("analytic_det_H", r.analytic_det_H);
  e.emplace_back("det_relative_residual", r.det_relative_residual);
  e.emplace_back("is_minimum", r.is_minimum);
  return emit_entries(c, e);
}

std::string cmd_converge(const RunConfig& c) {
  const AttackParams p = attack_params(c);
  const double asymptotic = key_rate(c.protocol, p);
  Table t{{"mu", "rate_numeric", "rate_asymptotic", "abs_delta"}, {}};
  bool monotone = true;
  double previous = INFINITY;
  for (const double mu : c.mu_sweep) {
    const double numeric = key_rate_numeric(p, {c.protocol, mu, false}).rate;
    const double delta = std::abs(numeric - asymptotic);
    monotone = monotone && delta < previous;
    previous = delta;
    t.rows.push_back({mu, shown_rate(c, numeric), shown_rate(c, asymptotic), delta});
  }
  nlohmann::json doc;
  doc["params"] = key_value_json(param_entries(c));
  doc["rows"] = rows_to_json(t);
  doc["monotone"] = monotone;
  return emit(c, t, std::move(doc));
}

bool row_less(const ScanRow& a, const ScanRow& b) {
  return a.g < b.g || (a.g == b.g && a.g_prime < b.g_prime);
}

// Flags shared by every subcommand, kept as text so that config-file values
// are only overridden by flags that were actually given.
struct FlagValues {
  std::optional<std::string> protocol, tau, omega, g, gprime, mu, grid_resolution, output, format,
      config, gradient_step, hessian_step, mu_sweep;
  bool clamp = false;
};

void add_shared_flags(CLI::App* app, FlagValues& f) {
  app->add_option("--protocol", f.protocol, "noswitching | switching | switching-mixed");
  app->add_option("--tau", f.tau, "Channel transmissivity");
  app->add_option("--omega", f.omega, "Thermal variance of Eve's ancillas");
  app->add_option("--g", f.g, "q-quadrature correlation");
  app->add_option("--gprime", f.gprime, "p-quadrature correlation");
  app->add_option("--mu", f.mu, "Modulation variance or 'asymptotic'");
  app->add_option("--grid-resolution", f.grid_resolution, "Grid points per axis");
  app->add_option("--output", f.output, "Output path (default: stdout)");
  app->add_option("--format", f.format, "csv | json");
  app->add_option("--config", f.config, "key=value config file");
  app->add_option("--gradient-step", f.gradient_step, "Finite-difference gradient step");
  app->add_option("--hessian-step", f.hessian_step, "Finite-difference Hessian step");
  app->add_option("--mu-sweep", f.mu_sweep, "Comma-separated mu values for converge");
  app->add_flag("--clamp-nonnegative", f.clamp, "Report max(R, 0)");
}

RunConfig build_config(Command command, const FlagValues& f) {
  RunConfig c;
  c.command = command;
  if (f.config) apply_config_file(c, *f.config);
  const std::pair<const char*, const std::optional<std::string>*> flags[] = {
      {"protocol", &f.protocol},           {"tau", &f.tau},
      {"omega", &f.omega},                 {"g", &f.g},
      {"gprime", &f.gprime},               {"mu", &f.mu},
      {"grid_resolution", &f.grid_resolution}, {"output", &f.output},
      {"format", &f.format},               {"gradient_step", &f.gradient_step},
      {"hessian_step", &f.hessian_step},   {"mu_sweep", &f.mu_sweep},
  };
  for (const auto& [key, value] : flags) {
    if (*value) apply_setting(c, key, **value, "command line");
  }
  if (f.clamp) c.clamp_nonnegative = true;
  return c;
}

}  // namespace

std::vector<ScanRow> scan_rows(const RunConfig& c) {
  const auto report = verify_minimality(c.protocol, c.tau, c.omega, c.grid_resolution);
  std::vector<ScanRow> rows;
  rows.reserve(report.grid_rates.size() + report.boundary_rates.size());
  for (const auto& pt : report.grid_rates) {
    const bool on_boundary =
        std::abs(boundary_residual(c.omega, pt.g, pt.g_prime)) <= kBoundaryTolerance;
    rows.push_back({pt.g, pt.g_prime, pt.rate, true, on_boundary});
  }
  for (const auto& pt : report.boundary_rates) rows.push_back({pt.g, pt.g_prime, pt.rate, true, true});
  // Boundary samples sort after a coincident grid point so `unique` keeps the flagged one.
  std::stable_sort(rows.begin(), rows.end(), [](const ScanRow& a, const ScanRow& b) {
    if (row_less(a, b)) return true;
    if (row_less(b, a)) return false;
    return a.on_boundary && !b.on_boundary;
  });
  rows.erase(std::unique(rows.begin(), rows.end(),
                         [](const ScanRow& a, const ScanRow& b) {
                           return a.g == b.g && a.g_prime == b.g_prime;
                         }),
             rows.end());
  return rows;
}

std::string render(const RunConfig& c) {
  switch (c.command) {
    case Command::rate: return cmd_rate(c);
    case Command::scan: return cmd_scan(c);
    case Command::boundary: return cmd_boundary(c);
    case Command::critical: return cmd_critical(c);
    case Command::converge: return cmd_converge(c);
  }
  throw Error("unknown command");
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Key rates of two-mode Gaussian attacks on CV-QKD", "gausskey"};
  app.require_subcommand(1);
  FlagValues flags;
  const std::pair<const char*, Command> commands[] = {
      {"rate", Command::rate},         {"scan", Command::scan},
      {"boundary", Command::boundary}, {"critical", Command::critical},
      {"converge", Command::converge},
  };
  const char* descriptions[] = {
      "I_AB, Holevo bound, rate and spectra at one point",
      "Rates over the physical (g, g') grid and boundary",
      "Rates along the boundary of the physical region",
      "Gradient and Hessian of the rate at the origin",
      "Finite-mu rates against the closed form",
  };
  std::vector<std::pair<CLI::App*, Command>> subs;
  for (std::size_t i = 0; i < std::size(commands); ++i) {
    CLI::App* sub = app.add_subcommand(commands[i].first, descriptions[i]);
    add_shared_flags(sub, flags);
    subs.emplace_back(sub, commands[i].second);
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  Command command = Command::rate;
  for (const auto& [sub, cmd] : subs) {
    if (sub->parsed()) command = cmd;
  }

  try {
    const RunConfig config = build_config(command, flags);
    const std::string text = render(config);
    if (config.output_path.empty()) {
      out << text;
      out.flush();
    } else {
      std::ofstream file(config.output_path, std::ios::binary | std::ios::trunc);
      if (!file || !(file << text) || !file.flush()) {
        err << "error: cannot write output file '" << config.output_path << "'\n";
        return kExitConfig;
      }
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const PhysicalityError& e) {
    err << "physicality error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const Error& e) {
    err << "domain error: " << e.what() << '\n';
    return kExitDomain;
  }
}

}  // namespace gausskey::cli
