// pnpfv command-line driver: run | converge | iv | sweep

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include "pnpfv/config.hpp"
#include "pnpfv/csv.hpp"
#include "pnpfv/error.hpp"
#include "pnpfv/scenarios.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace pnpfv;

namespace {

// Accepts plain reals and simple fractions such as 1/3.
double parse_real(const std::string& text) {
  const auto slash = text.find('/');
  std::size_t used = 0;
  try {
    if (slash == std::string::npos) {
      const double v = std::stod(text, &used);
      if (used == text.size()) return v;
    } else {
      const double a = std::stod(text.substr(0, slash), &used);
      if (used == slash) {
        const std::string den = text.substr(slash + 1);
        const double b = std::stod(den, &used);
        if (used == den.size() && b != 0.0) return a / b;
      }
    }
  } catch (const std::logic_error&) {
  }
  throw ConfigError("not a number: '" + text + "'");
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(parse_real(item));
  }
  if (out.empty()) throw ConfigError("empty list '" + text + "'");
  return out;
}

// Writes `value` at a dotted path such as time.tau or physics.species.0.valence.
void set_path(json& doc, const std::string& path, const json& value) {
  json* node = &doc;
  std::stringstream ss(path);
  std::string key;
  std::vector<std::string> keys;
  while (std::getline(ss, key, '.')) keys.push_back(key);
  if (keys.empty()) throw ConfigError("empty override path");
  for (std::size_t k = 0; k < keys.size(); ++k) {
    const bool last = k + 1 == keys.size();
    const auto& part = keys[k];
    if (node->is_array()) {
      std::size_t idx = 0;
      try {
        idx = std::stoul(part);
      } catch (const std::logic_error&) {
        throw ConfigError("override " + path + ": '" + part + "' is not an array index");
      }
      if (idx >= node->size()) throw ConfigError("override " + path + ": index " + part + " out of range");
      node = &(*node)[idx];
    } else {
      if (!node->is_object()) *node = json::object();
      node = &(*node)[part];
    }
    if (last) *node = value;
  }
}

json parse_override_value(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error&) {
    // 1/3 style fractions, then bare strings.
    try {
      return parse_real(text);
    } catch (const ConfigError&) {
      return text;
    }
  }
}

struct CommonOptions {
  std::string config_path;
  std::string scenario = "ex4_2";
  std::vector<std::string> sets;
  std::string out_dir;
  int threads = 0;
  bool serial = false;

  // Shorthand flags, each mapped to a config path.
  std::vector<std::pair<std::string, std::string>> shorthands;
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("-c,--config", opt.config_path, "JSON config file (defaults to the scenario preset)");
  cmd->add_option("-s,--scenario", opt.scenario, "Scenario preset when no config is given")->capture_default_str();
  cmd->add_option("--set", opt.sets, "Override any config field: path=value, e.g. time.tau=1e-4");
  cmd->add_option("-o,--out", opt.out_dir, "Output directory (overrides output.dir)");
  cmd->add_option("--threads", opt.threads, "OpenMP thread count (0 = runtime default)");
  cmd->add_flag("--serial", opt.serial, "Use the serial reference kernels");

  struct Shorthand {
    const char* flag;
    const char* path;
    const char* help;
  };
  static const Shorthand table[] = {
      {"--n-cells", "grid.n_cells", "Number of cells"},
      {"--epsilon", "physics.epsilon", "Dielectric epsilon"},
      {"--tau", "time.tau", "Time step"},
      {"--t-end", "time.t_end", "Final time"},
      {"--steady-tol", "time.steady_tol", "Steady-state tolerance on max |psi^n - psi^{n-1}|"},
      {"--max-steps", "time.max_steps", "Step cap"},
      {"--voltage", "boundary.voltage", "Right-wall potential V"},
      {"--eta", "boundary.eta", "Robin eta"},
      {"--q0", "geometry.q0", "Permanent charge Q0"},
      {"--r-c", "geometry.r_c", "Channel radius"},
      {"--l-c", "geometry.l_c", "Channel length"},
      {"--flux-order", "numerics.flux_order", "zeroth | first | second"},
      {"--sampling", "numerics.sampling", "cell_average | cell_center"},
      {"--initial", "initial.kind", "preset | random | linear"},
      {"--seed", "initial.seed", "Seed for random initial data"},
      {"--series-stride", "output.series_stride", "Write every k-th step to series.csv"},
  };
  for (const auto& s : table) {
    cmd->add_option_function<std::string>(
        s.flag, [&opt, path = std::string(s.path)](const std::string& v) { opt.shorthands.emplace_back(path, v); },
        s.help);
  }
}

ScenarioConfig resolve_config(const CommonOptions& opt) {
  std::string text;
  if (!opt.config_path.empty()) {
    std::ifstream in(opt.config_path);
    if (!in) throw ConfigError("cannot read config file " + opt.config_path);
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
    // Report syntax and field errors against the file before applying overrides.
    try {
      (void)parse_config(text);
    } catch (const ConfigError& e) {
      throw ConfigError(opt.config_path + ": " + e.what());
    }
  } else {
    text = emit_config(default_config(parse_scenario_id(opt.scenario)));
  }
  json doc = json::parse(text);
  for (const auto& [path, value] : opt.shorthands) set_path(doc, path, parse_override_value(value));
  for (const auto& s : opt.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects path=value, got '" + s + "'");
    set_path(doc, s.substr(0, eq), parse_override_value(s.substr(eq + 1)));
  }
  if (!opt.out_dir.empty()) doc["output"]["dir"] = opt.out_dir;
  return parse_config(doc.dump());
}

Execution execution_of(const CommonOptions& opt) {
  return opt.serial ? Execution::serial : Execution::parallel;
}

fs::path prepare_out(const ScenarioConfig& cfg) {
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  save_config(cfg, dir / "config.json");
  return dir;
}

std::vector<std::string> provenance(const ScenarioConfig& cfg) {
  std::vector<std::string> lines{"scenario=" + std::string(to_string(cfg.scenario))};
  if (cfg.initial == InitialKind::random) {
    lines.push_back("initial=random generator=mt19937_64 seed=" + std::to_string(cfg.seed));
  } else {
    lines.push_back("initial=" + std::string(to_string(cfg.initial)));
  }
  return lines;
}

int cmd_run(const CommonOptions& opt) {
  const ScenarioConfig cfg = resolve_config(opt);
  const fs::path dir = prepare_out(cfg);
  const PnpModel model(build_system(cfg), execution_of(opt));
  const bool robin = cfg.boundary == BoundaryKind::zero_flux_robin;
  const auto comments = provenance(cfg);

  State init = initial_state(model, cfg);
  write_snapshot(dir / "initial.csv", model.grid(), init, comments);

  SeriesWriter series(dir / "series.csv", model.species_count(), comments);
  auto row_of = [&](const State& s, std::optional<double> dpsi) {
    SeriesRow r;
    r.t = s.t;
    if (robin) r.energy = model.discrete_energy(s);
    for (std::size_t i = 0; i < model.species_count(); ++i) r.masses.push_back(model.total_mass(s, i));
    r.min_c = s.min_density();
    r.dpsi_inf = dpsi;
    return r;
  };
  series.write(row_of(init, std::nullopt));

  const auto start = std::chrono::steady_clock::now();
  const RunOutcome out = run_scenario(model, cfg, std::move(init), [&](const StepRecord& rec) {
    if (rec.current.step_index % cfg.series_stride == 0) series.write(row_of(rec.current, rec.dpsi_inf));
  });
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_snapshot(dir / "final.csv", model.grid(), out.state, comments);

  std::printf("scenario %s: %zu steps, t = %.10g, last dpsi_inf = %.3e, %s, %.2f s wall\n",
              std::string(to_string(cfg.scenario)).c_str(), out.steps, out.state.t, out.last_dpsi,
              out.steady ? "steady" : "not steady", wall);
  std::printf("wrote %s\n", dir.string().c_str());
  return 0;
}

int cmd_converge(const CommonOptions& opt, const std::string& ns_text, const std::string& reference) {
  ScenarioConfig cfg = resolve_config(opt);
  if (cfg.scenario != ScenarioId::ex4_1) throw ConfigError("converge runs the ex4_1 manufactured problem only");
  std::vector<std::size_t> ns;
  for (double v : parse_list(ns_text)) {
    if (v < 1 || v != std::floor(v)) throw ConfigError("--ns: not a cell count: " + std::to_string(v));
    ns.push_back(static_cast<std::size_t>(v));
  }
  ConvergenceOptions co;
  co.flux_order = cfg.flux_order;
  co.sampling = cfg.sampling;
  co.t_final = cfg.t_end.value_or(1.0);
  co.exec = execution_of(opt);
  if (reference == "cell_average") {
    co.reference = ErrorReference::cell_average;
  } else if (reference != "cell_center") {
    throw ConfigError("--reference must be cell_center or cell_average");
  }
  const fs::path dir = prepare_out(cfg);
  const auto report = convergence_study(ns, co);
  write_convergence(dir / "convergence.csv", report);

  std::printf("%6s", "N");
  for (const auto& f : report.fields) std::printf("  %12s %7s", ("err_" + f).c_str(), "order");
  std::printf("\n");
  for (const auto& row : report.rows) {
    std::printf("%6zu", row.n_cells);
    for (std::size_t f = 0; f < row.errors.size(); ++f) {
      if (row.orders[f]) {
        std::printf("  %12.4e %7.4f", row.errors[f], *row.orders[f]);
      } else {
        std::printf("  %12.4e %7s", row.errors[f], "-");
      }
    }
    std::printf("\n");
  }
  return 0;
}

int cmd_iv(const CommonOptions& opt, const std::string& voltages_text) {
  const ScenarioConfig cfg = resolve_config(opt);
  const auto voltages = parse_list(voltages_text);
  const fs::path dir = prepare_out(cfg);
  const auto points = iv_sweep(cfg, voltages, execution_of(opt));
  write_iv(dir / "iv.csv", points);
  std::vector<double> v;
  std::vector<double> j;
  for (const auto& p : points) {
    std::printf("V = %-8g J = %.10e  steps %zu%s\n", p.voltage, p.current, p.steps, p.converged ? "" : "  NOT CONVERGED");
    if (p.converged) {
      v.push_back(p.voltage);
      j.push_back(p.current);
    }
  }
  if (v.size() >= 2) {
    const auto fit = fit_line(v, j);
    std::printf("fit J = %.6e V + %.6e, R^2 = %.6f\n", fit.slope, fit.intercept, fit.r_squared);
  }
  return 0;
}

int cmd_sweep(const CommonOptions& opt, const std::string& rc_text, const std::string& lc_text,
              const std::string& q0_text) {
  const ScenarioConfig base = resolve_config(opt);
  if (!base.geometry) throw ConfigError("sweep needs a channel scenario (ex4_2, ex4_3 or custom)");
  const auto rcs = rc_text.empty() ? std::vector<double>{base.geometry->r_c} : parse_list(rc_text);
  const auto q0s = q0_text.empty() ? std::vector<double>{base.geometry->q0} : parse_list(q0_text);
  std::vector<std::pair<double, double>> shapes;
  if (lc_text.empty()) {
    for (double r : rcs) shapes.emplace_back(r, r);
  } else {
    for (double r : rcs) {
      for (double l : parse_list(lc_text)) shapes.emplace_back(r, l);
    }
  }
  std::vector<ScenarioConfig> configs;
  for (double q : q0s) {
    for (const auto& [r, l] : shapes) {
      ScenarioConfig c = base;
      c.geometry->r_c = r;
      c.geometry->l_c = l;
      c.geometry->q0 = q;
      c.validate();
      configs.push_back(c);
    }
  }
  const fs::path dir = prepare_out(base);
  const auto rows = steady_sweep(configs, execution_of(opt));
  write_sweep(dir / "sweep.csv", rows);
  for (const auto& r : rows) {
    std::printf("r_c = %-10.6g l_c = %-10.6g Q0 = %-6g steps %-7zu t_s = %-10.6g %s  %.2f s\n", r.r_c, r.l_c, r.q0,
                r.result.steps, r.result.t_s, r.result.converged ? "steady" : "NOT CONVERGED", r.wall_seconds);
  }
  return 0;
}

std::string one_line(std::string s) {
  for (auto& ch : s) {
    if (ch == '\n' || ch == '\r') ch = ' ';
  }
  return s;
}

int fail(const char* kind, const std::string& message, int code) {
  std::fprintf(stderr, "pnpfv: error: %s: %s\n", kind, one_line(message).c_str());
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Positivity-preserving finite-volume solver for the 1D reduced PNP system"};
  app.require_subcommand(1);

  CommonOptions run_opt;
  auto* run = app.add_subcommand("run", "Run one scenario; writes initial.csv, final.csv, series.csv");
  add_common(run, run_opt);

  CommonOptions conv_opt;
  conv_opt.scenario = "ex4_1";
  std::string ns = "40,80,160,320";
  std::string reference = "cell_center";
  auto* conv = app.add_subcommand("converge", "Manufactured-solution convergence study; writes convergence.csv");
  add_common(conv, conv_opt);
  conv->add_option("--ns", ns, "Comma-separated cell counts")->capture_default_str();
  conv->add_option("--reference", reference, "cell_center | cell_average")->capture_default_str();

  CommonOptions iv_opt;
  iv_opt.scenario = "custom";
  std::string voltages = "0.5,1,3,5";
  auto* iv = app.add_subcommand("iv", "Steady current for each voltage; writes iv.csv");
  add_common(iv, iv_opt);
  iv->add_option("--voltages", voltages, "Comma-separated voltages")->capture_default_str();

  CommonOptions sweep_opt;
  std::string rc_list;
  std::string lc_list;
  std::string q0_list;
  auto* sweep = app.add_subcommand("sweep", "Steady-state counts over a geometry / Q0 grid; writes sweep.csv");
  add_common(sweep, sweep_opt);
  sweep->add_option("--rc-list", rc_list, "Channel radii; l_c = r_c unless --lc-list is given (fractions ok)");
  sweep->add_option("--lc-list", lc_list, "Channel lengths, crossed with --rc-list");
  sweep->add_option("--q0-list", q0_list, "Permanent charges");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), 2);
  }

  try {
    const CommonOptions* active = run->parsed() ? &run_opt : conv->parsed() ? &conv_opt : iv->parsed() ? &iv_opt : &sweep_opt;
    if (active->threads > 0) omp_set_num_threads(active->threads);
    if (run->parsed()) return cmd_run(run_opt);
    if (conv->parsed()) return cmd_converge(conv_opt, ns, reference);
    if (iv->parsed()) return cmd_iv(iv_opt, voltages);
    return cmd_sweep(sweep_opt, rc_list, lc_list, q0_list);
  } catch (const ConfigError& e) {
    return fail("config", e.what(), 2);
  } catch (const DomainError& e) {
    return fail("domain", e.what(), 3);
  } catch (const RangeError& e) {
    return fail("range", e.what(), 3);
  } catch (const SingularSystemError& e) {
    return fail("singular", e.what(), 3);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), 1);
  }
}
