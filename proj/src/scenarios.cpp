#include "pnpfv/scenarios.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <random>
#include <string>

#include "pnpfv/error.hpp"

namespace pnpfv {

namespace {

bool is_channel(ScenarioId id) {
  return id == ScenarioId::ex4_2 || id == ScenarioId::ex4_3 || id == ScenarioId::custom;
}

bool is_bump(ScenarioId id) { return id == ScenarioId::ex4_4 || id == ScenarioId::ex4_5; }

double quartic_bump(double x) { return std::exp(-x * x * x * x); }

ChannelGeometry channel_of(const GeometryConfig& g) { return ChannelGeometry{g.r_f, g.r_c, g.l_c}; }

// Runs body(k) for k in [0, count); under Execution::parallel the iterations
// are spread over OpenMP threads and the first exception is rethrown.
template <typename Body>
void for_each_index(std::size_t count, Execution exec, Body&& body) {
  if (exec == Execution::serial) {
    for (std::size_t k = 0; k < count; ++k) body(k);
    return;
  }
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(count); ++k) {
    try {
      body(static_cast<std::size_t>(k));
    } catch (...) {
#pragma omp critical(pnpfv_sweep_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

const std::vector<std::string>& scenario_ids() {
  static const std::vector<std::string> ids = {"ex4_1", "ex4_2", "ex4_3", "ex4_4", "ex4_5", "custom"};
  return ids;
}

std::string_view to_string(ScenarioId id) {
  return scenario_ids()[static_cast<std::size_t>(id)];
}

ScenarioId parse_scenario_id(std::string_view text) {
  const auto& ids = scenario_ids();
  for (std::size_t k = 0; k < ids.size(); ++k) {
    if (ids[k] == text) return static_cast<ScenarioId>(k);
  }
  std::string valid;
  for (const auto& id : ids) valid += (valid.empty() ? "" : ", ") + id;
  throw ConfigError("unknown scenario '" + std::string(text) + "'; valid ids: " + valid);
}

std::string_view to_string(InitialKind kind) {
  switch (kind) {
    case InitialKind::preset: return "preset";
    case InitialKind::random: return "random";
    case InitialKind::linear: return "linear";
  }
  return "?";
}

std::string_view to_string(FluxOrder order) {
  switch (order) {
    case FluxOrder::zeroth: return "zeroth";
    case FluxOrder::first: return "first";
    case FluxOrder::second: return "second";
  }
  return "?";
}

std::string_view to_string(BoundaryKind kind) {
  return kind == BoundaryKind::dirichlet ? "dirichlet" : "zero_flux_robin";
}

std::string_view to_string(CoefficientSampling sampling) {
  return sampling == CoefficientSampling::cell_average ? "cell_average" : "cell_center";
}

void ScenarioConfig::validate() const {
  if (n_cells < 2) throw ConfigError("grid.n_cells must be at least 2");
  if (!(domain_lo < domain_hi)) throw ConfigError("grid.domain must satisfy lo < hi");
  if (!(epsilon > 0.0)) throw ConfigError("physics.epsilon must be positive");
  if (species.empty()) throw ConfigError("physics.species must not be empty");
  for (std::size_t i = 0; i < species.size(); ++i) {
    const auto& s = species[i];
    const auto where = "physics.species[" + std::to_string(i) + "]";
    if (!(s.diffusion > 0.0)) throw ConfigError(where + ".diffusion must be positive");
    if (s.c_left < 0.0 || s.c_right < 0.0) throw ConfigError(where + ": wall densities must be non-negative");
  }
  if (is_channel(scenario)) {
    if (!geometry) throw ConfigError("geometry section is required by scenario " + std::string(to_string(scenario)));
    channel_of(*geometry).validate();
  } else if (geometry) {
    throw ConfigError("geometry section is not used by scenario " + std::string(to_string(scenario)));
  }
  if (is_bump(scenario) != charge_scale.has_value()) {
    throw ConfigError(is_bump(scenario) ? "charge.scale is required by scenario " + std::string(to_string(scenario))
                                        : "charge section is not used by scenario " + std::string(to_string(scenario)));
  }
  if (scenario == ScenarioId::ex4_1) {
    if (species.size() != 2) throw ConfigError("scenario ex4_1 needs exactly 2 species");
    if (boundary != BoundaryKind::dirichlet) throw ConfigError("scenario ex4_1 needs boundary.kind = dirichlet");
    if (domain_lo != 0.0 || domain_hi != 1.0) throw ConfigError("scenario ex4_1 lives on grid.domain = [0, 1]");
  }
  if (is_channel(scenario) && (domain_lo != 0.0 || domain_hi != 1.0)) {
    throw ConfigError("channel scenarios live on grid.domain = [0, 1]");
  }
  if (boundary == BoundaryKind::zero_flux_robin && !(eta > 0.0)) {
    throw ConfigError("boundary.eta must be positive");
  }
  if (!(tau > 0.0)) throw ConfigError("time.tau must be positive");
  if (!t_end && !steady_tol) throw ConfigError("time needs t_end or steady_tol");
  if (t_end && !(*t_end > 0.0)) throw ConfigError("time.t_end must be positive");
  if (steady_tol && !(*steady_tol > 0.0)) throw ConfigError("time.steady_tol must be positive");
  if (max_steps == 0) throw ConfigError("time.max_steps must be positive");
  if (series_stride == 0) throw ConfigError("output.series_stride must be positive");
}

ScenarioConfig default_config(ScenarioId id) {
  ScenarioConfig c;
  c.scenario = id;
  switch (id) {
    case ScenarioId::ex4_1:
      c.n_cells = 40;
      c.epsilon = 1.0;
      c.species = {{1.0, 1.0, 0.0, 0.0}, {-1.0, 1.0, 0.0, 0.0}};
      c.boundary = BoundaryKind::dirichlet;
      c.voltage = ManufacturedSolution::right_potential(0.0);
      c.tau = 1.0 / (40.0 * 40.0);
      c.t_end = 1.0;
      c.sampling = CoefficientSampling::cell_center;
      break;
    case ScenarioId::ex4_2:
    case ScenarioId::ex4_3:
    case ScenarioId::custom:
      c.n_cells = 100;
      c.epsilon = 5e-5;
      c.species = {{1.0, 1.0, 0.5, 0.4}, {-1.0, 1.0, 0.5, 0.4}};
      c.geometry = GeometryConfig{20.0, 0.2, 0.2, id == ScenarioId::ex4_2 ? 0.2 : (id == ScenarioId::custom ? 0.1 : 0.0)};
      c.boundary = BoundaryKind::dirichlet;
      c.voltage = 0.5;
      c.tau = 5e-5;
      c.steady_tol = 1e-6;
      break;
    case ScenarioId::ex4_4:
    case ScenarioId::ex4_5:
      c.n_cells = 200;
      c.domain_lo = -10.0;
      c.domain_hi = 10.0;
      c.epsilon = 0.1;
      c.species = {{2.0, 20.0, 0.5, 0.5}, {-3.0, 20.0, 0.5, 0.5}, {1.0, 20.0, 0.5, 0.5}};
      c.charge_scale = 1.0;
      c.tau = 1e-3;
      if (id == ScenarioId::ex4_4) {
        c.boundary = BoundaryKind::dirichlet;
        c.steady_tol = 1e-7;
      } else {
        c.boundary = BoundaryKind::zero_flux_robin;
        c.eta = 0.1;
        c.psi_minus = -0.1;
        c.psi_plus = 0.1;
        c.t_end = 15.0;
      }
      break;
  }
  if (id == ScenarioId::custom) c.initial = InitialKind::linear;
  return c;
}

double ManufacturedSolution::area(double x) { return (5.0 - 4.0 * x) * (5.0 - 4.0 * x); }

double ManufacturedSolution::c1(double x, double t) { return x * x * (1.0 - x) * std::exp(-t); }

double ManufacturedSolution::c2(double x, double t) { return x * x * (1.0 - x) * (1.0 - x) * std::exp(-t); }

double ManufacturedSolution::psi(double x, double t) {
  return -std::pow(x, 5) * (3.0 - 2.0 * x) / 60.0 * std::exp(-t);
}

double ManufacturedSolution::f1(double x, double t) {
  const double x2 = x * x;
  const double x3 = x2 * x;
  const double x4 = x3 * x;
  const double x5 = x4 * x;
  const double x6 = x5 * x;
  const double x7 = x6 * x;
  return (4.0 * x4 - 9.0 * x3 + 53.0 * x2 - 54.0 * x + 10.0) / (4.0 * x - 5.0) * std::exp(-t) +
         (40.0 * x7 - 71.0 * x6 + 30.0 * x5) / 20.0 * std::exp(-2.0 * t);
}

double ManufacturedSolution::f2(double x, double t) {
  const double x2 = x * x;
  const double x3 = x2 * x;
  const double x4 = x3 * x;
  const double x5 = x4 * x;
  const double x6 = x5 * x;
  const double x7 = x6 * x;
  const double x8 = x7 * x;
  return (4.0 * x5 - 13.0 * x4 + 94.0 * x3 - 161.0 * x2 + 84.0 * x - 10.0) / (5.0 - 4.0 * x) * std::exp(-t) +
         (22.0 * x8 - 60.0 * x7 + 53.0 * x6 - 15.0 * x5) / 10.0 * std::exp(-2.0 * t);
}

double ManufacturedSolution::f3(double x, double t) { return -2.0 * x * x * x * x / 5.0 * std::exp(-t); }

double ManufacturedSolution::right_potential(double t) { return -std::exp(-t) / 60.0; }

SystemSpec manufactured_system(std::size_t n_cells, FluxOrder order, CoefficientSampling sampling) {
  SystemSpec s;
  s.grid = build_grid(n_cells, 0.0, 1.0);
  s.species = {SpeciesSpec{1.0, PiecewiseCoefficient::constant(1.0), 0.0, 0.0},
               SpeciesSpec{-1.0, PiecewiseCoefficient::constant(1.0), 0.0, 0.0}};
  s.epsilon = 1.0;
  s.area = PiecewiseCoefficient::smooth(&ManufacturedSolution::area);
  s.charge = PiecewiseCoefficient::constant(0.0);
  s.tau = s.grid.h() * s.grid.h();
  s.bc_kind = BoundaryKind::dirichlet;
  s.flux_order = order;
  s.sampling = sampling;
  s.psi_left = 0.0;
  s.voltage_of_t = &ManufacturedSolution::right_potential;
  s.sources = {&ManufacturedSolution::f1, &ManufacturedSolution::f2};
  s.poisson_source = &ManufacturedSolution::f3;
  return s;
}

SystemSpec build_system(const ScenarioConfig& cfg) {
  cfg.validate();
  if (cfg.scenario == ScenarioId::ex4_1) {
    SystemSpec s = manufactured_system(cfg.n_cells, cfg.flux_order, cfg.sampling);
    s.tau = cfg.tau;
    s.epsilon = cfg.epsilon;
    for (std::size_t i = 0; i < 2; ++i) {
      s.species[i].valence = cfg.species[i].valence;
      s.species[i].diffusion = PiecewiseCoefficient::constant(cfg.species[i].diffusion);
    }
    return s;
  }

  SystemSpec s;
  s.grid = build_grid(cfg.n_cells, cfg.domain_lo, cfg.domain_hi);
  s.epsilon = cfg.epsilon;
  s.tau = cfg.tau;
  s.bc_kind = cfg.boundary;
  s.flux_order = cfg.flux_order;
  s.sampling = cfg.sampling;
  s.psi_left = cfg.psi_left;
  s.voltage = cfg.voltage;
  s.eta = cfg.eta;
  s.psi_minus = cfg.psi_minus;
  s.psi_plus = cfg.psi_plus;

  if (is_channel(cfg.scenario)) {
    const auto geom = channel_of(*cfg.geometry);
    s.area = channel_area(geom);
    s.charge = channel_charge(cfg.geometry->q0, geom);
  } else {
    const double scale = *cfg.charge_scale;
    s.area = PiecewiseCoefficient::smooth([](double x) { return 1.0 + x * x; });
    s.charge = PiecewiseCoefficient::smooth([scale](double x) { return scale * quartic_bump(x); });
  }
  for (const auto& sc : cfg.species) {
    SpeciesSpec sp;
    sp.valence = sc.valence;
    sp.c_left = sc.c_left;
    sp.c_right = sc.c_right;
    if (is_bump(cfg.scenario)) {
      const double d0 = sc.diffusion;
      sp.diffusion = PiecewiseCoefficient::smooth([d0](double x) { return d0 * (1.0 - 0.9 * quartic_bump(x)); });
    } else {
      sp.diffusion = PiecewiseCoefficient::constant(sc.diffusion);
    }
    s.species.push_back(std::move(sp));
  }
  return s;
}

State initial_state(const PnpModel& model, const ScenarioConfig& cfg) {
  const std::size_t m = cfg.species.size();
  const Grid& g = model.grid();
  if (cfg.initial == InitialKind::random) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::vector<double>> c(m, std::vector<double>(g.size()));
    for (auto& ci : c) {
      for (auto& v : ci) {
        do {
          v = unit(rng);
        } while (v == 0.0);
      }
    }
    return model.initialize(std::move(c));
  }

  std::vector<PiecewiseCoefficient> profiles;
  if (cfg.initial == InitialKind::linear) {
    const double lo = cfg.domain_lo;
    const double len = cfg.domain_hi - cfg.domain_lo;
    for (const auto& s : cfg.species) {
      const double a = s.c_left;
      const double b = s.c_right;
      profiles.push_back(PiecewiseCoefficient::smooth([=](double x) { return a + (b - a) * (x - lo) / len; }));
    }
    return model.initialize(profiles);
  }

  switch (cfg.scenario) {
    case ScenarioId::ex4_1:
      profiles = {PiecewiseCoefficient::smooth([](double x) { return ManufacturedSolution::c1(x, 0.0); }),
                  PiecewiseCoefficient::smooth([](double x) { return ManufacturedSolution::c2(x, 0.0); })};
      break;
    case ScenarioId::ex4_2:
    case ScenarioId::ex4_3:
    case ScenarioId::custom:
      for (std::size_t i = 0; i < m; ++i) {
        profiles.push_back(PiecewiseCoefficient::smooth([](double x) { return 0.5 - 0.1 * x; }));
      }
      break;
    case ScenarioId::ex4_4:
    case ScenarioId::ex4_5: {
      if (m != 3) throw ConfigError("initial.kind = preset needs exactly 3 species for " + std::string(to_string(cfg.scenario)));
      profiles = {PiecewiseCoefficient::smooth([](double x) { return 0.5 - 0.5 * quartic_bump(x + 4.0); }),
                  PiecewiseCoefficient::smooth([](double x) { return 0.5 + 2.0 * quartic_bump(x); }),
                  PiecewiseCoefficient::smooth([](double x) { return 0.5 + quartic_bump(x - 4.0); })};
      break;
    }
  }
  return model.initialize(profiles);
}

RunOutcome run_scenario(const PnpModel& model, const ScenarioConfig& cfg, State initial,
                        const StepObserver& observer) {
  std::size_t limit = cfg.max_steps;
  if (cfg.t_end) limit = std::min<std::size_t>(limit, static_cast<std::size_t>(std::llround(*cfg.t_end / cfg.tau)));
  if (cfg.steady_tol) {
    const auto res = model.run_to_steady(std::move(initial), *cfg.steady_tol, limit, observer);
    return RunOutcome{res.state, res.steps, res.converged, res.last_dpsi};
  }
  RunOutcome out;
  out.state = std::move(initial);
  for (std::size_t k = 1; k <= limit; ++k) {
    State next = model.step(out.state);
    out.last_dpsi = max_abs_difference(next.psi, out.state.psi);
    if (observer) observer(StepRecord{out.state, next, out.last_dpsi});
    out.state = std::move(next);
    out.steps = k;
  }
  return out;
}

ConvergenceReport convergence_study(const std::vector<std::size_t>& ns, const ConvergenceOptions& options) {
  if (ns.empty()) throw ConfigError("convergence_study: no resolutions given");
  for (std::size_t k = 0; k < ns.size(); ++k) {
    if (ns[k] < 4) throw ConfigError("convergence_study: every N must be at least 4");
    if (k > 0 && ns[k] <= ns[k - 1]) throw ConfigError("convergence_study: N must be strictly increasing");
  }

  ConvergenceReport report;
  report.fields = {"c1", "c2", "psi"};
  report.rows.resize(ns.size());

  // Resolutions are independent; run them concurrently, each serially inside.
  for_each_index(ns.size(), options.exec, [&](std::size_t k) {
    const std::size_t n = ns[k];
    const PnpModel model(manufactured_system(n, options.flux_order, options.sampling), Execution::serial);
    const Grid& g = model.grid();
    State state = model.initialize(std::vector<PiecewiseCoefficient>{
        PiecewiseCoefficient::smooth([](double x) { return ManufacturedSolution::c1(x, 0.0); }),
        PiecewiseCoefficient::smooth([](double x) { return ManufacturedSolution::c2(x, 0.0); })});
    const auto steps = static_cast<std::size_t>(std::llround(options.t_final / model.spec().tau));
    std::vector<double> driving_psi = state.psi;
    for (std::size_t s = 0; s < steps; ++s) {
      driving_psi = state.psi;
      state = model.step(state);
    }
    const double t = state.t;

    auto reference = [&](double (*exact)(double, double)) {
      if (options.reference == ErrorReference::cell_center) {
        std::vector<double> v(g.size());
        for (std::size_t j = 0; j < g.size(); ++j) v[j] = exact(g.center(j), t);
        return v;
      }
      return cell_averages(PiecewiseCoefficient::smooth([=](double x) { return exact(x, t); }), g, Execution::serial);
    };
    ConvergenceRow row;
    row.n_cells = n;
    row.errors = {max_abs_difference(state.c[0], reference(&ManufacturedSolution::c1)),
                  max_abs_difference(state.c[1], reference(&ManufacturedSolution::c2)),
                  max_abs_difference(driving_psi, reference(&ManufacturedSolution::psi))};
    report.rows[k] = std::move(row);
  });

  for (std::size_t k = 0; k < report.rows.size(); ++k) {
    auto& row = report.rows[k];
    row.orders.assign(row.errors.size(), std::nullopt);
    if (k == 0) continue;
    const auto& prev = report.rows[k - 1];
    const double ratio = static_cast<double>(row.n_cells) / static_cast<double>(prev.n_cells);
    for (std::size_t f = 0; f < row.errors.size(); ++f) {
      row.orders[f] = std::log(prev.errors[f] / row.errors[f]) / std::log(ratio);
    }
  }
  return report;
}

std::vector<SteadyRow> steady_sweep(const std::vector<ScenarioConfig>& configs, Execution exec) {
  std::vector<SteadyRow> rows(configs.size());
  for_each_index(configs.size(), exec, [&](std::size_t k) {
    const auto& cfg = configs[k];
    if (!cfg.steady_tol) throw ConfigError("steady_sweep: time.steady_tol is required");
    const auto start = std::chrono::steady_clock::now();
    const PnpModel model(build_system(cfg), Execution::serial);
    SteadyRow row;
    if (cfg.geometry) {
      row.r_c = cfg.geometry->r_c;
      row.l_c = cfg.geometry->l_c;
      row.q0 = cfg.geometry->q0;
    }
    row.result = model.run_to_steady(initial_state(model, cfg), *cfg.steady_tol, cfg.max_steps);
    row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rows[k] = std::move(row);
  });
  return rows;
}

std::vector<IvPoint> iv_sweep(const ScenarioConfig& base, const std::vector<double>& voltages, Execution exec) {
  if (base.boundary != BoundaryKind::dirichlet) throw ConfigError("iv_sweep: needs Dirichlet boundaries");
  if (!base.steady_tol) throw ConfigError("iv_sweep: time.steady_tol is required");
  std::vector<IvPoint> out(voltages.size());
  for_each_index(voltages.size(), exec, [&](std::size_t k) {
    ScenarioConfig cfg = base;
    cfg.voltage = voltages[k];
    const PnpModel model(build_system(cfg), Execution::serial);
    const auto res = model.run_to_steady(initial_state(model, cfg), *cfg.steady_tol, cfg.max_steps);
    const auto profile = model.current_profile(res.state);
    out[k] = IvPoint{voltages[k], mean(profile), res.steps, res.converged};
  });
  return out;
}

double mean(std::span<const double> v) {
  double s = 0.0;
  for (double e : v) s += e;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ConfigError("fit_line: need at least two (x, y) pairs");
  const double mx = mean(x);
  const double my = mean(y);
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
    syy += (y[k] - my) * (y[k] - my);
  }
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

}  // namespace pnpfv
