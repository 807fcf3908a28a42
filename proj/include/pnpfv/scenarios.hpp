#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pnpfv/execution.hpp"
#include "pnpfv/system.hpp"

namespace pnpfv {

enum class ScenarioId { ex4_1, ex4_2, ex4_3, ex4_4, ex4_5, custom };

/// ex4_1  manufactured solution on [0,1], Dirichlet data, two species
/// ex4_2  funnel/channel geometry with permanent charge, Dirichlet data
/// ex4_3  same geometry, no permanent charge
/// ex4_4  three species on [-10,10], A = 1 + x^2, bump-shaped charge, Dirichlet
/// ex4_5  the ex4_4 system with zero-flux/Robin walls
/// custom channel geometry, any species list, either boundary kind
std::string_view to_string(ScenarioId id);
ScenarioId parse_scenario_id(std::string_view text);
const std::vector<std::string>& scenario_ids();

enum class InitialKind { preset, random, linear };
std::string_view to_string(InitialKind kind);
std::string_view to_string(FluxOrder order);
std::string_view to_string(BoundaryKind kind);
std::string_view to_string(CoefficientSampling sampling);

struct SpeciesConfig {
  double valence = 1.0;
  /// Constant D for channel scenarios; amplitude D0 of D0 (1 - 0.9 e^{-x^4})
  /// for ex4_4/ex4_5.
  double diffusion = 1.0;
  double c_left = 0.0;
  double c_right = 0.0;

  bool operator==(const SpeciesConfig&) const = default;
};

struct GeometryConfig {
  double r_f = 20.0;
  double r_c = 0.2;
  double l_c = 0.2;
  double q0 = 0.0;

  bool operator==(const GeometryConfig&) const = default;
};

struct ScenarioConfig {
  ScenarioId scenario = ScenarioId::ex4_2;

  std::size_t n_cells = 100;
  double domain_lo = 0.0;
  double domain_hi = 1.0;

  double epsilon = 5e-5;
  std::vector<SpeciesConfig> species;

  std::optional<GeometryConfig> geometry;  // channel scenarios
  std::optional<double> charge_scale;      // ex4_4 / ex4_5: rho = C e^{-x^4}

  BoundaryKind boundary = BoundaryKind::dirichlet;
  double psi_left = 0.0;
  double voltage = 0.0;
  double eta = 0.1;
  double psi_minus = 0.0;
  double psi_plus = 0.0;

  double tau = 5e-5;
  std::optional<double> t_end;
  std::optional<double> steady_tol;
  std::size_t max_steps = 1'000'000;

  FluxOrder flux_order = FluxOrder::first;
  CoefficientSampling sampling = CoefficientSampling::cell_average;

  InitialKind initial = InitialKind::preset;
  std::uint64_t seed = 1;

  std::string out_dir = "out";
  std::size_t series_stride = 1;

  bool operator==(const ScenarioConfig&) const = default;
  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Parameters of the given scenario as published, ready to override.
ScenarioConfig default_config(ScenarioId id);

SystemSpec build_system(const ScenarioConfig& cfg);
State initial_state(const PnpModel& model, const ScenarioConfig& cfg);

struct RunOutcome {
  State state;
  std::size_t steps = 0;
  bool steady = false;  // stopped by steady_tol rather than t_end / max_steps
  double last_dpsi = 0.0;
};

/// Steps until t_end (rounded to whole steps), the steady criterion, or
/// max_steps, whichever comes first.
RunOutcome run_scenario(const PnpModel& model, const ScenarioConfig& cfg, State initial,
                        const StepObserver& observer = {});

/// Closed forms of the manufactured two-species problem on [0, 1].
struct ManufacturedSolution {
  static double area(double x);
  static double c1(double x, double t);
  static double c2(double x, double t);
  static double psi(double x, double t);
  static double f1(double x, double t);
  static double f2(double x, double t);
  static double f3(double x, double t);
  static double right_potential(double t);
};

/// SystemSpec of the manufactured problem with N cells and tau = h^2.
SystemSpec manufactured_system(std::size_t n_cells, FluxOrder order,
                               CoefficientSampling sampling = CoefficientSampling::cell_center);

enum class ErrorReference { cell_center, cell_average };

struct ConvergenceOptions {
  FluxOrder flux_order = FluxOrder::first;
  CoefficientSampling sampling = CoefficientSampling::cell_center;
  ErrorReference reference = ErrorReference::cell_center;
  double t_final = 1.0;
  Execution exec = Execution::parallel;
};

struct ConvergenceRow {
  std::size_t n_cells = 0;
  std::vector<double> errors;                 // c_1, c_2, psi
  std::vector<std::optional<double>> orders;  // log2(e_prev / e), empty on the first row
};

struct ConvergenceReport {
  std::vector<std::string> fields;
  std::vector<ConvergenceRow> rows;
};

/// Runs the manufactured problem to t_final with tau = h^2 for each N and
/// reports max-norm errors. Densities are compared at the final level; the
/// potential reported is the one that drove the final step.
ConvergenceReport convergence_study(const std::vector<std::size_t>& ns, const ConvergenceOptions& options = {});

struct SteadyRow {
  double r_c = 0.0;
  double l_c = 0.0;
  double q0 = 0.0;
  SteadyResult result;
  double wall_seconds = 0.0;
};

/// Runs each config to steady state (steady_tol required). Points run
/// concurrently under Execution::parallel; output order follows input order.
std::vector<SteadyRow> steady_sweep(const std::vector<ScenarioConfig>& configs, Execution exec = Execution::parallel);

struct IvPoint {
  double voltage = 0.0;
  double current = 0.0;
  std::size_t steps = 0;
  bool converged = false;
};

std::vector<IvPoint> iv_sweep(const ScenarioConfig& base, const std::vector<double>& voltages,
                              Execution exec = Execution::parallel);

double mean(std::span<const double> v);

/// Least-squares line through (x, y) and its coefficient of determination.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace pnpfv
