#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "pnpfv/execution.hpp"
#include "pnpfv/mesh.hpp"
#include "pnpfv/poisson.hpp"
#include "pnpfv/transport.hpp"

namespace pnpfv {

using SpaceTimeFunction = std::function<double(double x, double t)>;
using TimeFunction = std::function<double(double t)>;

struct SpeciesSpec {
  double valence = 1.0;
  PiecewiseCoefficient diffusion = PiecewiseCoefficient::constant(1.0);
  /// Wall densities, used by Dirichlet runs only.
  double c_left = 0.0;
  double c_right = 0.0;
};

enum class BoundaryKind {
  dirichlet,        ///< fixed densities and potentials at both walls
  zero_flux_robin,  ///< no ion flux, Robin data for the potential
};

/// How A_j and rho_j are taken from their coefficient functions.
enum class CoefficientSampling { cell_average, cell_center };

struct SystemSpec {
  Grid grid{2, 0.0, 1.0};
  std::vector<SpeciesSpec> species;
  double epsilon = 1.0;
  PiecewiseCoefficient area = PiecewiseCoefficient::constant(1.0);
  PiecewiseCoefficient charge = PiecewiseCoefficient::constant(0.0);
  double tau = 1e-3;
  BoundaryKind bc_kind = BoundaryKind::dirichlet;
  FluxOrder flux_order = FluxOrder::first;
  CoefficientSampling sampling = CoefficientSampling::cell_average;

  // Dirichlet potential: psi_left at the left wall, V at the right wall.
  double psi_left = 0.0;
  double voltage = 0.0;
  /// Time-dependent right-wall potential; overrides `voltage` when set.
  TimeFunction voltage_of_t;

  // Robin data.
  double eta = 1.0;
  double psi_minus = 0.0;
  double psi_plus = 0.0;

  /// Optional manufactured sources: one per species (null entries allowed)
  /// and one added to the Poisson right-hand side.
  std::vector<SpaceTimeFunction> sources;
  SpaceTimeFunction poisson_source;

  std::size_t species_count() const { return species.size(); }
  double right_potential(double t) const { return voltage_of_t ? voltage_of_t(t) : voltage; }
  void validate() const;
};

/// Densities and potential at one time level. `psi` always solves the
/// discrete Poisson problem for `c` at time `t`.
struct State {
  double t = 0.0;
  std::size_t step_index = 0;
  std::vector<std::vector<double>> c;
  std::vector<double> psi;

  double min_density() const;
};

struct SteadyResult {
  State state;
  std::size_t steps = 0;
  double t_s = 0.0;
  double last_dpsi = 0.0;
  bool converged = false;
};

/// Per-step record handed to observers.
struct StepRecord {
  const State& previous;
  const State& current;
  double dpsi_inf;
};
using StepObserver = std::function<void(const StepRecord&)>;

/// The coupled scheme: Poisson for the potential at t_n, then one
/// semi-implicit transport solve per species driven by that potential.
/// Discretised coefficients are computed once at construction.
class PnpModel {
 public:
  explicit PnpModel(SystemSpec spec, Execution exec = Execution::parallel);

  const SystemSpec& spec() const { return spec_; }
  const Grid& grid() const { return spec_.grid; }
  std::size_t species_count() const { return spec_.species.size(); }
  Execution execution() const { return exec_; }

  std::span<const double> area_cell() const { return area_cell_; }
  std::span<const double> area_face() const { return area_face_; }
  std::span<const double> rho_cell() const { return rho_cell_; }

  /// Cell averages of the initial profiles; throws DomainError on negative data.
  State initialize(const std::vector<PiecewiseCoefficient>& initial) const;
  State initialize(std::vector<std::vector<double>> initial) const;

  PoissonProblem poisson_problem(double t) const;
  /// S_j = sum_i z_i c_ij - rho_j (+ manufactured Poisson source at t).
  std::vector<double> net_charge(const std::vector<std::vector<double>>& c, double t) const;
  std::vector<double> solve_potential(const std::vector<std::vector<double>>& c, double t) const;

  /// Transport problem of species i driven by potential psi at time t.
  TransportProblem transport_problem(std::size_t i, std::span<const double> psi, double t) const;

  State step(const State& state) const;
  /// Transport sub-step driven by an arbitrary potential instead of state.psi.
  State step_with_potential(const State& state, std::span<const double> psi_drive) const;

  double total_mass(const State& state, std::size_t i) const;
  /// Discrete free energy; zero-flux/Robin runs only. 0 log 0 is taken as 0.
  double discrete_energy(const State& state) const;
  /// I_h for the step state -> c_next. +infinity when a face pairs a zero
  /// and a positive Slotboom value.
  double dissipation_rate(const State& state, const std::vector<std::vector<double>>& c_next) const;
  /// J at the n-1 interior faces from (c^n, psi^n).
  std::vector<double> current_profile(const State& state) const;

  SteadyResult run_to_steady(State state, double tol, std::size_t max_steps,
                             const StepObserver& observer = {}) const;

 private:
  std::vector<double> transport_species(std::size_t i, const State& state,
                                        std::span<const double> psi) const;

  SystemSpec spec_;
  Execution exec_;
  std::vector<double> area_cell_;
  std::vector<double> area_face_;
  std::vector<double> rho_cell_;
  std::vector<std::vector<double>> b_face_;  // A_{j+1/2} D_i(x_{j+1/2}) per species
};

double max_abs_difference(std::span<const double> a, std::span<const double> b);

}  // namespace pnpfv
