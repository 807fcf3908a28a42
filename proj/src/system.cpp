#include "pnpfv/system.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <string>

#include "pnpfv/error.hpp"

namespace pnpfv {

void SystemSpec::validate() const {
  if (species.empty()) throw ConfigError("system: at least one species is required");
  if (!(tau > 0.0)) throw ConfigError("system: tau must be positive");
  if (!(epsilon > 0.0)) throw ConfigError("system: epsilon must be positive");
  if (bc_kind == BoundaryKind::zero_flux_robin && !(eta > 0.0)) {
    throw ConfigError("system: eta must be positive");
  }
  if (bc_kind == BoundaryKind::dirichlet) {
    for (const auto& s : species) {
      if (s.c_left < 0.0 || s.c_right < 0.0) {
        throw DomainError("system: Dirichlet densities must be non-negative");
      }
    }
  }
  if (!sources.empty() && sources.size() != species.size()) {
    throw ConfigError("system: need one source entry per species");
  }
}

double State::min_density() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& ci : c) {
    for (double v : ci) m = std::min(m, v);
  }
  return m;
}

double max_abs_difference(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

PnpModel::PnpModel(SystemSpec spec, Execution exec) : spec_(std::move(spec)), exec_(exec) {
  spec_.validate();
  const Grid& g = spec_.grid;
  if (spec_.sampling == CoefficientSampling::cell_average) {
    area_cell_ = cell_averages(spec_.area, g, exec_);
    rho_cell_ = cell_averages(spec_.charge, g, exec_);
  } else {
    area_cell_ = center_values(spec_.area, g);
    rho_cell_ = center_values(spec_.charge, g);
  }
  area_face_ = face_values(spec_.area, g);
  for (double a : area_cell_) {
    if (!(a > 0.0)) throw ConfigError("system: area must be positive");
  }
  for (double a : area_face_) {
    if (!(a > 0.0)) throw ConfigError("system: area must be positive");
  }
  b_face_.reserve(spec_.species.size());
  for (const auto& s : spec_.species) {
    auto d = face_values(s.diffusion, g);
    for (std::size_t k = 0; k < d.size(); ++k) d[k] *= area_face_[k];
    b_face_.push_back(std::move(d));
  }
}

State PnpModel::initialize(const std::vector<PiecewiseCoefficient>& initial) const {
  if (initial.size() != species_count()) {
    throw ConfigError("initialize: need one initial profile per species");
  }
  std::vector<std::vector<double>> c;
  c.reserve(initial.size());
  for (const auto& f : initial) c.push_back(cell_averages(f, grid(), exec_));
  return initialize(std::move(c));
}

State PnpModel::initialize(std::vector<std::vector<double>> initial) const {
  if (initial.size() != species_count()) {
    throw ConfigError("initialize: need one initial profile per species");
  }
  for (const auto& ci : initial) {
    if (ci.size() != grid().size()) throw ConfigError("initialize: profile length mismatch");
    for (double v : ci) {
      if (!(v >= 0.0)) throw DomainError("initialize: initial densities must be non-negative");
    }
  }
  State s;
  s.t = 0.0;
  s.step_index = 0;
  s.c = std::move(initial);
  s.psi = solve_potential(s.c, 0.0);
  return s;
}

PoissonProblem PnpModel::poisson_problem(double t) const {
  PoissonProblem p;
  p.h = grid().h();
  p.a_cell = area_cell_;
  p.a_face = area_face_;
  p.epsilon = spec_.epsilon;
  if (spec_.bc_kind == BoundaryKind::dirichlet) {
    const auto closure = spec_.flux_order == FluxOrder::second ? PoissonBoundary::Closure::second
                                                                : PoissonBoundary::Closure::first;
    p.bc = PoissonBoundary::dirichlet(spec_.psi_left, spec_.right_potential(t), closure);
  } else {
    p.bc = PoissonBoundary::robin(spec_.eta, spec_.psi_minus, spec_.psi_plus);
  }
  return p;
}

std::vector<double> PnpModel::net_charge(const std::vector<std::vector<double>>& c, double t) const {
  const std::size_t n = grid().size();
  std::vector<double> s(n);
  for (std::size_t j = 0; j < n; ++j) {
    double v = -rho_cell_[j];
    for (std::size_t i = 0; i < c.size(); ++i) v += spec_.species[i].valence * c[i][j];
    if (spec_.poisson_source) v += spec_.poisson_source(grid().center(j), t);
    s[j] = v;
  }
  return s;
}

std::vector<double> PnpModel::solve_potential(const std::vector<std::vector<double>>& c, double t) const {
  return solve_poisson(poisson_problem(t), net_charge(c, t));
}

TransportProblem PnpModel::transport_problem(std::size_t i, std::span<const double> psi, double t) const {
  const std::size_t n = grid().size();
  const auto& sp = spec_.species[i];
  const double z = sp.valence;

  TransportProblem p;
  p.h = grid().h();
  p.a_cell = area_cell_;
  p.b_face = b_face_[i];
  p.tau = spec_.tau;
  p.flux_order = spec_.flux_order;
  p.phi_cell.resize(n);
  p.phi_face.resize(n + 1);
  for (std::size_t j = 0; j < n; ++j) p.phi_cell[j] = -z * psi[j];
  for (std::size_t k = 1; k < n; ++k) p.phi_face[k] = -z * 0.5 * (psi[k - 1] + psi[k]);
  if (spec_.bc_kind == BoundaryKind::dirichlet) {
    p.bc = BoundarySpec::dirichlet(sp.c_left, sp.c_right);
    p.phi_face[0] = -z * spec_.psi_left;
    p.phi_face[n] = -z * spec_.right_potential(t);
  } else {
    p.bc = BoundarySpec::zero_flux();
    // Wall faces carry no flux; the values only need to be finite.
    p.phi_face[0] = p.phi_cell[0];
    p.phi_face[n] = p.phi_cell[n - 1];
  }
  if (!spec_.sources.empty() && spec_.sources[i]) {
    p.source_cell.resize(n);
    for (std::size_t j = 0; j < n; ++j) p.source_cell[j] = spec_.sources[i](grid().center(j), t);
  }
  return p;
}

std::vector<double> PnpModel::transport_species(std::size_t i, const State& state,
                                                std::span<const double> psi) const {
  // Sources are taken at the old time level t_n.
  return pnpfv::step(transport_problem(i, psi, state.t), state.c[i]);
}

State PnpModel::step_with_potential(const State& state, std::span<const double> psi_drive) const {
  const std::size_t m = species_count();
  if (psi_drive.size() != grid().size()) throw ConfigError("step: potential length mismatch");

  State next;
  next.c.resize(m);
  if (exec_ == Execution::parallel && m > 1) {
    // Species solves are independent given psi^n.
    std::exception_ptr failure;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(m); ++i) {
      try {
        next.c[static_cast<std::size_t>(i)] = transport_species(static_cast<std::size_t>(i), state, psi_drive);
      } catch (...) {
#pragma omp critical(pnpfv_step_failure)
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  } else {
    for (std::size_t i = 0; i < m; ++i) next.c[i] = transport_species(i, state, psi_drive);
  }
  next.step_index = state.step_index + 1;
  next.t = static_cast<double>(next.step_index) * spec_.tau;
  next.psi = solve_potential(next.c, next.t);
  return next;
}

State PnpModel::step(const State& state) const { return step_with_potential(state, state.psi); }

double PnpModel::total_mass(const State& state, std::size_t i) const {
  const double h = grid().h();
  double m = 0.0;
  for (std::size_t j = 0; j < grid().size(); ++j) m += h * area_cell_[j] * state.c[i][j];
  return m;
}

double PnpModel::discrete_energy(const State& state) const {
  if (spec_.bc_kind != BoundaryKind::zero_flux_robin) {
    throw ConfigError("discrete_energy: only defined for zero-flux/Robin boundaries");
  }
  const double h = grid().h();
  const std::size_t n = grid().size();
  const auto s = net_charge(state.c, state.t);
  double e = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double entropy = 0.0;
    for (const auto& ci : state.c) {
      const double v = ci[j];
      if (v < 0.0) throw DomainError("discrete_energy: negative density");
      if (v > 0.0) entropy += v * std::log(v);
    }
    e += h * area_cell_[j] * (entropy + 0.5 * s[j] * state.psi[j]);
  }
  e += spec_.epsilon / (2.0 * spec_.eta) *
       (spec_.psi_plus * area_face_[n] * state.psi[n - 1] + spec_.psi_minus * area_face_[0] * state.psi[0]);
  return e;
}

double PnpModel::dissipation_rate(const State& state, const std::vector<std::vector<double>>& c_next) const {
  const double h = grid().h();
  const std::size_t n = grid().size();
  double total = 0.0;
  for (std::size_t i = 0; i < species_count(); ++i) {
    const double z = spec_.species[i].valence;
    const auto& c = c_next[i];
    for (double v : c) {
      if (v < 0.0) throw DomainError("dissipation_rate: negative density");
    }
    for (std::size_t k = 1; k < n; ++k) {
      const double a = c[k - 1];
      const double b = c[k];
      if (a == 0.0 && b == 0.0) continue;
      if (a == 0.0 || b == 0.0) return std::numeric_limits<double>::infinity();
      // Work with logs so large z psi does not overflow before the product.
      const double log_a = std::log(a) + z * state.psi[k - 1];
      const double log_b = std::log(b) + z * state.psi[k];
      const double diff = std::exp(log_b) - std::exp(log_a);
      total += b_face_[i][k] / h * diff * (log_b - log_a);
    }
  }
  return total;
}

std::vector<double> PnpModel::current_profile(const State& state) const {
  const std::size_t n = grid().size();
  std::vector<double> j_face(n - 1, 0.0);
  for (std::size_t i = 0; i < species_count(); ++i) {
    const double z = spec_.species[i].valence;
    if (z == 0.0) continue;
    const auto p = transport_problem(i, state.psi, state.t);
    for (std::size_t k = 1; k < n; ++k) j_face[k - 1] -= z * interior_flux(p, state.c[i], k);
  }
  return j_face;
}

SteadyResult PnpModel::run_to_steady(State state, double tol, std::size_t max_steps,
                                     const StepObserver& observer) const {
  if (!(tol > 0.0)) throw ConfigError("run_to_steady: tol must be positive");
  SteadyResult out;
  for (std::size_t k = 1; k <= max_steps; ++k) {
    State next = step(state);
    const double dpsi = max_abs_difference(next.psi, state.psi);
    if (observer) observer(StepRecord{state, next, dpsi});
    state = std::move(next);
    out.steps = k;
    out.last_dpsi = dpsi;
    if (dpsi <= tol) {
      out.converged = true;
      break;
    }
  }
  out.t_s = state.t;
  out.state = std::move(state);
  return out;
}

}  // namespace pnpfv
