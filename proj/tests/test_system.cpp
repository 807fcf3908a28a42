#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "pnpfv/error.hpp"
#include "pnpfv/scenarios.hpp"
#include "pnpfv/system.hpp"

using namespace pnpfv;

namespace {

SystemSpec two_species(BoundaryKind kind, std::size_t n = 40) {
  SystemSpec s;
  s.grid = build_grid(n, 0.0, 1.0);
  s.species = {SpeciesSpec{1.0, PiecewiseCoefficient::constant(1.0), 0.5, 0.2},
               SpeciesSpec{-1.0, PiecewiseCoefficient::constant(2.0), 0.5, 0.2}};
  s.epsilon = 0.05;
  s.area = PiecewiseCoefficient::smooth([](double x) { return 1.0 + x * x; });
  s.charge = PiecewiseCoefficient::smooth([](double x) { return 0.3 * std::sin(3.0 * x); });
  s.tau = 1e-3;
  s.bc_kind = kind;
  s.voltage = 0.4;
  s.eta = 0.2;
  s.psi_minus = -0.1;
  s.psi_plus = 0.3;
  return s;
}

std::vector<std::vector<double>> random_densities(std::mt19937_64& rng, std::size_t m, std::size_t n) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::vector<double>> c(m, std::vector<double>(n));
  for (auto& ci : c) {
    for (auto& v : ci) v = 0.05 + unit(rng);
  }
  return c;
}

// Independent adaptive Simpson integrator for the quadrature oracle.
template <typename F>
double simpson(F&& f, double a, double b, double fa, double fm, double fb, double whole, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 1e-16) return left + right + (left + right - whole) / 15.0;
  return simpson(f, a, m, fa, flm, fm, left, depth - 1) + simpson(f, m, b, fm, frm, fb, right, depth - 1);
}

template <typename F>
double simpson(F&& f, double a, double b) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  return simpson(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), 40);
}

}  // namespace

TEST(Initialize, LinearProfileIsExactAtCenters) {
  auto spec = two_species(BoundaryKind::dirichlet, 100);
  const PnpModel model(spec);
  const auto lin = PiecewiseCoefficient::smooth([](double x) { return 0.5 - 0.1 * x; });
  const State s = model.initialize(std::vector<PiecewiseCoefficient>{lin, lin});
  for (std::size_t j = 0; j < 100; ++j) EXPECT_NEAR(s.c[0][j], 0.5 - 0.1 * model.grid().center(j), 1e-15);
  EXPECT_EQ(s.t, 0.0);
  EXPECT_EQ(s.step_index, 0u);
}

TEST(Initialize, ZeroDataPotentialSolvesWithMinusRho) {
  const PnpModel model(two_species(BoundaryKind::dirichlet));
  const State s = model.initialize(std::vector<std::vector<double>>(2, std::vector<double>(40, 0.0)));
  std::vector<double> minus_rho(40);
  for (std::size_t j = 0; j < 40; ++j) minus_rho[j] = -model.rho_cell()[j];
  EXPECT_EQ(s.psi, solve_poisson(model.poisson_problem(0.0), minus_rho));
}

TEST(Initialize, BumpDataMatchesQuadratureOracle) {
  const PnpModel model(build_system(default_config(ScenarioId::ex4_4)));
  const State s = initial_state(model, default_config(ScenarioId::ex4_4));
  auto c1 = [](double x) { return 0.5 - 0.5 * std::exp(-std::pow(x + 4.0, 4)); };
  const Grid& g = model.grid();
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double ref = simpson(c1, g.interface(j), g.interface(j + 1)) / g.h();
    EXPECT_NEAR(s.c[0][j], ref, 1e-12) << "cell " << j;
  }
}

TEST(Initialize, NegativeDataIsADomainError) {
  const PnpModel model(two_species(BoundaryKind::dirichlet));
  auto c = std::vector<std::vector<double>>(2, std::vector<double>(40, 0.1));
  c[1][7] = -1e-12;
  EXPECT_THROW(model.initialize(c), DomainError);
  EXPECT_THROW(model.initialize(std::vector<std::vector<double>>(1, std::vector<double>(40, 0.1))), ConfigError);
}

TEST(Step, NeutralSpeciesIsPureDiffusion) {
  auto spec = two_species(BoundaryKind::zero_flux_robin);
  spec.species = {SpeciesSpec{0.0, PiecewiseCoefficient::constant(1.0), 0.0, 0.0}};
  for (double tau : {1e-2, 10.0}) {
    spec.tau = tau;
    const PnpModel model(spec);
    State s = model.initialize(std::vector<std::vector<double>>{std::vector<double>(40, 0.8)});
    for (int k = 0; k < 5; ++k) s = model.step(s);
    // Elimination rounding grows with lambda = tau / h^2.
    const double lambda = tau * 40.0 * 40.0;
    for (double v : s.c[0]) EXPECT_NEAR(v, 0.8, 1e-15 * std::max(10.0, lambda));
  }
}

TEST(Step, ChannelScenarioStaysNonNegative) {
  const auto cfg = default_config(ScenarioId::ex4_2);
  const PnpModel model(build_system(cfg));
  const State s1 = model.step(initial_state(model, cfg));
  EXPECT_GE(s1.min_density(), 0.0);
  EXPECT_EQ(s1.step_index, 1u);
  EXPECT_DOUBLE_EQ(s1.t, 5e-5);
}

TEST(Step, ArbitraryDrivingPotentialKeepsPositivity) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> wild(-30.0, 30.0);
  for (auto kind : {BoundaryKind::dirichlet, BoundaryKind::zero_flux_robin}) {
    auto spec = two_species(kind);
    spec.tau = 1e3;
    const PnpModel model(spec);
    for (int trial = 0; trial < 50; ++trial) {
      const State s = model.initialize(random_densities(rng, 2, 40));
      std::vector<double> psi(40);
      for (auto& v : psi) v = wild(rng);
      EXPECT_GE(model.step_with_potential(s, psi).min_density(), -1e-13);
    }
  }
}

TEST(Mass, ZeroDensityHasZeroMass) {
  const PnpModel model(two_species(BoundaryKind::dirichlet));
  const State s = model.initialize(std::vector<std::vector<double>>(2, std::vector<double>(40, 0.0)));
  EXPECT_EQ(model.total_mass(s, 0), 0.0);
}

TEST(Mass, ConservedUnderZeroFluxDriftsUnderDirichlet) {
  std::mt19937_64 rng(42);
  const PnpModel robin(two_species(BoundaryKind::zero_flux_robin, 50));
  State s = robin.initialize(random_densities(rng, 2, 50));
  const double m0 = robin.total_mass(s, 0);
  const double m1 = robin.total_mass(s, 1);
  for (int k = 0; k < 10000; ++k) {
    const State next = robin.step(s);
    ASSERT_NEAR(robin.total_mass(next, 0), robin.total_mass(s, 0), 1e-12 * m0);
    s = next;
  }
  EXPECT_NEAR(robin.total_mass(s, 0), m0, 1e-12 * m0);
  EXPECT_NEAR(robin.total_mass(s, 1), m1, 1e-12 * m1);

  const PnpModel dir(two_species(BoundaryKind::dirichlet, 50));
  State d = dir.initialize(random_densities(rng, 2, 50));
  const double d0 = dir.total_mass(d, 0);
  for (int k = 0; k < 100; ++k) d = dir.step(d);
  EXPECT_GT(std::abs(dir.total_mass(d, 0) - d0), 1e-6 * d0);
}

TEST(Energy, ZeroStateHasZeroEnergy) {
  auto spec = two_species(BoundaryKind::zero_flux_robin);
  spec.charge = PiecewiseCoefficient::constant(0.0);
  spec.psi_minus = 0.0;
  spec.psi_plus = 0.0;
  const PnpModel model(spec);
  const State s = model.initialize(std::vector<std::vector<double>>(2, std::vector<double>(40, 0.0)));
  EXPECT_EQ(model.discrete_energy(s), 0.0);
}

TEST(Energy, TwoCellHandComputation) {
  SystemSpec spec;
  spec.grid = build_grid(2, 0.0, 1.0);
  spec.species = {SpeciesSpec{1.0, PiecewiseCoefficient::constant(1.0), 0.0, 0.0}};
  spec.epsilon = 0.5;
  spec.area = PiecewiseCoefficient::constant(2.0);
  spec.charge = PiecewiseCoefficient::constant(0.25);
  spec.bc_kind = BoundaryKind::zero_flux_robin;
  spec.eta = 0.25;
  spec.psi_minus = -1.0;
  spec.psi_plus = 3.0;
  const PnpModel model(spec);
  State s;
  s.c = {{0.5, 2.0}};
  s.psi = {0.1, -0.2};
  // h = 1/2, A = 2: sum_j h A (c log c + (c - 1/4) psi / 2) + eps/(2 eta) (psi+ A psi_2 + psi- A psi_1)
  const double cell1 = 0.5 * 2.0 * (0.5 * std::log(0.5) + 0.5 * 0.25 * 0.1);
  const double cell2 = 0.5 * 2.0 * (2.0 * std::log(2.0) + 0.5 * 1.75 * -0.2);
  const double wall = 0.5 / 0.5 * (3.0 * 2.0 * -0.2 + -1.0 * 2.0 * 0.1);
  EXPECT_NEAR(model.discrete_energy(s), cell1 + cell2 + wall, 1e-15);
}

TEST(Energy, OnlyDefinedForRobin) {
  const PnpModel model(two_species(BoundaryKind::dirichlet));
  const State s = model.initialize(std::vector<std::vector<double>>(2, std::vector<double>(40, 0.1)));
  EXPECT_THROW(model.discrete_energy(s), ConfigError);
}

TEST(Dissipation, EquilibriumAndSign) {
  std::mt19937_64 rng(43);
  const PnpModel model(two_species(BoundaryKind::zero_flux_robin));
  State s = model.initialize(random_densities(rng, 2, 40));
  // c_next_i = K_i e^{-z_i psi} makes every G flat.
  std::vector<std::vector<double>> flat(2, std::vector<double>(40));
  for (std::size_t j = 0; j < 40; ++j) {
    flat[0][j] = 0.3 * std::exp(-s.psi[j]);
    flat[1][j] = 0.7 * std::exp(s.psi[j]);
  }
  EXPECT_NEAR(model.dissipation_rate(s, flat), 0.0, 1e-12);
  for (int trial = 0; trial < 100; ++trial) {
    EXPECT_GE(model.dissipation_rate(s, random_densities(rng, 2, 40)), 0.0);
  }
  auto zeroed = flat;
  zeroed[0][5] = 0.0;
  EXPECT_EQ(model.dissipation_rate(s, zeroed), std::numeric_limits<double>::infinity());
  zeroed[0][5] = -1e-9;
  EXPECT_THROW(model.dissipation_rate(s, zeroed), DomainError);
}

TEST(Current, NeutralSpeciesCarryNoCurrent) {
  auto spec = two_species(BoundaryKind::dirichlet);
  for (auto& sp : spec.species) sp.valence = 0.0;
  std::mt19937_64 rng(44);
  const PnpModel model(spec);
  for (double j : model.current_profile(model.initialize(random_densities(rng, 2, 40)))) EXPECT_EQ(j, 0.0);
}

TEST(Current, SlotboomEquilibriumCarriesNoCurrent) {
  const PnpModel model(two_species(BoundaryKind::dirichlet));
  State s;
  s.psi.resize(40);
  for (std::size_t j = 0; j < 40; ++j) s.psi[j] = std::sin(0.3 * static_cast<double>(j));
  s.c.assign(2, std::vector<double>(40));
  for (std::size_t j = 0; j < 40; ++j) {
    s.c[0][j] = 0.4 * std::exp(-s.psi[j]);
    s.c[1][j] = 0.9 * std::exp(s.psi[j]);
  }
  for (double j : model.current_profile(s)) EXPECT_NEAR(j, 0.0, 1e-12);
}

TEST(Current, UniformAtSteadyState) {
  const auto cfg = default_config(ScenarioId::ex4_2);
  const PnpModel model(build_system(cfg));
  const auto res = model.run_to_steady(initial_state(model, cfg), *cfg.steady_tol, cfg.max_steps);
  ASSERT_TRUE(res.converged);
  const auto j = model.current_profile(res.state);
  const auto [lo, hi] = std::minmax_element(j.begin(), j.end());
  double mean_abs = 0.0;
  for (double v : j) mean_abs += std::abs(v) / static_cast<double>(j.size());
  EXPECT_LE(*hi - *lo, 0.01 * mean_abs);
}

TEST(Steady, NonConvergenceIsReportedNotThrown) {
  const auto cfg = default_config(ScenarioId::ex4_2);
  const PnpModel model(build_system(cfg));
  const auto res = model.run_to_steady(initial_state(model, cfg), 1e-6, 10);
  EXPECT_FALSE(res.converged);
  EXPECT_EQ(res.steps, 10u);
  EXPECT_DOUBLE_EQ(res.t_s, 10 * 5e-5);
  EXPECT_THROW(model.run_to_steady(res.state, 0.0, 10), ConfigError);
}

TEST(Parallel, StepIsBitwiseEqualToSerial) {
  std::mt19937_64 rng(45);
  auto cfg = default_config(ScenarioId::ex4_5);
  cfg.initial = InitialKind::random;
  const PnpModel serial(build_system(cfg), Execution::serial);
  const PnpModel parallel(build_system(cfg), Execution::parallel);
  State a = initial_state(serial, cfg);
  State b = initial_state(parallel, cfg);
  for (int k = 0; k < 50; ++k) {
    a = serial.step(a);
    b = parallel.step(b);
  }
  EXPECT_EQ(a.c, b.c);
  EXPECT_EQ(a.psi, b.psi);
}
