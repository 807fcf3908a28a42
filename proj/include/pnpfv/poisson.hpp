#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pnpfv/linalg.hpp"

namespace pnpfv {

struct PoissonBoundary {
  enum class Kind { dirichlet, robin };
  /// Wall closure for Dirichlet data.
  enum class Closure { first, second };

  Kind kind = Kind::dirichlet;
  double psi_left = 0.0;
  double psi_right = 0.0;
  Closure closure = Closure::first;
  double eta = 1.0;
  double psi_minus = 0.0;
  double psi_plus = 0.0;

  static PoissonBoundary dirichlet(double left, double right, Closure closure = Closure::first) {
    PoissonBoundary b;
    b.kind = Kind::dirichlet;
    b.psi_left = left;
    b.psi_right = right;
    b.closure = closure;
    return b;
  }
  /// -eta psi' + psi = psi_minus on the left wall, eta psi' + psi = psi_plus on the right.
  static PoissonBoundary robin(double eta, double psi_minus, double psi_plus) {
    PoissonBoundary b;
    b.kind = Kind::robin;
    b.eta = eta;
    b.psi_minus = psi_minus;
    b.psi_plus = psi_plus;
    return b;
  }
};

/// -(eps A psi_x)_x = A S discretised with fluxes
///   Psi_{j+1/2} = eps A_{j+1/2} (psi_{j+1} - psi_j) / h.
struct PoissonProblem {
  double h = 0.0;
  std::vector<double> a_cell;
  std::vector<double> a_face;
  double epsilon = 1.0;
  PoissonBoundary bc;

  std::size_t size() const { return a_cell.size(); }
  void validate() const;
};

/// The system M psi = b, scaled by h/eps so the interior couplings are the
/// face areas A_{j+1/2}. For Robin data this is exactly the printed M.
TridiagonalSystem assemble_poisson(const PoissonProblem& problem, std::span<const double> charge);

/// Potential for the net charge S_j (per cell, already including -rho_j).
std::vector<double> solve_poisson(const PoissonProblem& problem, std::span<const double> charge);

/// Discrete fluxes Psi at all n+1 faces for a given psi.
std::vector<double> poisson_fluxes(const PoissonProblem& problem, std::span<const double> psi);

/// zeta . M^{-1} zeta divided by  n eta / (h (A_{1/2} + A_{n+1/2})) |zeta|^2,
/// i.e. the claimed upper bound (n^2 eta / (A_{1/2} + A_{n+1/2}) on [0, 1]).
/// Returns 0 for zeta = 0. Robin boundary required.
double robin_bound_ratio(const PoissonProblem& problem, std::span<const double> zeta);

/// True iff zeta . M^{-1} zeta does not exceed the bound above.
bool robin_matrix_bound_check(const PoissonProblem& problem, std::span<const double> zeta);

}  // namespace pnpfv
