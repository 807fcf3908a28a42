#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pnpfv/linalg.hpp"

namespace pnpfv {

/// Closure used for the Dirichlet boundary flux.
enum class FluxOrder {
  zeroth,  ///< one-sided difference over h; loses accuracy at the boundary
  first,   ///< one-sided difference over h/2; keeps the M-matrix structure
  second,  ///< three-point closure through cells 1, 2 and the wall value
};

struct BoundarySpec {
  enum class Kind { dirichlet, zero_flux };
  Kind kind = Kind::zero_flux;
  double u_left = 0.0;
  double u_right = 0.0;

  static BoundarySpec dirichlet(double u_left, double u_right) {
    return {Kind::dirichlet, u_left, u_right};
  }
  static BoundarySpec zero_flux() { return {}; }
};

/// One semi-implicit step of
///   A u_t = (B e^phi (u e^-phi)_x)_x + A f
/// on a uniform grid. Face arrays have n+1 entries, face k sits between
/// cells k-1 and k; faces 0 and n are the walls, where phi_face carries the
/// prescribed boundary potential.
struct TransportProblem {
  double h = 0.0;
  std::vector<double> a_cell;
  std::vector<double> b_face;
  std::vector<double> phi_cell;
  std::vector<double> phi_face;
  double tau = 0.0;
  BoundarySpec bc;
  FluxOrder flux_order = FluxOrder::first;
  /// Per-cell source f in units of u_t; empty means none.
  std::vector<double> source_cell;

  std::size_t size() const { return a_cell.size(); }
  void validate() const;
};

/// Linear system for the Slotboom unknowns G_j = u^{n+1}_j e^{-phi_j}.
TridiagonalSystem assemble(const TransportProblem& problem, std::span<const double> u_n);

std::vector<double> step(const TransportProblem& problem, std::span<const double> u_n);

/// Flux U at interior face k (1 <= k <= n-1) evaluated from u.
double interior_flux(const TransportProblem& problem, std::span<const double> u, std::size_t face);

/// All n+1 face fluxes of u, boundary faces following the problem's closure.
std::vector<double> face_fluxes(const TransportProblem& problem, std::span<const double> u);

}  // namespace pnpfv
