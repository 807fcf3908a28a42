#include "pnpfv/transport.hpp"

#include <cmath>
#include <string>

#include "pnpfv/error.hpp"

namespace pnpfv {

namespace {

constexpr double kMaxExponent = 700.0;

void check_exponents(std::span<const double> phi, const char* what) {
  for (double p : phi) {
    if (!std::isfinite(p) || std::abs(p) > kMaxExponent) {
      throw RangeError(std::string("transport: |") + what + "| exceeds 700, exp() would overflow");
    }
  }
}

}  // namespace

void TransportProblem::validate() const {
  const std::size_t n = size();
  if (n < 2) throw ConfigError("transport: need at least 2 cells");
  if (b_face.size() != n + 1 || phi_cell.size() != n || phi_face.size() != n + 1) {
    throw ConfigError("transport: coefficient arrays do not match the cell count");
  }
  if (!source_cell.empty() && source_cell.size() != n) {
    throw ConfigError("transport: source has the wrong length");
  }
  if (!(h > 0.0) || !(tau > 0.0)) throw ConfigError("transport: h and tau must be positive");
  for (double a : a_cell) {
    if (!(a > 0.0)) throw ConfigError("transport: A_j must be positive");
  }
  for (double b : b_face) {
    if (!(b > 0.0)) throw ConfigError("transport: B_{j+1/2} must be positive");
  }
  if (bc.kind == BoundarySpec::Kind::dirichlet && (bc.u_left < 0.0 || bc.u_right < 0.0)) {
    throw DomainError("transport: Dirichlet densities must be non-negative");
  }
  check_exponents(phi_cell, "phi");
  check_exponents(phi_face, "phi");
}

TridiagonalSystem assemble(const TransportProblem& p, std::span<const double> u_n) {
  p.validate();
  const std::size_t n = p.size();
  if (u_n.size() != n) throw ConfigError("transport: u_n has the wrong length");

  const double lambda = p.tau / (p.h * p.h);
  TridiagonalSystem sys(n);
  for (std::size_t j = 0; j < n; ++j) {
    sys.diag[j] = p.a_cell[j] * std::exp(p.phi_cell[j]);
    sys.rhs[j] = p.a_cell[j] * u_n[j];
    if (!p.source_cell.empty()) sys.rhs[j] += p.tau * p.a_cell[j] * p.source_cell[j];
  }
  for (std::size_t k = 1; k < n; ++k) {
    sys.add_coupling(k - 1, lambda * p.b_face[k] * std::exp(p.phi_face[k]));
  }

  if (p.bc.kind == BoundarySpec::Kind::dirichlet) {
    // e^{phi_wall} cancels against e^{-phi_wall} on the wall value.
    const double wl = lambda * p.b_face[0] * std::exp(p.phi_face[0]);
    const double wr = lambda * p.b_face[n] * std::exp(p.phi_face[n]);
    const double gl = lambda * p.b_face[0] * p.bc.u_left;
    const double gr = lambda * p.b_face[n] * p.bc.u_right;
    switch (p.flux_order) {
      case FluxOrder::zeroth:
        sys.diag[0] += wl;
        sys.rhs[0] += gl;
        sys.diag[n - 1] += wr;
        sys.rhs[n - 1] += gr;
        break;
      case FluxOrder::first:
        sys.diag[0] += 2.0 * wl;
        sys.rhs[0] += 2.0 * gl;
        sys.diag[n - 1] += 2.0 * wr;
        sys.rhs[n - 1] += 2.0 * gr;
        break;
      case FluxOrder::second:
        sys.diag[0] += 3.0 * wl;
        sys.upper[0] -= wl / 3.0;
        sys.rhs[0] += 8.0 / 3.0 * gl;
        sys.diag[n - 1] += 3.0 * wr;
        sys.lower[n - 2] -= wr / 3.0;
        sys.rhs[n - 1] += 8.0 / 3.0 * gr;
        break;
    }
  }
  return sys;
}

std::vector<double> step(const TransportProblem& p, std::span<const double> u_n) {
  auto u = thomas_solve(assemble(p, u_n));
  for (std::size_t j = 0; j < u.size(); ++j) u[j] *= std::exp(p.phi_cell[j]);
  return u;
}

double interior_flux(const TransportProblem& p, std::span<const double> u, std::size_t k) {
  const std::size_t n = p.size();
  if (k == 0 || k >= n) throw ConfigError("interior_flux: face index out of range");
  const double g_right = u[k] * std::exp(-p.phi_cell[k]);
  const double g_left = u[k - 1] * std::exp(-p.phi_cell[k - 1]);
  return p.b_face[k] * std::exp(p.phi_face[k]) * (g_right - g_left) / p.h;
}

std::vector<double> face_fluxes(const TransportProblem& p, std::span<const double> u) {
  p.validate();
  const std::size_t n = p.size();
  if (u.size() != n) throw ConfigError("face_fluxes: u has the wrong length");
  std::vector<double> flux(n + 1, 0.0);
  for (std::size_t k = 1; k < n; ++k) flux[k] = interior_flux(p, u, k);
  if (p.bc.kind == BoundarySpec::Kind::zero_flux) return flux;

  auto g = [&](std::size_t j) { return u[j] * std::exp(-p.phi_cell[j]); };
  const double gl = p.bc.u_left * std::exp(-p.phi_face[0]);
  const double gr = p.bc.u_right * std::exp(-p.phi_face[n]);
  const double pl = p.b_face[0] * std::exp(p.phi_face[0]) / p.h;
  const double pr = p.b_face[n] * std::exp(p.phi_face[n]) / p.h;
  switch (p.flux_order) {
    case FluxOrder::zeroth:
      flux[0] = pl * (g(0) - gl);
      flux[n] = pr * (gr - g(n - 1));
      break;
    case FluxOrder::first:
      flux[0] = pl * 2.0 * (g(0) - gl);
      flux[n] = pr * 2.0 * (gr - g(n - 1));
      break;
    case FluxOrder::second:
      flux[0] = pl * (-g(1) / 3.0 + 3.0 * g(0) - 8.0 / 3.0 * gl);
      flux[n] = pr * (g(n - 2) / 3.0 - 3.0 * g(n - 1) + 8.0 / 3.0 * gr);
      break;
  }
  return flux;
}

}  // namespace pnpfv
