#include "pnpfv/poisson.hpp"

#include <cmath>

#include "pnpfv/error.hpp"

namespace pnpfv {

void PoissonProblem::validate() const {
  const std::size_t n = size();
  if (n < 2) throw ConfigError("poisson: need at least 2 cells");
  if (a_face.size() != n + 1) throw ConfigError("poisson: a_face must have n+1 entries");
  if (!(h > 0.0)) throw ConfigError("poisson: h must be positive");
  if (!(epsilon > 0.0)) throw ConfigError("poisson: epsilon must be positive");
  if (bc.kind == PoissonBoundary::Kind::robin && !(bc.eta > 0.0)) {
    throw ConfigError("poisson: eta must be positive");
  }
  for (double a : a_face) {
    if (!(a > 0.0)) throw ConfigError("poisson: face areas must be positive");
  }
}

TridiagonalSystem assemble_poisson(const PoissonProblem& p, std::span<const double> charge) {
  p.validate();
  const std::size_t n = p.size();
  if (charge.size() != n) throw ConfigError("poisson: charge has the wrong length");

  TridiagonalSystem sys(n);
  const double scale = p.h * p.h / p.epsilon;
  for (std::size_t j = 0; j < n; ++j) sys.rhs[j] = scale * p.a_cell[j] * charge[j];
  for (std::size_t k = 1; k < n; ++k) sys.add_coupling(k - 1, p.a_face[k]);

  const double al = p.a_face[0];
  const double ar = p.a_face[n];
  if (p.bc.kind == PoissonBoundary::Kind::robin) {
    const double r = p.h / p.bc.eta;
    sys.diag[0] += r * al;
    sys.rhs[0] += r * al * p.bc.psi_minus;
    sys.diag[n - 1] += r * ar;
    sys.rhs[n - 1] += r * ar * p.bc.psi_plus;
  } else if (p.bc.closure == PoissonBoundary::Closure::first) {
    sys.diag[0] += 2.0 * al;
    sys.rhs[0] += 2.0 * al * p.bc.psi_left;
    sys.diag[n - 1] += 2.0 * ar;
    sys.rhs[n - 1] += 2.0 * ar * p.bc.psi_right;
  } else {
    sys.diag[0] += 3.0 * al;
    sys.upper[0] -= al / 3.0;
    sys.rhs[0] += 8.0 / 3.0 * al * p.bc.psi_left;
    sys.diag[n - 1] += 3.0 * ar;
    sys.lower[n - 2] -= ar / 3.0;
    sys.rhs[n - 1] += 8.0 / 3.0 * ar * p.bc.psi_right;
  }
  return sys;
}

std::vector<double> solve_poisson(const PoissonProblem& p, std::span<const double> charge) {
  return thomas_solve(assemble_poisson(p, charge));
}

std::vector<double> poisson_fluxes(const PoissonProblem& p, std::span<const double> psi) {
  p.validate();
  const std::size_t n = p.size();
  if (psi.size() != n) throw ConfigError("poisson_fluxes: psi has the wrong length");
  std::vector<double> flux(n + 1);
  const double k = p.epsilon / p.h;
  for (std::size_t f = 1; f < n; ++f) flux[f] = k * p.a_face[f] * (psi[f] - psi[f - 1]);
  const double al = p.a_face[0];
  const double ar = p.a_face[n];
  if (p.bc.kind == PoissonBoundary::Kind::robin) {
    flux[0] = p.epsilon / p.bc.eta * al * (psi[0] - p.bc.psi_minus);
    flux[n] = p.epsilon / p.bc.eta * ar * (p.bc.psi_plus - psi[n - 1]);
  } else if (p.bc.closure == PoissonBoundary::Closure::first) {
    flux[0] = k * al * 2.0 * (psi[0] - p.bc.psi_left);
    flux[n] = k * ar * 2.0 * (p.bc.psi_right - psi[n - 1]);
  } else {
    flux[0] = k * al * (-psi[1] / 3.0 + 3.0 * psi[0] - 8.0 / 3.0 * p.bc.psi_left);
    flux[n] = k * ar * (psi[n - 2] / 3.0 - 3.0 * psi[n - 1] + 8.0 / 3.0 * p.bc.psi_right);
  }
  return flux;
}

double robin_bound_ratio(const PoissonProblem& p, std::span<const double> zeta) {
  if (p.bc.kind != PoissonBoundary::Kind::robin) {
    throw ConfigError("robin_bound_ratio: Robin boundary required");
  }
  if (zeta.size() != p.size()) throw ConfigError("robin_bound_ratio: zeta has the wrong length");
  // M depends only on the geometry; reuse the assembler with zero charge
  // and swap in zeta as the right-hand side.
  std::vector<double> zero(p.size(), 0.0);
  auto sys = assemble_poisson(p, zero);
  sys.rhs.assign(zeta.begin(), zeta.end());
  const auto y = thomas_solve(sys);
  double form = 0.0;
  double norm2 = 0.0;
  for (std::size_t j = 0; j < zeta.size(); ++j) {
    form += zeta[j] * y[j];
    norm2 += zeta[j] * zeta[j];
  }
  if (norm2 == 0.0) return 0.0;
  const double n = static_cast<double>(p.size());
  const double bound = n * p.bc.eta / (p.h * (p.a_face.front() + p.a_face.back()));
  return form / (bound * norm2);
}

bool robin_matrix_bound_check(const PoissonProblem& p, std::span<const double> zeta) {
  return robin_bound_ratio(p, zeta) <= 1.0;
}

}  // namespace pnpfv
