#include "pnpfv/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pnpfv/error.hpp"

namespace pnpfv {

namespace {

void check_shape(const TridiagonalSystem& sys) {
  const std::size_t n = sys.diag.size();
  if (n == 0 || sys.lower.size() + 1 != n || sys.upper.size() + 1 != n || sys.rhs.size() != n) {
    throw ConfigError("tridiagonal system has inconsistent sizes");
  }
}

}  // namespace

std::vector<double> thomas_solve(const TridiagonalSystem& sys) {
  check_shape(sys);
  const std::size_t n = sys.size();
  std::vector<double> c(n, 0.0);
  std::vector<double> x(n);

  double pivot = sys.diag[0];
  if (pivot == 0.0 || !std::isfinite(pivot)) {
    throw SingularSystemError("zero pivot in row 0");
  }
  if (n > 1) c[0] = sys.upper[0] / pivot;
  x[0] = sys.rhs[0] / pivot;
  for (std::size_t j = 1; j < n; ++j) {
    pivot = sys.diag[j] - sys.lower[j - 1] * c[j - 1];
    if (pivot == 0.0 || !std::isfinite(pivot)) {
      throw SingularSystemError("zero pivot in row " + std::to_string(j));
    }
    if (j + 1 < n) c[j] = sys.upper[j] / pivot;
    x[j] = (sys.rhs[j] - sys.lower[j - 1] * x[j - 1]) / pivot;
  }
  for (std::size_t j = n - 1; j-- > 0;) {
    x[j] -= c[j] * x[j + 1];
  }
  return x;
}

bool verify_m_structure(const TridiagonalSystem& sys, Dominance dominance) {
  check_shape(sys);
  const std::size_t n = sys.size();
  bool some_strict = false;
  for (std::size_t j = 0; j < n; ++j) {
    const double lo = j > 0 ? sys.lower[j - 1] : 0.0;
    const double up = j + 1 < n ? sys.upper[j] : 0.0;
    if (!(sys.diag[j] > 0.0) || lo > 0.0 || up > 0.0) return false;
    const double off = std::abs(lo) + std::abs(up);
    if (sys.diag[j] > off) {
      some_strict = true;
    } else if (dominance == Dominance::strict || !(sys.diag[j] >= off)) {
      return false;
    }
  }
  if (dominance == Dominance::strict) return true;
  // Irreducible: the chain 0 - 1 - ... - n-1 must be connected.
  for (std::size_t j = 0; j + 1 < n; ++j) {
    if (sys.lower[j] == 0.0 || sys.upper[j] == 0.0) return false;
  }
  return some_strict;
}

std::vector<double> multiply(const TridiagonalSystem& sys, std::span<const double> x) {
  check_shape(sys);
  const std::size_t n = sys.size();
  if (x.size() != n) throw ConfigError("multiply: vector length mismatch");
  std::vector<double> y(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = sys.diag[j] * x[j];
    if (j > 0) s += sys.lower[j - 1] * x[j - 1];
    if (j + 1 < n) s += sys.upper[j] * x[j + 1];
    y[j] = s;
  }
  return y;
}

double residual_max_norm(const TridiagonalSystem& sys, std::span<const double> x) {
  const auto y = multiply(sys, x);
  double r = 0.0;
  for (std::size_t j = 0; j < y.size(); ++j) r = std::max(r, std::abs(y[j] - sys.rhs[j]));
  return r;
}

double max_norm(std::span<const double> v) {
  double m = 0.0;
  for (double e : v) m = std::max(m, std::abs(e));
  return m;
}

}  // namespace pnpfv
