#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pnpfv {

/// Tridiagonal system. Row j reads
///   lower[j-1] x[j-1] + diag[j] x[j] + upper[j] x[j+1] = rhs[j].
struct TridiagonalSystem {
  std::vector<double> lower;
  std::vector<double> diag;
  std::vector<double> upper;
  std::vector<double> rhs;

  TridiagonalSystem() = default;
  explicit TridiagonalSystem(std::size_t n) : lower(n - 1, 0.0), diag(n, 0.0), upper(n - 1, 0.0), rhs(n, 0.0) {}

  std::size_t size() const { return diag.size(); }
  /// Adds the symmetric coupling -w between rows j and j+1 (+w on both diagonals).
  void add_coupling(std::size_t j, double w) {
    diag[j] += w;
    diag[j + 1] += w;
    upper[j] -= w;
    lower[j] -= w;
  }
};

/// Thomas elimination without pivoting. Throws SingularSystemError on a zero
/// (or non-finite) pivot and ConfigError on inconsistent sizes.
std::vector<double> thomas_solve(const TridiagonalSystem& sys);

enum class Dominance {
  strict,       ///< every row strictly dominant
  irreducible,  ///< weak dominance, strict in some row, all off-diagonals nonzero
};

/// Positive diagonal, non-positive off-diagonals and row diagonal dominance
/// of the requested kind. Either kind makes the matrix a non-singular M-matrix.
bool verify_m_structure(const TridiagonalSystem& sys, Dominance dominance = Dominance::strict);

/// y = A x for the matrix part of sys.
std::vector<double> multiply(const TridiagonalSystem& sys, std::span<const double> x);

/// max_j |(A x - rhs)_j|
double residual_max_norm(const TridiagonalSystem& sys, std::span<const double> x);

double max_norm(std::span<const double> v);

}  // namespace pnpfv
