#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "pnpfv/execution.hpp"

namespace pnpfv {

/// Uniform partition of [lo, hi] into n cells. Cell j (0-based) is
/// [interface(j), interface(j+1)] with center lo + (j + 1/2) h.
class Grid {
 public:
  Grid(std::size_t n_cells, double lo, double hi);

  std::size_t size() const { return n_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double h() const { return h_; }

  double center(std::size_t j) const { return centers_[j]; }
  double interface(std::size_t k) const { return interfaces_[k]; }
  std::span<const double> centers() const { return centers_; }
  std::span<const double> interfaces() const { return interfaces_; }

 private:
  std::size_t n_;
  double lo_;
  double hi_;
  double h_;
  std::vector<double> centers_;
  std::vector<double> interfaces_;
};

Grid build_grid(std::size_t n_cells, double lo, double hi);

/// Scalar function of x made of closed-form pieces separated by sorted
/// breakpoints. Segment k covers the interval between breakpoint k-1 and
/// breakpoint k; `owner` decides which neighbour a breakpoint itself belongs
/// to (only matters for point evaluation, never for integrals).
class PiecewiseCoefficient {
 public:
  using Segment = std::function<double(double)>;
  enum class Owner { left, right };

  PiecewiseCoefficient() = default;
  PiecewiseCoefficient(std::vector<double> breakpoints, std::vector<Segment> segments,
                       std::vector<Owner> owner = {});

  static PiecewiseCoefficient constant(double value);
  static PiecewiseCoefficient smooth(Segment f);

  double operator()(double x) const;
  double left_limit(double x) const;
  double right_limit(double x) const;

  std::span<const double> breakpoints() const { return breakpoints_; }
  std::size_t segment_count() const { return segments_.size(); }
  /// Segment k evaluated at x, ignoring which interval x lies in.
  double eval_segment(std::size_t k, double x) const { return segments_[k](x); }

 private:
  std::vector<double> breakpoints_;
  std::vector<Segment> segments_;
  std::vector<Owner> owner_;
};

/// Channel-with-funnels geometry on [0, 1]: two symmetric baths of length
/// l_b = (1 - l_c) / 2 around a channel of length l_c.
struct ChannelGeometry {
  double r_f = 20.0;
  double r_c = 0.2;
  double l_c = 0.2;

  double l_b() const { return 0.5 * (1.0 - l_c); }
  double channel_begin() const { return l_b(); }
  double channel_end() const { return l_b() + l_c; }
  void validate() const;
};

/// Cell average (1/h) * integral of f over cell j. Every breakpoint inside
/// the cell splits the integral; each piece uses 5-point Gauss-Legendre.
double cell_average(const PiecewiseCoefficient& f, const Grid& grid, std::size_t j);
std::vector<double> cell_averages(const PiecewiseCoefficient& f, const Grid& grid,
                                  Execution exec = Execution::parallel);
/// Integral of f over [a, b], split at the breakpoints of f.
double integrate(const PiecewiseCoefficient& f, double a, double b);

/// f evaluated at every interface.
std::vector<double> face_values(const PiecewiseCoefficient& f, const Grid& grid);
std::vector<double> center_values(const PiecewiseCoefficient& f, const Grid& grid);

/// Cross-sectional area: linear funnels of mouth radius r_f narrowing to
/// 2 r_c across the channel.
PiecewiseCoefficient channel_area(const ChannelGeometry& geom);
/// Permanent charge: 2 Q0 on the open channel interval, zero in the baths.
PiecewiseCoefficient channel_charge(double q0, const ChannelGeometry& geom);

}  // namespace pnpfv
