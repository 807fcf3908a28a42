#include "pnpfv/mesh.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "pnpfv/error.hpp"

namespace pnpfv {

namespace {

// 5-point Gauss-Legendre on [-1, 1]; exact for polynomials of degree <= 9.
constexpr std::array<double, 5> kGaussNodes = {
    -0.906179845938663992797626878299, -0.538469310105683091036314420700, 0.0,
    0.538469310105683091036314420700, 0.906179845938663992797626878299};
constexpr std::array<double, 5> kGaussWeights = {
    0.236926885056189087514264040720, 0.478628670499366468041291514836,
    0.568888888888888888888888888889, 0.478628670499366468041291514836,
    0.236926885056189087514264040720};

double gauss5(const PiecewiseCoefficient& f, std::size_t segment, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t q = 0; q < kGaussNodes.size(); ++q) {
    sum += kGaussWeights[q] * f.eval_segment(segment, mid + half * kGaussNodes[q]);
  }
  return half * sum;
}

}  // namespace

Grid::Grid(std::size_t n_cells, double lo, double hi) : n_(n_cells), lo_(lo), hi_(hi) {
  if (n_cells < 2) {
    throw ConfigError("grid needs at least 2 cells, got " + std::to_string(n_cells));
  }
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw ConfigError("grid domain must satisfy lo < hi");
  }
  h_ = (hi - lo) / static_cast<double>(n_cells);
  centers_.resize(n_);
  interfaces_.resize(n_ + 1);
  // Interfaces are interpolated rather than accumulated so both end points
  // are hit exactly.
  for (std::size_t k = 0; k <= n_; ++k) {
    const double s = static_cast<double>(k) / static_cast<double>(n_);
    interfaces_[k] = (1.0 - s) * lo + s * hi;
  }
  interfaces_[n_] = hi;
  for (std::size_t j = 0; j < n_; ++j) {
    centers_[j] = lo + (static_cast<double>(j) + 0.5) * h_;
  }
}

Grid build_grid(std::size_t n_cells, double lo, double hi) { return Grid(n_cells, lo, hi); }

PiecewiseCoefficient::PiecewiseCoefficient(std::vector<double> breakpoints,
                                           std::vector<Segment> segments,
                                           std::vector<Owner> owner)
    : breakpoints_(std::move(breakpoints)), segments_(std::move(segments)), owner_(std::move(owner)) {
  if (segments_.size() != breakpoints_.size() + 1) {
    throw ConfigError("piecewise coefficient needs exactly one more segment than breakpoints");
  }
  if (!std::is_sorted(breakpoints_.begin(), breakpoints_.end())) {
    throw ConfigError("piecewise coefficient breakpoints must be sorted");
  }
  if (owner_.empty()) {
    owner_.assign(breakpoints_.size(), Owner::right);
  }
  if (owner_.size() != breakpoints_.size()) {
    throw ConfigError("piecewise coefficient owner table has the wrong length");
  }
}

PiecewiseCoefficient PiecewiseCoefficient::constant(double value) {
  return PiecewiseCoefficient({}, {[value](double) { return value; }});
}

PiecewiseCoefficient PiecewiseCoefficient::smooth(Segment f) {
  return PiecewiseCoefficient({}, {std::move(f)});
}

double PiecewiseCoefficient::operator()(double x) const {
  const auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), x);
  auto k = static_cast<std::size_t>(it - breakpoints_.begin());
  if (it != breakpoints_.end() && *it == x && owner_[k] == Owner::right) {
    ++k;
  }
  return segments_[k](x);
}

double PiecewiseCoefficient::left_limit(double x) const {
  const auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), x);
  return segments_[static_cast<std::size_t>(it - breakpoints_.begin())](x);
}

double PiecewiseCoefficient::right_limit(double x) const {
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
  return segments_[static_cast<std::size_t>(it - breakpoints_.begin())](x);
}

double integrate(const PiecewiseCoefficient& f, double a, double b) {
  const auto bps = f.breakpoints();
  // Segment owning the open interval just right of a.
  auto k = static_cast<std::size_t>(std::upper_bound(bps.begin(), bps.end(), a) - bps.begin());
  double left = a;
  double sum = 0.0;
  while (k < bps.size() && bps[k] < b) {
    sum += gauss5(f, k, left, bps[k]);
    left = bps[k];
    ++k;
  }
  sum += gauss5(f, k, left, b);
  return sum;
}

double cell_average(const PiecewiseCoefficient& f, const Grid& grid, std::size_t j) {
  const double a = grid.interface(j);
  const double b = grid.interface(j + 1);
  return integrate(f, a, b) / (b - a);
}

std::vector<double> cell_averages(const PiecewiseCoefficient& f, const Grid& grid, Execution exec) {
  const auto n = static_cast<std::ptrdiff_t>(grid.size());
  std::vector<double> out(grid.size());
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t j = 0; j < n; ++j) {
      out[static_cast<std::size_t>(j)] = cell_average(f, grid, static_cast<std::size_t>(j));
    }
  } else {
    for (std::ptrdiff_t j = 0; j < n; ++j) {
      out[static_cast<std::size_t>(j)] = cell_average(f, grid, static_cast<std::size_t>(j));
    }
  }
  return out;
}

std::vector<double> face_values(const PiecewiseCoefficient& f, const Grid& grid) {
  std::vector<double> out(grid.size() + 1);
  for (std::size_t k = 0; k <= grid.size(); ++k) out[k] = f(grid.interface(k));
  return out;
}

std::vector<double> center_values(const PiecewiseCoefficient& f, const Grid& grid) {
  std::vector<double> out(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) out[j] = f(grid.center(j));
  return out;
}

void ChannelGeometry::validate() const {
  if (!(r_c > 0.0) || !(r_c <= r_f)) {
    throw ConfigError("channel geometry needs 0 < r_c <= r_f");
  }
  if (!(l_c > 0.0 && l_c < 1.0)) {
    throw ConfigError("channel geometry needs 0 < l_c < 1");
  }
}

PiecewiseCoefficient channel_area(const ChannelGeometry& geom) {
  geom.validate();
  const double rf = geom.r_f;
  const double rc = geom.r_c;
  const double lb = geom.l_b();
  const double end = geom.channel_end();
  return PiecewiseCoefficient(
      {lb, end},
      {[=](double x) { return 2.0 * (rf + (rc - rf) / lb * x); },
       [=](double) { return 2.0 * rc; },
       [=](double x) { return 2.0 * (rc + (rf - rc) / lb * (x - end)); }},
      {PiecewiseCoefficient::Owner::left, PiecewiseCoefficient::Owner::right});
}

PiecewiseCoefficient channel_charge(double q0, const ChannelGeometry& geom) {
  geom.validate();
  return PiecewiseCoefficient(
      {geom.channel_begin(), geom.channel_end()},
      {[](double) { return 0.0; }, [q0](double) { return 2.0 * q0; }, [](double) { return 0.0; }},
      {PiecewiseCoefficient::Owner::left, PiecewiseCoefficient::Owner::right});
}

}  // namespace pnpfv
