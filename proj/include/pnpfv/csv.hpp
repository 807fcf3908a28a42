#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "pnpfv/mesh.hpp"
#include "pnpfv/scenarios.hpp"
#include "pnpfv/system.hpp"

namespace pnpfv {

/// Shortest text that keeps 17 significant digits ("%.17g", locale independent).
std::string format_double(double v);

/// `x,c_1..c_m,psi`, one row per cell.
void write_snapshot(const std::filesystem::path& path, const Grid& grid, const State& state,
                    const std::vector<std::string>& comments = {});

struct SeriesRow {
  double t = 0.0;
  std::optional<double> energy;  // blank for Dirichlet runs
  std::vector<double> masses;
  double min_c = 0.0;
  std::optional<double> dpsi_inf;  // blank on the initial row
};

/// Streams `t,E_h,mass_1..mass_m,min_c,dpsi_inf`.
class SeriesWriter {
 public:
  SeriesWriter(const std::filesystem::path& path, std::size_t species, const std::vector<std::string>& comments = {});
  void write(const SeriesRow& row);

 private:
  std::ofstream out_;
  std::size_t species_;
};

/// `N,err_c1,ord_c1,err_c2,ord_c2,err_psi,ord_psi`; orders blank on the first row.
void write_convergence(const std::filesystem::path& path, const ConvergenceReport& report);

/// `V,J,steps,converged`
void write_iv(const std::filesystem::path& path, const std::vector<IvPoint>& points);

/// `r_c,l_c,q0,steps,t_s,converged,wall_seconds`
void write_sweep(const std::filesystem::path& path, const std::vector<SteadyRow>& rows);

}  // namespace pnpfv
