#include "pnpfv/csv.hpp"

#include <charconv>

#include "pnpfv/error.hpp"

namespace pnpfv {

namespace {

std::ofstream open(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

void write_comments(std::ofstream& out, const std::vector<std::string>& comments) {
  for (const auto& c : comments) out << "# " << c << '\n';
}

std::string optional_field(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_snapshot(const std::filesystem::path& path, const Grid& grid, const State& state,
                    const std::vector<std::string>& comments) {
  auto out = open(path);
  write_comments(out, comments);
  out << 'x';
  for (std::size_t i = 0; i < state.c.size(); ++i) out << ",c_" << i + 1;
  out << ",psi\n";
  for (std::size_t j = 0; j < grid.size(); ++j) {
    out << format_double(grid.center(j));
    for (const auto& ci : state.c) out << ',' << format_double(ci[j]);
    out << ',' << format_double(state.psi[j]) << '\n';
  }
}

SeriesWriter::SeriesWriter(const std::filesystem::path& path, std::size_t species,
                           const std::vector<std::string>& comments)
    : out_(open(path)), species_(species) {
  write_comments(out_, comments);
  out_ << "t,E_h";
  for (std::size_t i = 0; i < species_; ++i) out_ << ",mass_" << i + 1;
  out_ << ",min_c,dpsi_inf\n";
}

void SeriesWriter::write(const SeriesRow& row) {
  if (row.masses.size() != species_) throw ConfigError("series row has the wrong number of masses");
  out_ << format_double(row.t) << ',' << optional_field(row.energy);
  for (double m : row.masses) out_ << ',' << format_double(m);
  out_ << ',' << format_double(row.min_c) << ',' << optional_field(row.dpsi_inf) << '\n';
}

void write_convergence(const std::filesystem::path& path, const ConvergenceReport& report) {
  auto out = open(path);
  out << 'N';
  for (const auto& f : report.fields) out << ",err_" << f << ",ord_" << f;
  out << '\n';
  for (const auto& row : report.rows) {
    out << row.n_cells;
    for (std::size_t f = 0; f < row.errors.size(); ++f) {
      out << ',' << format_double(row.errors[f]) << ','
          << (f < row.orders.size() ? optional_field(row.orders[f]) : std::string());
    }
    out << '\n';
  }
}

void write_iv(const std::filesystem::path& path, const std::vector<IvPoint>& points) {
  auto out = open(path);
  out << "V,J,steps,converged\n";
  for (const auto& p : points) {
    out << format_double(p.voltage) << ',' << format_double(p.current) << ',' << p.steps << ','
        << (p.converged ? 1 : 0) << '\n';
  }
}

void write_sweep(const std::filesystem::path& path, const std::vector<SteadyRow>& rows) {
  auto out = open(path);
  out << "r_c,l_c,q0,steps,t_s,converged,wall_seconds\n";
  for (const auto& r : rows) {
    out << format_double(r.r_c) << ',' << format_double(r.l_c) << ',' << format_double(r.q0) << ','
        << r.result.steps << ',' << format_double(r.result.t_s) << ',' << (r.result.converged ? 1 : 0) << ','
        << format_double(r.wall_seconds) << '\n';
  }
}

}  // namespace pnpfv
