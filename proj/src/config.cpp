#include "pnpfv/config.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "pnpfv/error.hpp"

namespace pnpfv {

namespace {

using nlohmann::json;

std::string type_name(const json& j) { return j.type_name(); }

// One JSON object plus its dotted path. Keys outside `allowed` are rejected up
// front so a typo is reported as such rather than as a missing field.
class Section {
 public:
  Section(const json& obj, std::string path, std::initializer_list<std::string_view> allowed)
      : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(where() + ": expected an object, got " + type_name(obj_));
    for (const auto& item : obj_.items()) {
      if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
        throw ConfigError("unknown key " + where(item.key()));
      }
    }
  }

  std::string where(std::string_view key = {}) const {
    if (key.empty()) return path_.empty() ? std::string("<root>") : path_;
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

  bool has(std::string_view key) const { return obj_.contains(std::string(key)); }

  const json& raw(std::string_view key) {
    if (!has(key)) throw ConfigError("missing required field " + where(key));
    return obj_.at(std::string(key));
  }

  double number(std::string_view key) {
    const json& v = raw(key);
    if (!v.is_number()) throw ConfigError(where(key) + ": expected a number, got " + type_name(v));
    return v.get<double>();
  }

  std::optional<double> optional_number(std::string_view key) {
    if (!has(key) || obj_.at(std::string(key)).is_null()) {
      return std::nullopt;
    }
    return number(key);
  }

  double number_or(std::string_view key, double fallback) {
    auto v = optional_number(key);
    return v ? *v : fallback;
  }

  std::uint64_t unsigned_integer(std::string_view key) {
    const json& v = raw(key);
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
      throw ConfigError(where(key) + ": expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

  std::uint64_t unsigned_or(std::string_view key, std::uint64_t fallback) {
    return has(key) ? unsigned_integer(key) : fallback;
  }

  std::string string(std::string_view key) {
    const json& v = raw(key);
    if (!v.is_string()) throw ConfigError(where(key) + ": expected a string, got " + type_name(v));
    return v.get<std::string>();
  }

  std::string string_or(std::string_view key, std::string fallback) {
    return has(key) ? string(key) : fallback;
  }

  Section child(std::string_view key, std::initializer_list<std::string_view> allowed) {
    return Section(raw(key), where(key), allowed);
  }

 private:
  const json& obj_;
  std::string path_;
};

template <typename Parse>
auto with_path(const Section& s, std::string_view key, Parse&& parse) {
  try {
    return parse();
  } catch (const ConfigError& e) {
    throw ConfigError(s.where(key) + ": " + e.what());
  }
}

std::string syntax_error(const json::parse_error& e, std::string_view text) {
  const std::size_t pos = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
  const std::size_t line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + pos, '\n'));
  const std::size_t last_nl = text.rfind('\n', pos == 0 ? 0 : pos - 1);
  const std::size_t column = last_nl == std::string_view::npos || pos == 0 ? pos + 1 : pos - last_nl;
  std::string msg = e.what();
  // Drop the library prefix "[json.exception.parse_error.101] parse error at ...: ".
  if (const auto colon = msg.find(": "); colon != std::string::npos) msg = msg.substr(colon + 2);
  return "config syntax error at line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg;
}

}  // namespace

FluxOrder parse_flux_order(std::string_view text) {
  if (text == "zeroth") return FluxOrder::zeroth;
  if (text == "first") return FluxOrder::first;
  if (text == "second") return FluxOrder::second;
  throw ConfigError("unknown flux order '" + std::string(text) + "'; valid: zeroth, first, second");
}

BoundaryKind parse_boundary_kind(std::string_view text) {
  if (text == "dirichlet") return BoundaryKind::dirichlet;
  if (text == "zero_flux_robin") return BoundaryKind::zero_flux_robin;
  throw ConfigError("unknown boundary kind '" + std::string(text) + "'; valid: dirichlet, zero_flux_robin");
}

CoefficientSampling parse_sampling(std::string_view text) {
  if (text == "cell_average") return CoefficientSampling::cell_average;
  if (text == "cell_center") return CoefficientSampling::cell_center;
  throw ConfigError("unknown sampling '" + std::string(text) + "'; valid: cell_average, cell_center");
}

InitialKind parse_initial_kind(std::string_view text) {
  if (text == "preset") return InitialKind::preset;
  if (text == "random") return InitialKind::random;
  if (text == "linear") return InitialKind::linear;
  throw ConfigError("unknown initial kind '" + std::string(text) + "'; valid: preset, random, linear");
}

ScenarioConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(syntax_error(e, text));
  }

  Section root(doc, "", {"scenario", "grid", "physics", "geometry", "charge", "boundary", "time", "numerics",
                           "initial", "output"});
  ScenarioConfig cfg;
  cfg.scenario = with_path(root, "scenario", [&] { return parse_scenario_id(root.string("scenario")); });

  {
    Section grid = root.child("grid", {"n_cells", "domain"});
    const auto n = grid.unsigned_integer("n_cells");
    cfg.n_cells = static_cast<std::size_t>(n);
    const json& dom = grid.raw("domain");
    if (!dom.is_array() || dom.size() != 2 || !dom[0].is_number() || !dom[1].is_number()) {
      throw ConfigError(grid.where("domain") + ": expected [lo, hi]");
    }
    cfg.domain_lo = dom[0].get<double>();
    cfg.domain_hi = dom[1].get<double>();
  }
  {
    Section phys = root.child("physics", {"epsilon", "species"});
    cfg.epsilon = phys.number("epsilon");
    const json& list = phys.raw("species");
    if (!list.is_array()) throw ConfigError(phys.where("species") + ": expected an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      Section sp(list[i], phys.where("species") + "[" + std::to_string(i) + "]",
                 {"valence", "diffusion", "c_left", "c_right"});
      SpeciesConfig s;
      s.valence = sp.number("valence");
      s.diffusion = sp.number("diffusion");
      s.c_left = sp.number_or("c_left", 0.0);
      s.c_right = sp.number_or("c_right", 0.0);
      cfg.species.push_back(s);
    }
  }
  if (root.has("geometry")) {
    Section geo = root.child("geometry", {"r_f", "r_c", "l_c", "q0"});
    GeometryConfig g;
    g.r_f = geo.number("r_f");
    g.r_c = geo.number("r_c");
    g.l_c = geo.number("l_c");
    g.q0 = geo.number("q0");
    cfg.geometry = g;
  }
  if (root.has("charge")) {
    Section ch = root.child("charge", {"scale"});
    cfg.charge_scale = ch.number("scale");
  }
  {
    Section bc = root.child("boundary", {"kind", "psi_left", "voltage", "eta", "psi_minus", "psi_plus"});
    cfg.boundary = with_path(bc, "kind", [&] { return parse_boundary_kind(bc.string("kind")); });
    if (cfg.boundary == BoundaryKind::dirichlet) {
      cfg.psi_left = bc.number("psi_left");
      cfg.voltage = bc.number("voltage");
      cfg.eta = bc.number_or("eta", cfg.eta);
      cfg.psi_minus = bc.number_or("psi_minus", cfg.psi_minus);
      cfg.psi_plus = bc.number_or("psi_plus", cfg.psi_plus);
    } else {
      cfg.eta = bc.number("eta");
      cfg.psi_minus = bc.number("psi_minus");
      cfg.psi_plus = bc.number("psi_plus");
      cfg.psi_left = bc.number_or("psi_left", cfg.psi_left);
      cfg.voltage = bc.number_or("voltage", cfg.voltage);
    }
  }
  {
    Section tm = root.child("time", {"tau", "t_end", "steady_tol", "max_steps"});
    cfg.tau = tm.number("tau");
    cfg.t_end = tm.optional_number("t_end");
    cfg.steady_tol = tm.optional_number("steady_tol");
    cfg.max_steps = static_cast<std::size_t>(tm.unsigned_or("max_steps", cfg.max_steps));
  }
  if (root.has("numerics")) {
    Section num = root.child("numerics", {"flux_order", "sampling"});
    if (num.has("flux_order")) {
      cfg.flux_order = with_path(num, "flux_order", [&] { return parse_flux_order(num.string("flux_order")); });
    }
    if (num.has("sampling")) {
      cfg.sampling = with_path(num, "sampling", [&] { return parse_sampling(num.string("sampling")); });
    }
  }
  if (root.has("initial")) {
    Section init = root.child("initial", {"kind", "seed"});
    if (init.has("kind")) {
      cfg.initial = with_path(init, "kind", [&] { return parse_initial_kind(init.string("kind")); });
    }
    cfg.seed = init.unsigned_or("seed", cfg.seed);
  }
  if (root.has("output")) {
    Section out = root.child("output", {"dir", "series_stride"});
    cfg.out_dir = out.string_or("dir", cfg.out_dir);
    cfg.series_stride = static_cast<std::size_t>(out.unsigned_or("series_stride", cfg.series_stride));
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string emit_config(const ScenarioConfig& cfg) {
  json doc = json::object();
  doc["scenario"] = std::string(to_string(cfg.scenario));
  doc["grid"] = {{"n_cells", cfg.n_cells}, {"domain", {cfg.domain_lo, cfg.domain_hi}}};
  json species = json::array();
  for (const auto& s : cfg.species) {
    species.push_back({{"valence", s.valence}, {"diffusion", s.diffusion}, {"c_left", s.c_left}, {"c_right", s.c_right}});
  }
  doc["physics"] = {{"epsilon", cfg.epsilon}, {"species", species}};
  if (cfg.geometry) {
    const auto& g = *cfg.geometry;
    doc["geometry"] = {{"r_f", g.r_f}, {"r_c", g.r_c}, {"l_c", g.l_c}, {"q0", g.q0}};
  }
  if (cfg.charge_scale) doc["charge"] = {{"scale", *cfg.charge_scale}};
  doc["boundary"] = {{"kind", std::string(to_string(cfg.boundary))},
                     {"psi_left", cfg.psi_left},
                     {"voltage", cfg.voltage},
                     {"eta", cfg.eta},
                     {"psi_minus", cfg.psi_minus},
                     {"psi_plus", cfg.psi_plus}};
  json time = {{"tau", cfg.tau}, {"max_steps", cfg.max_steps}};
  if (cfg.t_end) time["t_end"] = *cfg.t_end;
  if (cfg.steady_tol) time["steady_tol"] = *cfg.steady_tol;
  doc["time"] = time;
  doc["numerics"] = {{"flux_order", std::string(to_string(cfg.flux_order))},
                     {"sampling", std::string(to_string(cfg.sampling))}};
  doc["initial"] = {{"kind", std::string(to_string(cfg.initial))}, {"seed", cfg.seed}};
  doc["output"] = {{"dir", cfg.out_dir}, {"series_stride", cfg.series_stride}};
  return doc.dump(2) + "\n";
}

void save_config(const ScenarioConfig& cfg, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write config file " + path.string());
  out << emit_config(cfg);
}

}  // namespace pnpfv
