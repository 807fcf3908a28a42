#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "pnpfv/scenarios.hpp"

namespace pnpfv {

/// JSON config text, one section per field group:
///
///   { "scenario": "ex4_2",
///     "grid":     { "n_cells": 100, "domain": [0, 1] },
///     "physics":  { "epsilon": 5e-5, "species": [ { "valence": 1, "diffusion": 1,
///                                                   "c_left": 0.5, "c_right": 0.4 }, ... ] },
///     "geometry": { "r_f": 20, "r_c": 0.2, "l_c": 0.2, "q0": 0.2 },   // channel scenarios
///     "charge":   { "scale": 1 },                                   // ex4_4, ex4_5
///     "boundary": { "kind": "dirichlet", "psi_left": 0, "voltage": 0.5 },
///     "time":     { "tau": 5e-5, "steady_tol": 1e-6, "max_steps": 1000000 },
///     "numerics": { "flux_order": "first", "sampling": "cell_average" },
///     "initial":  { "kind": "preset", "seed": 1 },
///     "output":   { "dir": "out", "series_stride": 1 } }
///
/// Unknown keys are rejected. Errors name the JSON path (`physics.epsilon`)
/// or, for syntax errors, the line and column.
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::filesystem::path& path);

std::string emit_config(const ScenarioConfig& cfg);
void save_config(const ScenarioConfig& cfg, const std::filesystem::path& path);

FluxOrder parse_flux_order(std::string_view text);
BoundaryKind parse_boundary_kind(std::string_view text);
CoefficientSampling parse_sampling(std::string_view text);
InitialKind parse_initial_kind(std::string_view text);

}  // namespace pnpfv
