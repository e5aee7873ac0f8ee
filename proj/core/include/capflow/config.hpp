#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>

#include "capflow/grid.hpp"
#include "capflow/operators.hpp"
#include "capflow/solver.hpp"

namespace capflow {

/// Choice of initial datum for an evolution run.
struct InitialData {
  enum class Kind { Wave, Quadratic, File };
  Kind kind = Kind::Quadratic;
  double quad_coeff = 2.0;   // u0 = a x^2
  std::string file_path;     // "x,u" CSV, linearly interpolated onto the grid
  double regularize_eps = 0.0;  // > 0: pass u0 through the boundary-cusp regularizer
};

/// Full description of one evolution run.
struct RunConfig {
  OperatorSpec op = OperatorSpec::power_curvature(2.0);
  double b = 1.0;
  int n = 255;
  double t_final = 1.0;
  BoundaryMode mode = BoundaryMode::profile_adaptive();
  InitialData initial;
  double snapshot_every = 0.0;  // <= 0: initial and final snapshots only
  std::filesystem::path out_dir = "out";
  std::uint64_t seed = 0;
};

/// Parse and validate a config file. Collects every violated field into one
/// ConfigError message.
RunConfig load_config(const std::filesystem::path& path);
RunConfig config_from_json_text(const std::string& text);

/// Materialize the configured initial datum on the grid.
FieldState make_initial(const RunConfig& cfg, const Grid& grid);

}  // namespace capflow
