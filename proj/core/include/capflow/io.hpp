#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "capflow/analysis.hpp"
#include "capflow/operators.hpp"
#include "capflow/solver.hpp"
#include "capflow/traveling_wave.hpp"

namespace capflow::io {

/// Round-trippable operator description:
///   {"family":"power","gamma":2.0,"tail_cutoff":10.0}
/// Custom pairs serialize their declared tail data but cannot be
/// deserialized (callables are in-process only).
std::string operator_to_json(const OperatorSpec& op);
OperatorSpec operator_from_json(const std::string& text);

/// "x,W,Wx" rows; the slope column is empty at the wall nodes where it is
/// infinite.
void write_wave_csv(const std::filesystem::path& path, const WaveProfile& wave);
/// Speed and metadata sidecar for a profile CSV.
void write_wave_sidecar(const std::filesystem::path& path, const WaveProfile& wave);

/// One "x,u" CSV per snapshot plus an index.json carrying snapshot times,
/// dt statistics, the boundary speed series, and any blow-up event.
void write_trajectory(const std::filesystem::path& dir, const Trajectory& traj);

/// report.json with all series plus a "t,eta_bar,eta_under,gap" companion.
void write_report(const std::filesystem::path& dir, const RunReport& report);

/// Sorted (x, u) pairs from a CSV with an "x,u" header.
std::vector<std::pair<double, double>> read_xy_csv(const std::filesystem::path& path);

}  // namespace capflow::io
