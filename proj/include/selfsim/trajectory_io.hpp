#pragma once

#include <filesystem>
#include <iosfwd>

#include <json.hpp>

#include "selfsim/integrator.hpp"
#include "selfsim/shooting.hpp"
#include "selfsim/trajectory.hpp"

namespace selfsim {

using nlohmann::json;

json to_json(const Params& params);
json to_json(const IntegrationOptions& options);
json to_json(const TrajectoryMeta& meta);
TrajectoryMeta meta_from_json(const json& j);

/// Header `coord,value,slope[,curvature]`, shortest round-trip decimals.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
/// Inverse of write_trajectory_csv. Throws InvalidArgument on malformed
/// rows, reporting the line number.
Trajectory read_trajectory_csv(std::istream& in, const TrajectoryMeta& meta);

/// Writes `path` (CSV) and `path` + ".json" (meta sidecar).
void save_trajectory(const std::filesystem::path& path, const Trajectory& traj);
Trajectory load_trajectory(const std::filesystem::path& path);

/// Columns a,tag,terminal_value,ell,ell_converged (empty cells when absent).
void write_sweep_csv(std::ostream& out, const SweepResult& result);
json sweep_summary(const SweepResult& result);

/// Columns r,c,I,residual.
void write_ledger_csv(std::ostream& out, const EnergyLedger& ledger);

/// Columns delta,inward_termination,inward_exit_log_distance,
/// outward_termination,outward_exit_radius,survivor,inconclusive.
void write_probe_csv(std::ostream& out, const ProbeReport& report);
json probe_summary(const ProbeReport& report);

}  // namespace selfsim
