#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "ntn/simulation.hpp"

namespace ntn {

/// One row per (axis value, metric):
/// axis_value,policy,scheduler,pattern,metric,mean,ci95,n_runs
std::string sweep_csv(const SweepTable& table);

/// Same content as the CSV plus per-run digests.
nlohmann::json sweep_json(const SweepTable& table);

struct OutputFiles {
    std::filesystem::path csv;
    std::filesystem::path json;
};

/// Writes sweep_<axis>.csv / .json into `dir`, and per-run traces under
/// dir/traces/ when `emit_traces` is set.
OutputFiles write_sweep(const SweepTable& table, const std::filesystem::path& dir, bool emit_traces);

} // namespace ntn
