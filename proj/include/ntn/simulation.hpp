#pragma once

// Monte Carlo driver: scenario drops, the select -> allocate -> verify ->
// measure pipeline, parameter sweeps and link-budget calibration.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ntn/config.hpp"
#include "ntn/metrics.hpp"

namespace ntn {

enum class SweepAxis { None, AlphaMin, Altitude, Pattern };

std::string_view to_string(SweepAxis a);
SweepAxis parse_sweep_axis(std::string_view s);

struct Scenario {
    std::vector<UeGeometry> ues;
    std::vector<LinkQuality> links; // parallel to ues
};

/// Draws elevations uniformly in [alpha_min, alpha_max] and evaluates geometry
/// and link quality. The stream depends only on (seed, run_index).
Scenario generate_scenario(const ScenarioConfig& config, std::uint64_t run_index);

struct RunResult {
    std::uint64_t config_digest = 0;
    std::uint64_t run_index = 0;
    SelectionResult selection;
    MetricsReport metrics;
    std::uint64_t trace_digest = 0;
    std::string trace; // filled only when traces are requested
};

/// Throws VerificationError if the generated schedule fails the interference check.
RunResult run_single(const ScenarioConfig& config, std::uint64_t run_index, bool keep_trace = false);

/// All `config.runs` runs, executed on `config.threads` workers, ordered by run index.
std::vector<RunResult> run_batch(const ScenarioConfig& config, bool keep_traces = false);

/// Copy of `base` with one axis set to `value` ("60", "400", "4dsu", ...).
ScenarioConfig apply_axis(const ScenarioConfig& base, SweepAxis axis, const std::string& value);

struct SweepRow {
    std::string axis_value;
    ScenarioConfig config;
    MetricsReport aggregate;
    std::vector<RunResult> runs;
};

struct SweepTable {
    SweepAxis axis = SweepAxis::None;
    std::vector<SweepRow> rows;
};

SweepTable run_sweep(const ScenarioConfig& base, SweepAxis axis, std::span<const std::string> values,
                     bool keep_traces = false);

/// Median SNR over every UE selected by MG, pooled across `runs` drops.
double median_selected_snr(const ScenarioConfig& config, int runs);

struct CalibrationResult {
    double gain_db = 0.0;
    double median_snr_db = 0.0;
    int iterations = 0;
};

/// Bisects link.calibration_gain_db until the MG-selected median SNR of the
/// reference drop (h = 300 km, alpha_min = 50 deg) is within `tolerance_db`
/// of `target_db`. Other fields of `base` (profile, seed, N_UE, ...) are kept.
CalibrationResult calibrate_gain(const ScenarioConfig& base, double target_db = 29.0, int runs = 1000,
                                 double tolerance_db = 0.05);

} // namespace ntn
