#pragma once

// Scenario configuration: physical, protocol and Monte Carlo parameters, with
// a JSON representation. Every key is optional and defaults to the reference
// scenario; unknown keys are rejected.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "ntn/channel.hpp"
#include "ntn/scheduler.hpp"
#include "ntn/tdd_schedule.hpp"

namespace ntn {

/// Which UEs define tau_m / tau_M for slot allocation.
enum class DelayScope { Selected, Cell };

std::string_view to_string(DelayScope d);
DelayScope parse_delay_scope(std::string_view s);

struct ScenarioConfig {
    double altitude_km = 600.0;
    double earth_radius_km = kEarthRadiusKm;
    double alpha_min_deg = 50.0;
    double alpha_max_deg = 90.0;
    int n_ue = 100;
    int n_s = 10;

    LinkBudgetParams link;
    std::string profile_name = "urban_ka";
    ChannelProfile profile = ChannelProfile::urban_ka_band();

    SlotGrid grid;
    SlotPattern pattern;
    Policy policy = Policy::TA;
    SchedulerKind scheduler = SchedulerKind::MG;
    DelayScope delay_scope = DelayScope::Selected;

    int runs = 200;
    std::uint64_t seed = 1;
    int threads = 0; // 0: hardware concurrency

    /// Throws ConfigError naming the first offending field.
    void validate() const;

    SatelliteGeometry<double> geometry() const { return {altitude_km, earth_radius_km}; }
};

ScenarioConfig parse_config(const nlohmann::json& doc);
ScenarioConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const ScenarioConfig& config);

/// FNV-1a 64 of a byte string.
std::uint64_t fnv1a64(std::string_view bytes);
/// Digest of the canonical JSON form.
std::uint64_t config_digest(const ScenarioConfig& config);

} // namespace ntn
