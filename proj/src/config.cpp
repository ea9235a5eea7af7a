#include "ntn/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <initializer_list>

#include "ntn/errors.hpp"

namespace ntn {
namespace {

using nlohmann::json;

void require_object(const json& node, const std::string& path) {
    if (!node.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
}

void reject_unknown(const json& node, const std::string& path, std::initializer_list<std::string_view> known) {
    require_object(node, path);
    for (const auto& item : node.items()) {
        if (std::find(known.begin(), known.end(), item.key()) == known.end())
            throw ConfigError(path.empty() ? item.key() : path + "." + item.key(), "unknown key");
    }
}

std::string join(const std::string& path, std::string_view key) {
    return path.empty() ? std::string(key) : path + "." + std::string(key);
}

template <typename T>
void read(const json& node, const std::string& path, std::string_view key, T& out) {
    const auto it = node.find(std::string(key));
    if (it == node.end()) return;
    try {
        if constexpr (std::is_same_v<T, double>) {
            if (!it->is_number()) throw ConfigError(join(path, key), "expected a number");
        } else if constexpr (std::is_integral_v<T>) {
            if (!it->is_number_integer()) throw ConfigError(join(path, key), "expected an integer");
        } else {
            if (!it->is_string()) throw ConfigError(join(path, key), "expected a string");
        }
        out = it->get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(join(path, key), e.what());
    }
}

template <typename Fn>
auto parse_enum(const json& node, const std::string& path, std::string_view key, Fn parse, decltype(parse("")) fallback) {
    std::string text;
    read(node, path, key, text);
    if (text.empty()) return fallback;
    try {
        return parse(text);
    } catch (const DomainError& e) {
        throw ConfigError(join(path, key), e.what());
    }
}

ChannelProfile named_profile(const std::string& name) {
    if (name == "urban_ka") return ChannelProfile::urban_ka_band();
    if (name == "zero_loss") return ChannelProfile::zero_loss();
    throw ConfigError("channel.profile", "unknown profile '" + name + "' (expected urban_ka|zero_loss|custom)");
}

} // namespace

std::string_view to_string(DelayScope d) { return d == DelayScope::Selected ? "selected" : "cell"; }

DelayScope parse_delay_scope(std::string_view s) {
    std::string lower(s);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "selected") return DelayScope::Selected;
    if (lower == "cell") return DelayScope::Cell;
    throw DomainError("unknown delay scope '" + std::string(s) + "' (expected selected|cell)");
}

void ScenarioConfig::validate() const {
    auto fail = [](const char* field, const char* message) { throw ConfigError(field, message); };
    if (!(altitude_km > 0)) fail("scenario.altitude_km", "must be > 0");
    if (!(earth_radius_km > 0)) fail("scenario.earth_radius_km", "must be > 0");
    if (!(alpha_min_deg > 0 && alpha_min_deg <= 90)) fail("scenario.alpha_min_deg", "must lie in (0, 90]");
    if (!(alpha_max_deg > 0 && alpha_max_deg <= 90)) fail("scenario.alpha_max_deg", "must lie in (0, 90]");
    if (alpha_min_deg > alpha_max_deg) fail("scenario.alpha_min_deg", "must not exceed alpha_max_deg");
    if (n_ue < 1) fail("scenario.n_ue", "must be >= 1");
    if (n_s < 1) fail("scenario.n_s", "must be >= 1");
    if (n_s > n_ue) fail("scenario.n_s", "must not exceed n_ue");
    if (!(link.bandwidth_mhz > 0)) fail("link.bandwidth_mhz", "must be > 0");
    if (!(link.noise_temperature_k > 0)) fail("link.noise_temperature_k", "must be > 0");
    if (!(link.carrier_freq_ghz > 0)) fail("link.carrier_freq_ghz", "must be > 0");
    if (!(grid.slot_ms > 0)) fail("frame.slot_ms", "must be > 0");
    if (grid.horizon_slots < 1) fail("frame.horizon_slots", "must be >= 1");
    if (grid.ul_slots < 1) fail("frame.ul_slots", "must be >= 1");
    if (pattern.dl_slots < 1) fail("frame.pattern", "needs at least one DL slot");
    if (runs < 1) fail("monte_carlo.runs", "must be >= 1");
    if (threads < 0) fail("monte_carlo.threads", "must be >= 0");
}

ScenarioConfig parse_config(const json& doc) {
    reject_unknown(doc, "", {"scenario", "link", "channel", "frame", "policy", "scheduler", "delay_scope",
                             "monte_carlo"});
    ScenarioConfig c;

    if (const auto it = doc.find("scenario"); it != doc.end()) {
        const std::string p = "scenario";
        reject_unknown(*it, p, {"altitude_km", "earth_radius_km", "alpha_min_deg", "alpha_max_deg", "n_ue", "n_s"});
        read(*it, p, "altitude_km", c.altitude_km);
        read(*it, p, "earth_radius_km", c.earth_radius_km);
        read(*it, p, "alpha_min_deg", c.alpha_min_deg);
        read(*it, p, "alpha_max_deg", c.alpha_max_deg);
        read(*it, p, "n_ue", c.n_ue);
        read(*it, p, "n_s", c.n_s);
    }

    if (const auto it = doc.find("link"); it != doc.end()) {
        const std::string p = "link";
        reject_unknown(*it, p, {"tx_power_dbw", "total_antenna_gain_dbi", "carrier_freq_ghz", "bandwidth_mhz",
                                "noise_temperature_k", "noise_figure_db", "calibration_gain_db"});
        read(*it, p, "tx_power_dbw", c.link.tx_power_dbw);
        read(*it, p, "total_antenna_gain_dbi", c.link.total_antenna_gain_dbi);
        read(*it, p, "carrier_freq_ghz", c.link.carrier_freq_ghz);
        read(*it, p, "bandwidth_mhz", c.link.bandwidth_mhz);
        read(*it, p, "noise_temperature_k", c.link.noise_temperature_k);
        read(*it, p, "noise_figure_db", c.link.noise_figure_db);
        read(*it, p, "calibration_gain_db", c.link.calibration_gain_db);
    }

    if (const auto it = doc.find("channel"); it != doc.end()) {
        const std::string p = "channel";
        reject_unknown(*it, p, {"profile", "table"});
        read(*it, p, "profile", c.profile_name);
        if (const auto table = it->find("table"); table != it->end()) {
            if (it->contains("profile") && c.profile_name != "custom")
                throw ConfigError("channel.profile", "must be 'custom' (or omitted) when a table is given");
            if (!table->is_array()) throw ConfigError("channel.table", "expected an array of rows");
            std::vector<ChannelProfile::Row> rows;
            for (std::size_t i = 0; i < table->size(); ++i) {
                const std::string rp = "channel.table[" + std::to_string(i) + "]";
                const json& row = (*table)[i];
                reject_unknown(row, rp, {"elevation_deg", "atmospheric_loss_db", "scintillation_loss_db",
                                         "shadowing_sigma_db"});
                ChannelProfile::Row r{0.0, 0.0, 0.0, 0.0};
                if (!row.contains("elevation_deg")) throw ConfigError(rp + ".elevation_deg", "required");
                read(row, rp, "elevation_deg", r.elevation_deg);
                read(row, rp, "atmospheric_loss_db", r.atmospheric_loss_db);
                read(row, rp, "scintillation_loss_db", r.scintillation_loss_db);
                read(row, rp, "shadowing_sigma_db", r.shadowing_sigma_db);
                rows.push_back(r);
            }
            try {
                c.profile = ChannelProfile(std::move(rows));
            } catch (const DomainError& e) {
                throw ConfigError("channel.table", e.what());
            }
            c.profile_name = "custom";
        } else {
            if (c.profile_name == "custom") throw ConfigError("channel.table", "required when profile is 'custom'");
            c.profile = named_profile(c.profile_name);
        }
    }

    if (const auto it = doc.find("frame"); it != doc.end()) {
        const std::string p = "frame";
        reject_unknown(*it, p, {"slot_ms", "horizon_slots", "ul_slots", "pattern"});
        read(*it, p, "slot_ms", c.grid.slot_ms);
        read(*it, p, "horizon_slots", c.grid.horizon_slots);
        read(*it, p, "ul_slots", c.grid.ul_slots);
        c.pattern = parse_enum(*it, p, "pattern", SlotPattern::parse, c.pattern);
    }

    c.policy = parse_enum(doc, "", "policy", parse_policy, c.policy);
    c.scheduler = parse_enum(doc, "", "scheduler", parse_scheduler, c.scheduler);
    c.delay_scope = parse_enum(doc, "", "delay_scope", parse_delay_scope, c.delay_scope);

    if (const auto it = doc.find("monte_carlo"); it != doc.end()) {
        const std::string p = "monte_carlo";
        reject_unknown(*it, p, {"runs", "seed", "threads"});
        read(*it, p, "runs", c.runs);
        read(*it, p, "seed", c.seed);
        read(*it, p, "threads", c.threads);
    }

    c.validate();
    return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("<file>", "cannot open " + path.string());
    json doc;
    try {
        doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw ConfigError("<file>", std::string("parse error: ") + e.what());
    }
    return parse_config(doc);
}

json to_json(const ScenarioConfig& c) {
    json table = json::array();
    for (const auto& r : c.profile.rows())
        table.push_back({{"elevation_deg", r.elevation_deg},
                         {"atmospheric_loss_db", r.atmospheric_loss_db},
                         {"scintillation_loss_db", r.scintillation_loss_db},
                         {"shadowing_sigma_db", r.shadowing_sigma_db}});
    return {
        {"scenario",
         {{"altitude_km", c.altitude_km},
          {"earth_radius_km", c.earth_radius_km},
          {"alpha_min_deg", c.alpha_min_deg},
          {"alpha_max_deg", c.alpha_max_deg},
          {"n_ue", c.n_ue},
          {"n_s", c.n_s}}},
        {"link",
         {{"tx_power_dbw", c.link.tx_power_dbw},
          {"total_antenna_gain_dbi", c.link.total_antenna_gain_dbi},
          {"carrier_freq_ghz", c.link.carrier_freq_ghz},
          {"bandwidth_mhz", c.link.bandwidth_mhz},
          {"noise_temperature_k", c.link.noise_temperature_k},
          {"noise_figure_db", c.link.noise_figure_db},
          {"calibration_gain_db", c.link.calibration_gain_db}}},
        {"channel", {{"profile", "custom"}, {"table", table}}},
        {"frame",
         {{"slot_ms", c.grid.slot_ms},
          {"horizon_slots", c.grid.horizon_slots},
          {"ul_slots", c.grid.ul_slots},
          {"pattern", c.pattern.name()}}},
        {"policy", std::string(to_string(c.policy))},
        {"scheduler", std::string(to_string(c.scheduler))},
        {"delay_scope", std::string(to_string(c.delay_scope))},
        {"monte_carlo", {{"runs", c.runs}, {"seed", c.seed}, {"threads", c.threads}}},
    };
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t config_digest(const ScenarioConfig& config) {
    json doc = to_json(config);
    doc["monte_carlo"].erase("threads"); // parallelism does not change results
    return fnv1a64(doc.dump());
}

} // namespace ntn
