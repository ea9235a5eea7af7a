#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "ntn/errors.hpp"
#include "ntn/output.hpp"
#include "ntn/simulation.hpp"

using namespace ntn;
using nlohmann::json;

namespace {

std::string error_field(const json& doc) {
    try {
        parse_config(doc);
    } catch (const ConfigError& e) {
        return e.field();
    }
    return "";
}

ScenarioConfig small(int runs = 20) {
    ScenarioConfig c;
    c.runs = runs;
    c.threads = 1;
    return c;
}

} // namespace

TEST_CASE("empty document yields the reference defaults") {
    const auto c = parse_config(json::object());
    CHECK(c.altitude_km == 600.0);
    CHECK(c.alpha_min_deg == 50.0);
    CHECK(c.n_ue == 100);
    CHECK(c.n_s == 10);
    CHECK(c.link.tx_power_dbw == -6.0);
    CHECK(c.link.carrier_freq_ghz == 28.0);
    CHECK(c.grid.slot_ms == 0.125);
    CHECK(c.grid.horizon_slots == 4096);
    CHECK(c.pattern.dl_slots == 1);
    CHECK(c.policy == Policy::TA);
    CHECK(c.scheduler == SchedulerKind::MG);
    CHECK(c.delay_scope == DelayScope::Selected);
}

TEST_CASE("config fields are parsed") {
    const auto c = parse_config(json::parse(R"({
        "scenario": {"altitude_km": 500, "alpha_min_deg": 80, "n_ue": 40, "n_s": 4},
        "frame": {"pattern": "4DSU", "ul_slots": 2},
        "policy": "essa", "scheduler": "MS", "delay_scope": "cell",
        "channel": {"table": [{"elevation_deg": 45, "atmospheric_loss_db": 1.5}]},
        "monte_carlo": {"runs": 7, "seed": 99, "threads": 2}
    })"));
    CHECK(c.altitude_km == 500.0);
    CHECK(c.n_s == 4);
    CHECK(c.pattern.dl_slots == 4);
    CHECK(c.grid.ul_slots == 2);
    CHECK(c.policy == Policy::ESSA);
    CHECK(c.scheduler == SchedulerKind::MS);
    CHECK(c.delay_scope == DelayScope::Cell);
    CHECK(c.profile.atmospheric_loss(10.0) == 1.5);
    CHECK(c.runs == 7);
    CHECK(c.seed == 99);
    CHECK(parse_config(to_json(c)).altitude_km == 500.0);
    CHECK(config_digest(parse_config(to_json(c))) == config_digest(c));
}

TEST_CASE("config errors name the offending field") {
    CHECK(error_field(json::parse(R"({"link": {"tx_powr_dbw": 1}})")) == "link.tx_powr_dbw");
    CHECK(error_field(json::parse(R"({"extra": 1})")) == "extra");
    CHECK(error_field(json::parse(R"({"scenario": {"n_s": 200}})")) == "scenario.n_s");
    CHECK(error_field(json::parse(R"({"scenario": {"alpha_min_deg": 0}})")) == "scenario.alpha_min_deg");
    CHECK(error_field(json::parse(R"({"scenario": {"altitude_km": "high"}})")) == "scenario.altitude_km");
    CHECK(error_field(json::parse(R"({"policy": "fdd"})")) == "policy");
    CHECK(error_field(json::parse(R"({"frame": {"pattern": "SDU"}})")) == "frame.pattern");
    CHECK(error_field(json::parse(R"({"channel": {"profile": "custom"}})")) == "channel.table");
    CHECK(error_field(json::parse(R"({"monte_carlo": {"runs": 0}})")) == "monte_carlo.runs");
}

TEST_CASE("fixed elevation scenario") {
    ScenarioConfig c = small();
    c.altitude_km = 800.0;
    c.alpha_min_deg = c.alpha_max_deg = 70.0;
    const auto s = generate_scenario(c, 0);
    REQUIRE(s.ues.size() == 100);
    for (const auto& u : s.ues) {
        CHECK(std::abs(u.slant_range_km - 845.0) <= 1.0);
        CHECK(std::abs(u.delay_ms - 2.82) <= 0.01);
    }
}

TEST_CASE("elevations are uniform over the configured range") {
    ScenarioConfig c = small();
    c.n_ue = 10000;
    c.n_s = 1;
    const auto s = generate_scenario(c, 3);
    double mean = 0.0;
    for (const auto& u : s.ues) {
        CHECK(u.elevation_deg >= 50.0);
        CHECK(u.elevation_deg <= 90.0);
        mean += u.elevation_deg;
    }
    mean /= 10000.0;
    CHECK(mean >= 69.0);
    CHECK(mean <= 71.0);

    c.alpha_min_deg = 40.0;
    c.alpha_max_deg = 90.0;
    double m2 = 0.0;
    for (const auto& u : generate_scenario(c, 4).ues) m2 += u.elevation_deg;
    m2 /= 10000.0;
    CHECK(m2 >= 63.0);
    CHECK(m2 <= 67.0);
}

TEST_CASE("runs are reproducible and independent of thread count") {
    ScenarioConfig c = small();
    const auto a = run_single(c, 5);
    const auto b = run_single(c, 5);
    CHECK(a.selection.selected_ids == b.selection.selected_ids);
    CHECK(a.trace_digest == b.trace_digest);
    CHECK((a.metrics.values() == b.metrics.values()).all());
    CHECK(run_single(c, 6).selection.selected_ids != a.selection.selected_ids);

    const std::vector<std::string> values = {"300", "600"};
    c.policy = Policy::ESSA;
    c.scheduler = SchedulerKind::MS;
    const auto t1 = sweep_csv(run_sweep(c, SweepAxis::Altitude, values));
    c.threads = 4;
    const auto t4 = sweep_csv(run_sweep(c, SweepAxis::Altitude, values));
    CHECK(t1 == t4);
    CHECK(sweep_json(run_sweep(c, SweepAxis::Altitude, values)).dump() ==
          sweep_json(run_sweep(c, SweepAxis::Altitude, values)).dump());
}

TEST_CASE("MG and MS coincide when every UE is scheduled") {
    ScenarioConfig c = small();
    c.n_ue = c.n_s = 1;
    for (Policy p : {Policy::TA, Policy::ESSA}) {
        c.policy = p;
        c.scheduler = SchedulerKind::MG;
        const auto mg = run_single(c, 2);
        c.scheduler = SchedulerKind::MS;
        const auto ms = run_single(c, 2);
        CHECK(mg.selection.selected_ids == ms.selection.selected_ids);
        CHECK((mg.metrics.values() == ms.metrics.values()).all());
    }
}

TEST_CASE("TA usage at the reference operating point") {
    ScenarioConfig c = small(50);
    c.alpha_min_deg = 70.0;
    c.delay_scope = DelayScope::Cell;
    MetricsAccumulator acc;
    for (const auto& r : run_batch(c)) acc.add(r.metrics);
    const auto m = acc.result();
    CHECK(m.channel_usage_pct > 5.0);
    CHECK(m.channel_usage_pct < 6.2);
}

TEST_CASE("delay spread and SNR ordering between the schedulers") {
    ScenarioConfig c = small(1000);
    std::vector<double> d_mg, d_ms, s_mg, s_ms;
    for (std::uint64_t i = 0; i < 1000; ++i) {
        c.scheduler = SchedulerKind::MG;
        const auto mg = run_single(c, i);
        c.scheduler = SchedulerKind::MS;
        const auto ms = run_single(c, i);
        CHECK(ms.selection.delay_spread_ms <= mg.selection.delay_spread_ms);
        d_mg.push_back(mg.selection.delay_spread_ms);
        d_ms.push_back(ms.selection.delay_spread_ms);
        s_mg.push_back(mg.selection.min_snr_db);
        s_ms.push_back(ms.selection.min_snr_db);
    }
    auto median = [](std::vector<double> v) {
        std::nth_element(v.begin(), v.begin() + static_cast<long>(v.size() / 2), v.end());
        return v[v.size() / 2];
    };
    CHECK(median(s_mg) >= median(s_ms));
    CHECK(median(d_ms) <= median(d_mg));
}

TEST_CASE("calibration reaches the target median SNR") {
    ScenarioConfig c = small();
    c.threads = 0;
    const auto cal = calibrate_gain(c, 29.0, 300, 0.05);
    CHECK(std::abs(cal.median_snr_db - 29.0) <= 0.05);
    ScenarioConfig check = c;
    check.link.calibration_gain_db = cal.gain_db;
    check.altitude_km = 300.0;
    CHECK(std::abs(median_selected_snr(check, 300) - 29.0) <= 0.5);
}

TEST_CASE("infeasible ESSA surfaces as an error") {
    ScenarioConfig c = small();
    c.grid.ul_slots = 40; // t_UL = 5 ms > 2 tau_m
    c.policy = Policy::ESSA;
    CHECK_THROWS_AS(run_single(c, 0), InfeasibleError);
}

TEST_CASE("sweep axes") {
    const ScenarioConfig c = small();
    CHECK(apply_axis(c, SweepAxis::AlphaMin, "60").alpha_min_deg == 60.0);
    CHECK(apply_axis(c, SweepAxis::Pattern, "6dsu").pattern.dl_slots == 6);
    CHECK_THROWS_AS(apply_axis(c, SweepAxis::Altitude, "abc"), ConfigError);
    CHECK_THROWS_AS(apply_axis(c, SweepAxis::AlphaMin, "95"), ConfigError);
    CHECK(parse_sweep_axis("altitude") == SweepAxis::Altitude);
    CHECK_THROWS_AS(parse_sweep_axis("speed"), DomainError);
}

TEST_CASE("CSV layout") {
    ScenarioConfig c = small(3);
    const auto csv = sweep_csv(run_sweep(c, SweepAxis::None, {}));
    CHECK(csv.rfind("axis_value,policy,scheduler,pattern,metric,mean,ci95,n_runs\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + kMetricCount);
    CHECK(csv.find(",ta,mg,DSU,channel_usage_pct,") != std::string::npos);
}
