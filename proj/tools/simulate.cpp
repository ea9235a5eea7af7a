// simulate: Monte Carlo TDD slot-allocation runs and sweeps.
//
//   simulate --config configs/reference.json --policy essa --scheduler ms
//            --sweep altitude --values 300 400 500 600 700 800 --out out/
//
// Exit codes: 0 success, 2 invalid configuration/arguments, 3 interference
// detected by the verifier (a defect), 1 anything else. Errors are printed to
// stderr as one JSON object.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "ntn/errors.hpp"
#include "ntn/output.hpp"
#include "ntn/simulation.hpp"

namespace {

int fail(int code, const std::string& kind, const std::string& message, const std::string& field = "") {
    nlohmann::json err = {{"error", kind}, {"message", message}};
    if (!field.empty()) err["field"] = field;
    std::cerr << err.dump() << '\n';
    return code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"TDD slot allocation and scheduling simulator for LEO non-terrestrial networks"};

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> runs;
    std::optional<int> threads;
    std::string policy, scheduler, pattern, delay_scope, sweep;
    std::vector<std::string> values;
    std::string out_dir = "out";
    bool emit_traces = false;
    bool calibrate = false;

    app.add_option("--config", config_path, "Scenario configuration (JSON)")->required();
    app.add_option("--seed", seed, "Root random seed");
    app.add_option("--runs", runs, "Monte Carlo runs per point");
    app.add_option("--threads", threads, "Worker threads (0 = all cores)");
    app.add_option("--policy", policy, "Slot allocation: ta|essa");
    app.add_option("--scheduler", scheduler, "UE selection: mg|ms");
    app.add_option("--pattern", pattern, "Slot pattern: dsu|2dsu|4dsu|6dsu|<X>dsu");
    app.add_option("--delay-scope", delay_scope, "Delay extremes from: selected|cell");
    auto* sweep_opt = app.add_option("--sweep", sweep, "Sweep axis: alpha_min|altitude|pattern");
    app.add_option("--values", values, "Sweep values")->needs(sweep_opt);
    app.add_option("--out", out_dir, "Output directory");
    app.add_flag("--emit-traces", emit_traces, "Write one slot trace per run");
    app.add_flag("--calibrate", calibrate, "Calibrate link gain to the 29 dB MG median SNR reference before running");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail(2, "usage", e.what());
    }

    try {
        ntn::ScenarioConfig config = ntn::load_config(config_path);
        try {
            if (seed) config.seed = *seed;
            if (runs) config.runs = *runs;
            if (threads) config.threads = *threads;
            if (!policy.empty()) config.policy = ntn::parse_policy(policy);
            if (!scheduler.empty()) config.scheduler = ntn::parse_scheduler(scheduler);
            if (!pattern.empty()) config.pattern = ntn::SlotPattern::parse(pattern);
            if (!delay_scope.empty()) config.delay_scope = ntn::parse_delay_scope(delay_scope);
        } catch (const ntn::DomainError& e) {
            return fail(2, "usage", e.what());
        }
        config.validate();

        ntn::SweepAxis axis = ntn::SweepAxis::None;
        if (!sweep.empty()) {
            try {
                axis = ntn::parse_sweep_axis(sweep);
            } catch (const ntn::DomainError& e) {
                return fail(2, "usage", e.what(), "sweep");
            }
            if (values.empty()) return fail(2, "usage", "--sweep needs --values", "values");
        }

        if (calibrate) {
            const auto cal = ntn::calibrate_gain(config);
            config.link.calibration_gain_db = cal.gain_db;
            std::cout << fmt::format("calibration_gain_db={:.4f} median_snr_db={:.3f} iterations={}\n", cal.gain_db,
                                     cal.median_snr_db, cal.iterations);
        }

        const ntn::SweepTable table = ntn::run_sweep(config, axis, values, emit_traces);
        const auto files = ntn::write_sweep(table, out_dir, emit_traces);

        for (const auto& row : table.rows) {
            const auto& a = row.aggregate;
            std::cout << fmt::format(
                "{}{}{}-{} {}: guard={:.3f} ms usage={:.2f}% (dl {:.2f}%, ul {:.2f}%) capacity={:.1f} Mbps "
                "(dl {:.1f}, ul {:.1f}) runs={}\n",
                row.axis_value, row.axis_value.empty() ? "" : " ", ntn::to_string(row.config.scheduler),
                ntn::to_string(row.config.policy), row.config.pattern.name(), a.avg_guard_period_ms,
                a.channel_usage_pct, a.dl_usage_pct, a.ul_usage_pct, a.avg_capacity_mbps, a.dl_capacity_mbps,
                a.ul_capacity_mbps, a.n_runs);
        }
        std::cout << "wrote " << files.csv.string() << " and " << files.json.string() << '\n';
        return 0;
    } catch (const ntn::ConfigError& e) {
        return fail(2, "config", e.what(), e.field());
    } catch (const ntn::VerificationError& e) {
        std::cerr << e.trace() << '\n';
        return fail(3, "verification", e.what());
    } catch (const ntn::InfeasibleError& e) {
        return fail(2, "infeasible", e.what());
    } catch (const std::exception& e) {
        return fail(1, "runtime", e.what());
    }
}
