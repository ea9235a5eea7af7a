#include "ntn/output.hpp"

#include <fstream>

#include <fmt/format.h>

#include "ntn/errors.hpp"

namespace ntn {
namespace {

std::string number(double v) { return fmt::format("{:.6f}", v); }

std::string hex(std::uint64_t v) { return fmt::format("{:016x}", v); }

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

} // namespace

std::string sweep_csv(const SweepTable& table) {
    std::string out = "axis_value,policy,scheduler,pattern,metric,mean,ci95,n_runs\n";
    for (const auto& row : table.rows) {
        const MetricVector mean = row.aggregate.values();
        for (int m = 0; m < kMetricCount; ++m) {
            const std::string ci = row.aggregate.ci95_halfwidth ? number((*row.aggregate.ci95_halfwidth)(m)) : "";
            out += fmt::format("{},{},{},{},{},{},{},{}\n", row.axis_value, to_string(row.config.policy),
                               to_string(row.config.scheduler), row.config.pattern.name(), kMetricNames[m],
                               number(mean(m)), ci, row.aggregate.n_runs);
        }
    }
    return out;
}

nlohmann::json sweep_json(const SweepTable& table) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : table.rows) {
        nlohmann::json metrics = nlohmann::json::object();
        const MetricVector mean = row.aggregate.values();
        for (int m = 0; m < kMetricCount; ++m) {
            nlohmann::json entry = {{"mean", number(mean(m))}};
            if (row.aggregate.ci95_halfwidth) entry["ci95"] = number((*row.aggregate.ci95_halfwidth)(m));
            metrics[std::string(kMetricNames[m])] = entry;
        }
        nlohmann::json runs = nlohmann::json::array();
        for (const auto& r : row.runs)
            runs.push_back({{"run_index", r.run_index},
                            {"selected_ids", r.selection.selected_ids},
                            {"delay_spread_ms", number(r.selection.delay_spread_ms)},
                            {"min_snr_db", number(r.selection.min_snr_db)},
                            {"trace_digest", hex(r.trace_digest)}});
        rows.push_back({{"axis_value", row.axis_value},
                        {"policy", to_string(row.config.policy)},
                        {"scheduler", to_string(row.config.scheduler)},
                        {"pattern", row.config.pattern.name()},
                        {"delay_scope", to_string(row.config.delay_scope)},
                        {"config_digest", hex(config_digest(row.config))},
                        {"n_runs", row.aggregate.n_runs},
                        {"metrics", metrics},
                        {"runs", runs}});
    }
    return {{"axis", to_string(table.axis)}, {"rows", rows}};
}

OutputFiles write_sweep(const SweepTable& table, const std::filesystem::path& dir, bool emit_traces) {
    std::filesystem::create_directories(dir);
    const std::string stem = "sweep_" + std::string(to_string(table.axis));
    OutputFiles files{dir / (stem + ".csv"), dir / (stem + ".json")};
    write_file(files.csv, sweep_csv(table));
    write_file(files.json, sweep_json(table).dump(2) + "\n");
    if (emit_traces) {
        const auto trace_dir = dir / "traces";
        std::filesystem::create_directories(trace_dir);
        for (const auto& row : table.rows) {
            const std::string tag = row.axis_value.empty() ? std::string("base") : row.axis_value;
            for (const auto& r : row.runs)
                write_file(trace_dir / fmt::format("{}_{}_run{:04d}.txt", stem, tag, r.run_index), r.trace + "\n");
        }
    }
    return files;
}

} // namespace ntn
