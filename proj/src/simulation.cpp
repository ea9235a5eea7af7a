#include "ntn/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <random>
#include <sstream>
#include <thread>

#include "ntn/errors.hpp"
#include "ntn/random.hpp"

namespace ntn {
namespace {

std::vector<UeCandidate> candidates(const Scenario& s) {
    std::vector<UeCandidate> out;
    out.reserve(s.ues.size());
    for (std::size_t i = 0; i < s.ues.size(); ++i) out.push_back({s.ues[i].ue_id, s.links[i].snr_db, s.ues[i].delay_ms});
    return out;
}

int worker_count(const ScenarioConfig& config) {
    if (config.threads > 0) return config.threads;
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

// Runs fn(i) for i in [0, n) on `threads` workers; rethrows the failure with the
// lowest index so errors are reported deterministically.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn fn) {
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const int workers = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), n));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (int t = 0; t < workers; ++t) pool.emplace_back(work);
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace

std::string_view to_string(SweepAxis a) {
    switch (a) {
    case SweepAxis::AlphaMin: return "alpha_min";
    case SweepAxis::Altitude: return "altitude";
    case SweepAxis::Pattern: return "pattern";
    case SweepAxis::None: break;
    }
    return "none";
}

SweepAxis parse_sweep_axis(std::string_view s) {
    if (s == "alpha_min") return SweepAxis::AlphaMin;
    if (s == "altitude") return SweepAxis::Altitude;
    if (s == "pattern") return SweepAxis::Pattern;
    if (s == "none") return SweepAxis::None;
    throw DomainError("unknown sweep axis '" + std::string(s) + "' (expected alpha_min|altitude|pattern)");
}

Scenario generate_scenario(const ScenarioConfig& config, std::uint64_t run_index) {
    config.validate();
    RandomStream rng = derive_stream(config.seed, run_index);
    std::uniform_real_distribution<double> elevation(config.alpha_min_deg, config.alpha_max_deg);
    Eigen::ArrayXd alpha(config.n_ue);
    for (Eigen::Index i = 0; i < alpha.size(); ++i)
        alpha(i) = config.alpha_min_deg == config.alpha_max_deg ? config.alpha_min_deg : elevation(rng);

    Scenario s;
    s.ues = make_ues(alpha, config.geometry());
    s.links.reserve(s.ues.size());
    for (const auto& ue : s.ues) s.links.push_back(link_quality(ue, config.link, config.profile, rng));
    return s;
}

RunResult run_single(const ScenarioConfig& config, std::uint64_t run_index, bool keep_trace) {
    const Scenario scenario = generate_scenario(config, run_index);
    const auto pool = candidates(scenario);

    RunResult result;
    result.config_digest = config_digest(config);
    result.run_index = run_index;
    result.selection = select(config.scheduler, pool, config.n_s);

    std::vector<UeGeometry> scheduled;
    std::vector<LinkQuality> links;
    for (int id : result.selection.selected_ids) {
        scheduled.push_back(scenario.ues[static_cast<std::size_t>(id)]);
        links.push_back(scenario.links[static_cast<std::size_t>(id)]);
    }

    // Delay extremes that the allocation must protect, and the UEs it protects.
    const bool cell = config.delay_scope == DelayScope::Cell;
    const std::span<const UeGeometry> protected_ues = cell ? std::span<const UeGeometry>(scenario.ues)
                                                           : std::span<const UeGeometry>(scheduled);
    const DelayExtremes extremes = delay_extremes(protected_ues);

    const SlotTimeline timeline =
        config.policy == Policy::TA
            ? build_ta_timeline(config.grid, config.pattern, extremes.tau_max_ms, extremes.tau_min_ms)
            : build_essa_timeline(config.grid, config.pattern, extremes.tau_min_ms, extremes.tau_max_ms);

    const std::string trace = timeline.trace();
    const auto violations = verify_no_interference(timeline, protected_ues, assign_all(timeline, protected_ues));
    if (!violations.empty()) {
        std::ostringstream os;
        os << "interference in run " << run_index << " (" << violations.size()
           << " violations), first: " << violations.front().describe();
        throw VerificationError(os.str(), trace);
    }

    result.metrics = evaluate(timeline, result.selection, links);
    result.trace_digest = fnv1a64(trace);
    if (keep_trace) result.trace = trace;
    return result;
}

std::vector<RunResult> run_batch(const ScenarioConfig& config, bool keep_traces) {
    config.validate();
    std::vector<RunResult> results(static_cast<std::size_t>(config.runs));
    parallel_for(results.size(), worker_count(config),
                 [&](std::size_t i) { results[i] = run_single(config, i, keep_traces); });
    return results;
}

ScenarioConfig apply_axis(const ScenarioConfig& base, SweepAxis axis, const std::string& value) {
    ScenarioConfig c = base;
    auto number = [&](const char* field) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(value, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != value.size() || value.empty())
            throw ConfigError(field, "sweep value '" + value + "' is not a number");
        return v;
    };
    switch (axis) {
    case SweepAxis::AlphaMin: c.alpha_min_deg = number("sweep.alpha_min"); break;
    case SweepAxis::Altitude: c.altitude_km = number("sweep.altitude"); break;
    case SweepAxis::Pattern:
        try {
            c.pattern = SlotPattern::parse(value);
        } catch (const DomainError& e) {
            throw ConfigError("sweep.pattern", e.what());
        }
        break;
    case SweepAxis::None: break;
    }
    c.validate();
    return c;
}

SweepTable run_sweep(const ScenarioConfig& base, SweepAxis axis, std::span<const std::string> values,
                     bool keep_traces) {
    SweepTable table;
    table.axis = axis;
    std::vector<std::string> points(values.begin(), values.end());
    if (axis == SweepAxis::None || points.empty()) points = {""};
    for (const auto& v : points) {
        SweepRow row;
        row.axis_value = v;
        row.config = axis == SweepAxis::None ? base : apply_axis(base, axis, v);
        row.runs = run_batch(row.config, keep_traces);
        MetricsAccumulator acc;
        for (const auto& r : row.runs) acc.add(r.metrics);
        row.aggregate = acc.result();
        table.rows.push_back(std::move(row));
    }
    return table;
}

double median_selected_snr(const ScenarioConfig& config, int runs) {
    if (runs < 1) throw DomainError("median needs at least one run");
    std::vector<std::vector<double>> per_run(static_cast<std::size_t>(runs));
    parallel_for(per_run.size(), worker_count(config), [&](std::size_t i) {
        const Scenario s = generate_scenario(config, i);
        const auto sel = select_mg(candidates(s), config.n_s);
        for (int id : sel.selected_ids) per_run[i].push_back(s.links[static_cast<std::size_t>(id)].snr_db);
    });
    std::vector<double> pooled;
    for (const auto& v : per_run) pooled.insert(pooled.end(), v.begin(), v.end());
    std::sort(pooled.begin(), pooled.end());
    const std::size_t n = pooled.size();
    return n % 2 ? pooled[n / 2] : 0.5 * (pooled[n / 2 - 1] + pooled[n / 2]);
}

CalibrationResult calibrate_gain(const ScenarioConfig& base, double target_db, int runs, double tolerance_db) {
    ScenarioConfig c = base;
    c.altitude_km = 300.0;
    c.alpha_min_deg = 50.0;
    c.alpha_max_deg = std::max(c.alpha_max_deg, 50.0);
    c.scheduler = SchedulerKind::MG;

    auto median_at = [&](double gain) {
        c.link.calibration_gain_db = gain;
        return median_selected_snr(c, runs);
    };

    double lo = -100.0;
    double hi = 200.0;
    if (median_at(lo) > target_db || median_at(hi) < target_db)
        throw DomainError("calibration target outside the search bracket");

    CalibrationResult out;
    for (out.iterations = 1; out.iterations <= 100; ++out.iterations) {
        const double mid = 0.5 * (lo + hi);
        const double m = median_at(mid);
        out.gain_db = mid;
        out.median_snr_db = m;
        if (std::abs(m - target_db) <= tolerance_db) return out;
        (m < target_db ? lo : hi) = mid;
    }
    throw DomainError("calibration did not converge");
}

} // namespace ntn
