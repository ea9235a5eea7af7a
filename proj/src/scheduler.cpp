#include "ntn/scheduler.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <string>

#include "ntn/errors.hpp"

namespace ntn {
namespace {

void check_size(std::span<const UeCandidate> ues, int n_s) {
    if (n_s <= 0) throw DomainError("N_s must be >= 1");
    if (static_cast<std::size_t>(n_s) > ues.size()) throw DomainError("N_s exceeds the number of available UEs");
}

SelectionResult summarize(std::vector<UeCandidate> chosen, SchedulerKind method) {
    SelectionResult r;
    r.method = method;
    r.tau_min_ms = std::numeric_limits<double>::infinity();
    r.tau_max_ms = -std::numeric_limits<double>::infinity();
    r.min_snr_db = std::numeric_limits<double>::infinity();
    for (const auto& c : chosen) {
        r.selected_ids.push_back(c.ue_id);
        r.tau_min_ms = std::min(r.tau_min_ms, c.delay_ms);
        r.tau_max_ms = std::max(r.tau_max_ms, c.delay_ms);
        r.min_snr_db = std::min(r.min_snr_db, c.snr_db);
    }
    std::sort(r.selected_ids.begin(), r.selected_ids.end());
    r.delay_spread_ms = r.tau_max_ms - r.tau_min_ms;
    return r;
}

} // namespace

std::string_view to_string(SchedulerKind s) { return s == SchedulerKind::MG ? "mg" : "ms"; }

SchedulerKind parse_scheduler(std::string_view s) {
    std::string lower(s);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "mg") return SchedulerKind::MG;
    if (lower == "ms") return SchedulerKind::MS;
    throw DomainError("unknown scheduler '" + std::string(s) + "' (expected mg|ms)");
}

SelectionResult select_mg(std::span<const UeCandidate> ues, int n_s) {
    check_size(ues, n_s);
    std::vector<UeCandidate> sorted(ues.begin(), ues.end());
    std::sort(sorted.begin(), sorted.end(), [](const UeCandidate& a, const UeCandidate& b) {
        return a.snr_db != b.snr_db ? a.snr_db > b.snr_db : a.ue_id < b.ue_id;
    });
    sorted.resize(static_cast<std::size_t>(n_s));
    return summarize(std::move(sorted), SchedulerKind::MG);
}

SelectionResult select_ms(std::span<const UeCandidate> ues, int n_s) {
    check_size(ues, n_s);
    std::vector<UeCandidate> sorted(ues.begin(), ues.end());
    std::sort(sorted.begin(), sorted.end(), [](const UeCandidate& a, const UeCandidate& b) {
        return a.delay_ms != b.delay_ms ? a.delay_ms < b.delay_ms : a.ue_id < b.ue_id;
    });
    // For max |tau_i - tau_j| an optimal set is always a window of the sorted order.
    const std::size_t n = static_cast<std::size_t>(n_s);
    std::size_t best = 0;
    double best_spread = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + n <= sorted.size(); ++i) {
        const double spread = sorted[i + n - 1].delay_ms - sorted[i].delay_ms;
        if (spread < best_spread) {
            best_spread = spread;
            best = i;
        }
    }
    std::vector<UeCandidate> window(sorted.begin() + static_cast<std::ptrdiff_t>(best),
                                    sorted.begin() + static_cast<std::ptrdiff_t>(best + n));
    return summarize(std::move(window), SchedulerKind::MS);
}

SelectionResult select(SchedulerKind kind, std::span<const UeCandidate> ues, int n_s) {
    return kind == SchedulerKind::MG ? select_mg(ues, n_s) : select_ms(ues, n_s);
}

} // namespace ntn
