#pragma once

// UE selection: pick N_s of the available UEs either by best SNR (MG) or by
// smallest differential propagation delay (MS).

#include <span>
#include <string_view>
#include <vector>

namespace ntn {

enum class SchedulerKind { MG, MS };

std::string_view to_string(SchedulerKind s);
SchedulerKind parse_scheduler(std::string_view s);

struct UeCandidate {
    int ue_id = 0;
    double snr_db = 0.0;
    double delay_ms = 0.0;
};

struct SelectionResult {
    std::vector<int> selected_ids; // ascending
    double tau_min_ms = 0.0;       // over the selected set
    double tau_max_ms = 0.0;
    double delay_spread_ms = 0.0;
    double min_snr_db = 0.0;
    SchedulerKind method = SchedulerKind::MG;
};

/// Top-N_s by SNR; ties go to the smaller id. Maximizes the minimum SNR of the set.
SelectionResult select_mg(std::span<const UeCandidate> ues, int n_s);

/// Contiguous window of N_s UEs in delay order with the smallest spread; ties
/// go to the earliest window (delay, then id).
SelectionResult select_ms(std::span<const UeCandidate> ues, int n_s);

SelectionResult select(SchedulerKind kind, std::span<const UeCandidate> ues, int n_s);

} // namespace ntn
