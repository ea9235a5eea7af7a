#pragma once

// TDD slot timelines at the satellite reference point.
//
// Two allocation policies are built on a common slot grid:
//   TA   - one DL block, an idle guard of G = ceil(2 tau_M / slot) slots, one UL
//          block, then the next DL immediately after the UL.
//   ESSA - additional DL blocks are packed into the guard whenever they start
//          late enough after the previous DL that no UE is still transmitting
//          the UL of an earlier block when the new DL reaches it.
//
// verify_no_interference() replays a timeline in continuous time for every
// scheduled UE and is independent of how the timeline was constructed.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ntn/geometry.hpp"

namespace ntn {

using SlotIndex = std::int64_t;

enum class Policy { TA, ESSA };

std::string_view to_string(Policy p);
Policy parse_policy(std::string_view s);

struct SlotGrid {
    double slot_ms = 0.125;
    SlotIndex horizon_slots = 4096;
    int ul_slots = 1; // UL slots per transmission; t_UL = ul_slots * slot_ms

    double ul_duration_ms() const { return ul_slots * slot_ms; }
    void validate() const;
};

/// XDSU: X consecutive DL slots per transmission.
struct SlotPattern {
    int dl_slots = 1;

    std::string name() const; // "DSU", "2DSU", ...
    static SlotPattern parse(std::string_view s);
    void validate() const;
};

enum class SlotState : std::uint8_t { Idle, Downlink, Uplink };

struct Slot {
    SlotState state = SlotState::Idle;
    int tx_index = -1;
};

struct TransmissionRecord {
    int tx_index = 0;
    SlotIndex dl_start = 0;
    int dl_len = 1;
    SlotIndex ul_slot = 0;
    int guard_slots = 0;

    SlotIndex dl_end() const { return dl_start + dl_len; }
};

struct SlotTimeline {
    SlotGrid grid;
    SlotPattern pattern;
    Policy policy = Policy::TA;
    double tau_min_ms = 0.0;
    double tau_max_ms = 0.0;
    int guard_slots = 0;  // G
    int dl_gap_slots = 0; // minimum slots from one DL end to the next DL start
    bool incomplete = false; // horizon shorter than one full transmission
    std::vector<Slot> slots;
    std::vector<TransmissionRecord> records;

    /// Slots excluded at each end of the horizon: one DL/UL round trip.
    SlotIndex warmup_slots() const;
    SlotIndex measure_begin() const { return warmup_slots(); }
    SlotIndex measure_end() const { return grid.horizon_slots - warmup_slots(); }

    /// One character per slot: 'D', 'U' or '.'.
    std::string trace() const;
    /// Index differences between consecutive UL slots (first slot of each UL block).
    std::vector<SlotIndex> ul_separations() const;
};

/// T_i = 2 (tau_M - tau_i).
double timing_advance(double tau_i_ms, double tau_max_ms);

/// T_th = 2 (tau_M - tau_m) + t_UL.
double essa_threshold(double tau_max_ms, double tau_min_ms, double t_ul_ms);

/// ESSA needs 2 tau_m >= t_UL.
bool essa_feasible(double tau_min_ms, double t_ul_ms);

/// G = ceil(2 tau_M / slot).
int guard_slots(double tau_max_ms, double slot_ms);

/// Smallest DL-end to next-DL-start distance (in slots) that keeps every UE
/// clear of its own UL transmission when the UL sits G slots after its DL:
/// G + ceil((t_UL - 2 tau_m) / slot). Never smaller than ceil(T_th / slot).
int essa_dl_gap_slots(double tau_min_ms, double tau_max_ms, const SlotGrid& grid);

SlotTimeline build_ta_timeline(const SlotGrid& grid, const SlotPattern& pattern, double tau_max_ms,
                               double tau_min_ms = -1.0);

/// Throws InfeasibleError when 2 tau_m < t_UL.
SlotTimeline build_essa_timeline(const SlotGrid& grid, const SlotPattern& pattern, double tau_min_ms,
                                 double tau_max_ms);

/// Builds a timeline from explicit DL start slots (UL placed G slots after each
/// DL end). Used to construct adversarial schedules for the verifier.
SlotTimeline build_manual_timeline(const SlotGrid& grid, const SlotPattern& pattern, double tau_min_ms,
                                   double tau_max_ms, std::span<const SlotIndex> dl_starts);

struct Violation {
    enum class Kind { SatelliteOverlap, UeHalfDuplex };
    Kind kind;
    int ue_id;
    int ul_tx;
    int dl_tx;
    double overlap_ms;

    std::string describe() const;
};

/// Per transmission, the ids of the UEs that take part in it.
using Assignment = std::vector<std::vector<int>>;

/// Every UE in `ues` takes part in every transmission.
Assignment assign_all(const SlotTimeline& timeline, std::span<const UeGeometry> ues);

/// Continuous-time replay. Empty result means the schedule is interference-free.
std::vector<Violation> verify_no_interference(const SlotTimeline& timeline, std::span<const UeGeometry> ues,
                                              const Assignment& assignment);

} // namespace ntn
