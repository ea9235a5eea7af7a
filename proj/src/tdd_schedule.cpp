#include "ntn/tdd_schedule.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "ntn/errors.hpp"

namespace ntn {
namespace {

// Durations within this many ms are treated as equal when quantizing to slots
// and when deciding whether two intervals overlap.
constexpr double kTimeEps = 1e-9;

int ceil_slots(double duration_ms, double slot_ms) {
    return static_cast<int>(std::ceil(duration_ms / slot_ms - kTimeEps));
}

SlotTimeline empty_timeline(const SlotGrid& grid, const SlotPattern& pattern, Policy policy,
                            double tau_min_ms, double tau_max_ms) {
    SlotTimeline tl;
    tl.grid = grid;
    tl.pattern = pattern;
    tl.policy = policy;
    tl.tau_min_ms = tau_min_ms;
    tl.tau_max_ms = tau_max_ms;
    tl.slots.assign(static_cast<std::size_t>(grid.horizon_slots), Slot{});
    return tl;
}

void place(SlotTimeline& tl, SlotIndex dl_start) {
    const int tx = static_cast<int>(tl.records.size());
    TransmissionRecord rec{tx, dl_start, tl.pattern.dl_slots, dl_start + tl.pattern.dl_slots + tl.guard_slots,
                           tl.guard_slots};
    for (SlotIndex s = rec.dl_start; s < rec.dl_end(); ++s)
        tl.slots[static_cast<std::size_t>(s)] = {SlotState::Downlink, tx};
    for (SlotIndex s = rec.ul_slot; s < rec.ul_slot + tl.grid.ul_slots; ++s)
        tl.slots[static_cast<std::size_t>(s)] = {SlotState::Uplink, tx};
    tl.records.push_back(rec);
}

// Last occupied slot in [begin, end), or -1.
SlotIndex last_occupied(const SlotTimeline& tl, SlotIndex begin, SlotIndex end) {
    for (SlotIndex s = end - 1; s >= begin; --s)
        if (tl.slots[static_cast<std::size_t>(s)].state != SlotState::Idle) return s;
    return -1;
}

void check_delays(double tau_min_ms, double tau_max_ms) {
    if (!(tau_min_ms >= 0) || !(tau_max_ms >= 0)) throw DomainError("delays must be >= 0");
    if (tau_min_ms > tau_max_ms) throw DomainError("tau_m must not exceed tau_M");
}

} // namespace

std::string_view to_string(Policy p) { return p == Policy::TA ? "ta" : "essa"; }

Policy parse_policy(std::string_view s) {
    std::string lower(s);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "ta") return Policy::TA;
    if (lower == "essa") return Policy::ESSA;
    throw DomainError("unknown policy '" + std::string(s) + "' (expected ta|essa)");
}

void SlotGrid::validate() const {
    if (!(slot_ms > 0)) throw DomainError("slot duration must be > 0");
    if (horizon_slots < 1) throw DomainError("horizon must be at least one slot");
    if (ul_slots < 1) throw DomainError("UL transmissions need at least one slot");
}

std::string SlotPattern::name() const {
    return dl_slots == 1 ? std::string("DSU") : std::to_string(dl_slots) + "DSU";
}

SlotPattern SlotPattern::parse(std::string_view s) {
    std::string upper(s);
    std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return std::toupper(c); });
    if (upper.size() < 3 || upper.substr(upper.size() - 3) != "DSU")
        throw DomainError("slot pattern must look like DSU or <X>DSU, got '" + std::string(s) + "'");
    const std::string prefix = upper.substr(0, upper.size() - 3);
    if (prefix.empty()) return SlotPattern{1};
    if (!std::all_of(prefix.begin(), prefix.end(), [](unsigned char c) { return std::isdigit(c); }))
        throw DomainError("slot pattern must look like DSU or <X>DSU, got '" + std::string(s) + "'");
    SlotPattern p{std::stoi(prefix)};
    p.validate();
    return p;
}

void SlotPattern::validate() const {
    if (dl_slots < 1) throw DomainError("pattern needs at least one DL slot per transmission");
}

SlotIndex SlotTimeline::warmup_slots() const {
    return pattern.dl_slots + guard_slots + grid.ul_slots;
}

std::string SlotTimeline::trace() const {
    std::string out(slots.size(), '.');
    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (slots[i].state == SlotState::Downlink) out[i] = 'D';
        else if (slots[i].state == SlotState::Uplink) out[i] = 'U';
    }
    return out;
}

std::vector<SlotIndex> SlotTimeline::ul_separations() const {
    std::vector<SlotIndex> ul;
    ul.reserve(records.size());
    for (const auto& r : records) ul.push_back(r.ul_slot);
    std::sort(ul.begin(), ul.end());
    std::vector<SlotIndex> sep;
    for (std::size_t i = 1; i < ul.size(); ++i) sep.push_back(ul[i] - ul[i - 1]);
    return sep;
}

double timing_advance(double tau_i_ms, double tau_max_ms) {
    if (tau_i_ms > tau_max_ms) throw DomainError("tau_i exceeds tau_M");
    return 2.0 * (tau_max_ms - tau_i_ms);
}

double essa_threshold(double tau_max_ms, double tau_min_ms, double t_ul_ms) {
    if (tau_min_ms > tau_max_ms) throw DomainError("tau_m exceeds tau_M");
    if (!(t_ul_ms > 0)) throw DomainError("t_UL must be > 0");
    return 2.0 * (tau_max_ms - tau_min_ms) + t_ul_ms;
}

bool essa_feasible(double tau_min_ms, double t_ul_ms) { return 2.0 * tau_min_ms >= t_ul_ms; }

int guard_slots(double tau_max_ms, double slot_ms) {
    if (!(tau_max_ms >= 0)) throw DomainError("tau_M must be >= 0");
    if (!(slot_ms > 0)) throw DomainError("slot duration must be > 0");
    return std::max(0, ceil_slots(2.0 * tau_max_ms, slot_ms));
}

int essa_dl_gap_slots(double tau_min_ms, double tau_max_ms, const SlotGrid& grid) {
    check_delays(tau_min_ms, tau_max_ms);
    const int g = guard_slots(tau_max_ms, grid.slot_ms);
    return g + ceil_slots(grid.ul_duration_ms() - 2.0 * tau_min_ms, grid.slot_ms);
}

SlotTimeline build_ta_timeline(const SlotGrid& grid, const SlotPattern& pattern, double tau_max_ms,
                               double tau_min_ms) {
    grid.validate();
    pattern.validate();
    if (tau_min_ms < 0) tau_min_ms = tau_max_ms;
    check_delays(tau_min_ms, tau_max_ms);

    SlotTimeline tl = empty_timeline(grid, pattern, Policy::TA, tau_min_ms, tau_max_ms);
    tl.guard_slots = guard_slots(tau_max_ms, grid.slot_ms);
    tl.dl_gap_slots = tl.guard_slots + grid.ul_slots;
    const SlotIndex period = pattern.dl_slots + tl.guard_slots + grid.ul_slots;
    for (SlotIndex start = 0; start + period <= grid.horizon_slots; start += period) place(tl, start);
    tl.incomplete = tl.records.empty();
    return tl;
}

SlotTimeline build_essa_timeline(const SlotGrid& grid, const SlotPattern& pattern, double tau_min_ms,
                                 double tau_max_ms) {
    grid.validate();
    pattern.validate();
    check_delays(tau_min_ms, tau_max_ms);
    if (!essa_feasible(tau_min_ms, grid.ul_duration_ms()))
        throw InfeasibleError("ESSA infeasible: 2*tau_m < t_UL; use the TA frame structure instead");

    SlotTimeline tl = empty_timeline(grid, pattern, Policy::ESSA, tau_min_ms, tau_max_ms);
    tl.guard_slots = guard_slots(tau_max_ms, grid.slot_ms);
    tl.dl_gap_slots = essa_dl_gap_slots(tau_min_ms, tau_max_ms, grid);

    const SlotIndex x = pattern.dl_slots;
    const SlotIndex g = tl.guard_slots;
    const SlotIndex n_ul = grid.ul_slots;
    SlotIndex candidate = 0;
    while (candidate + x + g + n_ul <= grid.horizon_slots) {
        // A DL landing on a reserved UL moves to the slot right after it.
        if (const SlotIndex hit = last_occupied(tl, candidate, candidate + x); hit >= 0) {
            candidate = hit + 1;
            continue;
        }
        if (last_occupied(tl, candidate + x + g, candidate + x + g + n_ul) >= 0) {
            ++candidate;
            continue;
        }
        place(tl, candidate);
        candidate += x + tl.dl_gap_slots;
    }
    tl.incomplete = tl.records.empty();
    return tl;
}

SlotTimeline build_manual_timeline(const SlotGrid& grid, const SlotPattern& pattern, double tau_min_ms,
                                   double tau_max_ms, std::span<const SlotIndex> dl_starts) {
    grid.validate();
    pattern.validate();
    check_delays(tau_min_ms, tau_max_ms);
    SlotTimeline tl = empty_timeline(grid, pattern, Policy::ESSA, tau_min_ms, tau_max_ms);
    tl.guard_slots = guard_slots(tau_max_ms, grid.slot_ms);
    tl.dl_gap_slots = essa_dl_gap_slots(tau_min_ms, tau_max_ms, grid);
    std::vector<SlotIndex> starts(dl_starts.begin(), dl_starts.end());
    std::sort(starts.begin(), starts.end());
    for (SlotIndex s : starts) {
        const SlotIndex end_ul = s + pattern.dl_slots + tl.guard_slots + grid.ul_slots;
        if (s < 0 || end_ul > grid.horizon_slots) throw DomainError("manual transmission exceeds the horizon");
        if (last_occupied(tl, s, s + pattern.dl_slots) >= 0 ||
            last_occupied(tl, end_ul - grid.ul_slots, end_ul) >= 0)
            throw DomainError("manual transmissions overlap in slot occupancy");
        place(tl, s);
    }
    tl.incomplete = tl.records.empty();
    return tl;
}

std::string Violation::describe() const {
    std::ostringstream os;
    os << (kind == Kind::SatelliteOverlap ? "satellite DL/UL overlap" : "UE half-duplex overlap")
       << " ue=" << ue_id << " ul_tx=" << ul_tx << " dl_tx=" << dl_tx << " overlap_ms=" << overlap_ms;
    return os.str();
}

Assignment assign_all(const SlotTimeline& timeline, std::span<const UeGeometry> ues) {
    std::vector<int> ids;
    ids.reserve(ues.size());
    for (const auto& u : ues) ids.push_back(u.ue_id);
    return Assignment(timeline.records.size(), ids);
}

std::vector<Violation> verify_no_interference(const SlotTimeline& timeline, std::span<const UeGeometry> ues,
                                              const Assignment& assignment) {
    const auto& records = timeline.records;
    if (assignment.size() != records.size())
        throw DomainError("assignment must cover every transmission");

    std::unordered_map<int, double> delay_of;
    for (const auto& u : ues) delay_of[u.ue_id] = u.delay_ms;

    const double slot = timeline.grid.slot_ms;
    const double t_ul = timeline.grid.ul_duration_ms();

    // DL transmit intervals at the satellite, ordered by start (and hence by end).
    std::vector<const TransmissionRecord*> dls;
    dls.reserve(records.size());
    for (const auto& r : records) dls.push_back(&r);
    std::sort(dls.begin(), dls.end(),
              [](const auto* a, const auto* b) { return a->dl_start < b->dl_start; });

    std::vector<Violation> out;

    // Reports every DL whose interval [s + shift, e + shift) overlaps [lo, hi).
    auto scan = [&](double lo, double hi, double shift, Violation::Kind kind, int ue, int ul_tx) {
        auto it = std::partition_point(dls.begin(), dls.end(), [&](const auto* d) {
            return static_cast<double>(d->dl_end()) * slot + shift <= lo + kTimeEps;
        });
        for (; it != dls.end(); ++it) {
            const double s = static_cast<double>((*it)->dl_start) * slot + shift;
            const double e = static_cast<double>((*it)->dl_end()) * slot + shift;
            if (s >= hi - kTimeEps) break;
            const double overlap = std::min(e, hi) - std::max(s, lo);
            if (overlap > kTimeEps) out.push_back({kind, ue, ul_tx, (*it)->tx_index, overlap});
        }
    };

    for (std::size_t k = 0; k < records.size(); ++k) {
        const auto& rec = records[k];
        if (assignment[k].empty()) throw DomainError("transmission " + std::to_string(k) + " has no UE assigned");
        const double ul_at_sat = static_cast<double>(rec.ul_slot) * slot;
        for (int ue : assignment[k]) {
            const auto found = delay_of.find(ue);
            if (found == delay_of.end())
                throw DomainError("transmission assigned to unknown UE " + std::to_string(ue));
            const double tau = found->second;
            // The UE transmits early by its own delay so the UL arrives on the slot boundary.
            const double tx_start = ul_at_sat - tau;
            const double tx_end = tx_start + t_ul;
            const double arrive_start = tx_start + tau;
            const double arrive_end = tx_end + tau;
            scan(arrive_start, arrive_end, 0.0, Violation::Kind::SatelliteOverlap, ue, rec.tx_index);
            scan(tx_start, tx_end, tau, Violation::Kind::UeHalfDuplex, ue, rec.tx_index);
        }
    }
    return out;
}

} // namespace ntn
