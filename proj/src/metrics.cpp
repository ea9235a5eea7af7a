#include "ntn/metrics.hpp"

#include <cmath>

#include "ntn/errors.hpp"

namespace ntn {
namespace {

struct Window {
    SlotIndex begin;
    SlotIndex end;
};

Window measurement_window(const SlotTimeline& tl) {
    const SlotIndex begin = tl.measure_begin();
    const SlotIndex end = tl.measure_end();
    if (end <= begin) return {0, static_cast<SlotIndex>(tl.slots.size())};
    return {begin, end};
}

} // namespace

MetricVector MetricsReport::values() const {
    MetricVector v;
    v << avg_guard_period_ms, channel_usage_pct, dl_usage_pct, ul_usage_pct, avg_capacity_mbps,
        dl_capacity_mbps, ul_capacity_mbps;
    return v;
}

MetricsReport MetricsReport::from_values(const MetricVector& v, int n_runs) {
    MetricsReport r;
    r.avg_guard_period_ms = v(0);
    r.channel_usage_pct = v(1);
    r.dl_usage_pct = v(2);
    r.ul_usage_pct = v(3);
    r.avg_capacity_mbps = v(4);
    r.dl_capacity_mbps = v(5);
    r.ul_capacity_mbps = v(6);
    r.n_runs = n_runs;
    return r;
}

double guard_period(const SlotTimeline& timeline) {
    if (timeline.measure_end() <= timeline.measure_begin())
        throw DomainError("timeline too short: no complete transmission after warm-up");
    const Window w{timeline.measure_begin(), timeline.measure_end()};
    const auto& recs = timeline.records;
    double idle_total = 0.0;
    int pairs = 0;
    for (std::size_t k = 0; k + 1 < recs.size(); ++k) {
        if (recs[k].dl_start < w.begin || recs[k].dl_start >= w.end) continue;
        for (SlotIndex s = recs[k].dl_end(); s < recs[k + 1].dl_start; ++s)
            if (timeline.slots[static_cast<std::size_t>(s)].state == SlotState::Idle) idle_total += 1.0;
        ++pairs;
    }
    if (pairs == 0) throw DomainError("no transmission pair inside the measurement window");
    return idle_total / pairs * timeline.grid.slot_ms;
}

ChannelUsage channel_usage(const SlotTimeline& timeline) {
    const Window w = measurement_window(timeline);
    if (w.end <= w.begin) throw DomainError("empty timeline");
    SlotIndex dl = 0;
    SlotIndex ul = 0;
    for (SlotIndex s = w.begin; s < w.end; ++s) {
        const auto state = timeline.slots[static_cast<std::size_t>(s)].state;
        dl += state == SlotState::Downlink;
        ul += state == SlotState::Uplink;
    }
    const double n = static_cast<double>(w.end - w.begin);
    ChannelUsage u;
    u.dl_pct = 100.0 * static_cast<double>(dl) / n;
    u.ul_pct = 100.0 * static_cast<double>(ul) / n;
    u.total_pct = u.dl_pct + u.ul_pct;
    return u;
}

CapacitySplit capacity(const SelectionResult& selection, std::span<const LinkQuality> links,
                       const ChannelUsage& usage) {
    if (links.size() != selection.selected_ids.size())
        throw DomainError("capacity needs one link per selected UE");
    if (links.empty()) throw DomainError("capacity needs a non-empty selection");
    double mean = 0.0;
    for (const auto& l : links) mean += l.capacity_mbps;
    mean /= static_cast<double>(links.size());
    CapacitySplit c;
    c.dl_mbps = mean * usage.dl_pct / 100.0;
    c.ul_mbps = mean * usage.ul_pct / 100.0;
    c.total_mbps = c.dl_mbps + c.ul_mbps;
    return c;
}

MetricsReport evaluate(const SlotTimeline& timeline, const SelectionResult& selection,
                       std::span<const LinkQuality> links) {
    const ChannelUsage usage = channel_usage(timeline);
    const CapacitySplit cap = capacity(selection, links, usage);
    MetricsReport r;
    r.avg_guard_period_ms = guard_period(timeline);
    r.channel_usage_pct = usage.total_pct;
    r.dl_usage_pct = usage.dl_pct;
    r.ul_usage_pct = usage.ul_pct;
    r.avg_capacity_mbps = cap.total_mbps;
    r.dl_capacity_mbps = cap.dl_mbps;
    r.ul_capacity_mbps = cap.ul_mbps;
    return r;
}

void MetricsAccumulator::add(const MetricsReport& report) {
    ++count_;
    const MetricVector x = report.values();
    const MetricVector delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
}

void MetricsAccumulator::merge(const MetricsAccumulator& other) {
    if (other.count_ == 0) return;
    if (count_ == 0) {
        *this = other;
        return;
    }
    const double na = count_;
    const double nb = other.count_;
    const double n = na + nb;
    const MetricVector delta = other.mean_ - mean_;
    mean_ += delta * (nb / n);
    m2_ += other.m2_ + delta.square() * (na * nb / n);
    count_ += other.count_;
}

MetricsReport MetricsAccumulator::result() const {
    if (count_ == 0) throw DomainError("aggregate needs at least one report");
    MetricsReport r = MetricsReport::from_values(mean_, count_);
    // Keep the sum identities exact after averaging.
    r.channel_usage_pct = r.dl_usage_pct + r.ul_usage_pct;
    r.avg_capacity_mbps = r.dl_capacity_mbps + r.ul_capacity_mbps;
    if (count_ >= 2) {
        const MetricVector sd = (m2_.max(0.0) / (count_ - 1)).sqrt();
        r.ci95_halfwidth = 1.96 * sd / std::sqrt(static_cast<double>(count_));
    }
    return r;
}

MetricsReport aggregate(std::span<const MetricsReport> reports) {
    MetricsAccumulator acc;
    for (const auto& r : reports) acc.add(r);
    return acc.result();
}

} // namespace ntn
